#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tadpole/manifest.hpp"

namespace tadpole {

struct CommandResult {
  std::vector<std::string> files;  // paths written, in order
  std::string summary;             // one line for the terminal
};

/// profile.csv (x, value, derivative in graph coordinates: loop -L..L, then
/// tail L..L+R) and profile.json (k, a, E, case label, b, residuals).
CommandResult cmd_profile(const RunManifest& m);
/// exists.csv (k, a, H, case) over the branch window and exists.json with
/// the case row, all roots of H(k) = Z and the selected one.
CommandResult cmd_exists(const RunManifest& m);
/// spectrum.json and modes.csv.
CommandResult cmd_spectrum(const RunManifest& m);
/// trace.csv (t, deviation, energy) and evolve.json.
CommandResult cmd_evolve(const RunManifest& m);
/// verdict.json from solve -> spectra (both methods) -> kernel -> verdict
/// -> optional evolution check.
CommandResult cmd_certify(const RunManifest& m);

CommandResult run_command(const RunManifest& m);

/// Sweep file: JSON array of manifests (or bare parameter objects). Point i
/// runs certify into <out>/point_<i>; points run concurrently. Writes
/// <out>/sweep.json with per-point outcome and exit code.
CommandResult cmd_certify_sweep(std::string_view sweep_json, const RunManifest& base);

/// Exit-code contract: 0 success, 2 inadmissible parameters, 3 numerical failure.
int exit_code_for_current_exception();

}  // namespace tadpole
