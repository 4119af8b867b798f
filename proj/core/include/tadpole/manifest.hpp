#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "tadpole/profiles.hpp"

namespace tadpole {

enum class Command { Profile, Exists, Spectrum, Evolve, Certify };

std::string_view to_string(Command c);
Command parse_command(std::string_view s);

/// Which operator a spectrum/certify run works on. PositiveTest replaces the
/// linearization by the constant potential +1 with Z = 0 (Morse index 0).
enum class OperatorKind { Linearized, Laplacian, PositiveTest };

std::string_view to_string(OperatorKind o);
OperatorKind parse_operator(std::string_view s);

struct GridOverrides {
  double h = 0.0;  // 0 selects 1e-3 * min(L, c2)
  double R = 0.0;  // 0 selects 40 * c2

  bool operator==(const GridOverrides&) const = default;
};

/// Everything a command needs; all computations are deterministic.
struct RunManifest {
  Command command = Command::Certify;
  GraphParams params;
  Branch branch = Branch::AbovePi;
  std::optional<double> k;  // empty means "auto" (solve H(k) = Z)
  GridOverrides grid;
  std::string output_dir = "out";
  OperatorKind op = OperatorKind::Linearized;
  bool evolve_check = true;
  double amplitude = 1e-4;

  std::string to_json() const;
  /// Accepts a full manifest, or a bare {"L","c1","c2","Z"} object whose
  /// remaining fields take their defaults. Throws DomainError on bad input.
  static RunManifest from_json(std::string_view text);

  bool operator==(const RunManifest&) const = default;
};

}  // namespace tadpole
