// tadpole: one subcommand per process, files written under --out.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tadpole/commands.hpp"
#include "tadpole/errors.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tadpole::DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Flags {
  std::string params_file;
  std::string k;  // empty keeps the manifest value
  std::string branch;
  std::string out;
  std::string op;
  std::string sweep;
  double grid_h = -1.0;
  double grid_R = -1.0;
  double amplitude = -1.0;
  bool no_evolve = false;
  double L = NAN, c1 = NAN, c2 = NAN, Z = NAN;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--params", f.params_file, "JSON manifest or {L,c1,c2,Z} object");
  sub->add_option("--k", f.k, "elliptic modulus k, or 'auto' to solve H(k) = Z");
  sub->add_option("--branch", f.branch, "above-pi | crossing | center");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--grid-h", f.grid_h, "target mesh width");
  sub->add_option("--grid-R", f.grid_R, "tail truncation length");
  sub->add_option("--L", f.L, "loop half-length");
  sub->add_option("--c1", f.c1, "loop wave speed");
  sub->add_option("--c2", f.c2, "tail wave speed");
  sub->add_option("--Z", f.Z, "vertex strength");
}

tadpole::RunManifest build_manifest(tadpole::Command c, const Flags& f) {
  using namespace tadpole;
  RunManifest m;
  if (!f.params_file.empty()) m = RunManifest::from_json(slurp(f.params_file));
  m.command = c;
  if (!std::isnan(f.L)) m.params.L = f.L;
  if (!std::isnan(f.c1)) m.params.c1 = f.c1;
  if (!std::isnan(f.c2)) m.params.c2 = f.c2;
  if (!std::isnan(f.Z)) m.params.Z = f.Z;
  if (!f.branch.empty()) m.branch = parse_branch(f.branch);
  if (f.k == "auto") {
    m.k.reset();
  } else if (!f.k.empty()) {
    try {
      std::size_t used = 0;
      m.k = std::stod(f.k, &used);
      if (used != f.k.size()) throw std::invalid_argument(f.k);
    } catch (const std::logic_error&) {
      throw DomainError("--k expects a number or 'auto', got '" + f.k + "'");
    }
  }
  if (!f.out.empty()) m.output_dir = f.out;
  if (f.grid_h >= 0.0) m.grid.h = f.grid_h;
  if (f.grid_R >= 0.0) m.grid.R = f.grid_R;
  if (!f.op.empty()) m.op = parse_operator(f.op);
  if (f.amplitude > 0.0) m.amplitude = f.amplitude;
  if (f.no_evolve) m.evolve_check = false;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-lobe kink states of sine-Gordon on a tadpole graph"};
  app.require_subcommand(1);
  Flags f;

  auto* profile = app.add_subcommand("profile", "stationary profile CSV + JSON");
  auto* exists = app.add_subcommand("exists", "existence sweep of H(k) and its roots");
  auto* spectrum = app.add_subcommand("spectrum", "negative point spectrum and modes");
  auto* evolve = app.add_subcommand("evolve", "perturbed evolution and growth-rate fit");
  auto* certify = app.add_subcommand("certify", "full pipeline, single verdict JSON");
  for (auto* s : {profile, exists, spectrum, evolve, certify}) add_common(s, f);
  for (auto* s : {spectrum, certify})
    s->add_option("--operator", f.op, "linearized | laplacian | positive-test");
  for (auto* s : {evolve, certify})
    s->add_option("--amplitude", f.amplitude, "seed amplitude of the ground mode");
  certify->add_flag("--no-evolve", f.no_evolve, "skip the evolution check");
  certify->add_option("--sweep", f.sweep, "JSON array of parameter points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    using tadpole::Command;
    Command c = Command::Certify;
    if (profile->parsed()) c = Command::Profile;
    if (exists->parsed()) c = Command::Exists;
    if (spectrum->parsed()) c = Command::Spectrum;
    if (evolve->parsed()) c = Command::Evolve;
    const tadpole::RunManifest m = build_manifest(c, f);
    const tadpole::CommandResult r = !f.sweep.empty()
                                         ? tadpole::cmd_certify_sweep(slurp(f.sweep), m)
                                         : tadpole::run_command(m);
    std::cout << r.summary << '\n';
    for (const auto& p : r.files) std::cout << "  wrote " << p << '\n';
    return 0;
  } catch (const tadpole::InadmissibleError& e) {
    std::cerr << "inadmissible [case " << e.case_label() << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tadpole::exit_code_for_current_exception();
  }
}
