#include "tadpole/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <optional>

#include <fmt/format.h>

#include "internal/json_writer.hpp"
#include "tadpole/dynamics.hpp"
#include "tadpole/errors.hpp"
#include "tadpole/existence.hpp"
#include "tadpole/spectral.hpp"

namespace tadpole {

namespace fs = std::filesystem;
using detail::Json;
using detail::to_json_array;

namespace {

constexpr const char* kEnergyConvention =
    "E = c2^2 [ sum_j c_j^-2 int (v^2/2 + 1 - cos u) + 1/2 sum_j int (u_x)^2 - Z u(v)^2/2 ]";

struct Resolved {
  StationaryState state;
  ExistenceCase kase;
  std::vector<double> roots;
};

Resolved resolve_state(const RunManifest& m, bool allow_center_any_Z) {
  const GraphParams& g = m.params;
  g.validate();
  if (m.branch == Branch::Center) {
    ExistenceCase c = classify(g, Branch::Center);
    if (!c.z_admissible && !allow_center_any_Z) {
      throw InadmissibleError(
          fmt::format("degenerate state needs Z = 2/(pi c2) = {:.17g}", g.strength_bound()),
          c.case_id);
    }
    return {center_state(g), c, {0.0}};
  }
  if (m.k) {
    ExistenceCase c = classify(g, m.branch);
    try {
      return {make_state(g, *m.k, m.branch), c, {*m.k}};
    } catch (const InvalidStateError& e) {
      throw InadmissibleError(e.what(), c.case_id);
    } catch (const DomainError& e) {
      throw InadmissibleError(e.what(), c.case_id);
    }
  }
  GluingOutcome out = solve_gluing(g, m.branch);
  if (!out.solution) {
    throw InadmissibleError("no single-lobe kink state for these parameters (case " +
                                out.kase.case_id + ")",
                            out.kase.case_id);
  }
  return {out.solution->state(g), out.kase, out.roots};
}

Json case_json(const ExistenceCase& c) {
  Json j;
  j["case_id"] = c.case_id;
  j["regime"] = std::string(to_string(c.regime));
  j["sign_Z"] = std::string(to_string(c.sign_Z));
  j["solvable"] = c.solvable;
  j["admissible_Z"] = Json::array({c.admissible_Z.lo, c.admissible_Z.hi});
  j["k_window"] = Json::array({c.k_window.lo, c.k_window.hi});
  j["z_admissible"] = c.z_admissible;
  return j;
}

Json metadata(const RunManifest& m, const Discretization* d) {
  Json j;
  if (d) {
    j["h"] = d->h();
    j["h_loop"] = d->h_loop();
    j["h_tail"] = d->h_tail();
    j["R"] = d->R();
  }
  j["defaults"] = Json{{"h", "1e-3*min(L,c2)"},
                       {"R", "40*c2"},
                       {"tol_zero", "max(1e-8, 5*h^2*max|V|)"},
                       {"essential_edge_guard", "edge - 10*h"}};
  j["inner_product"] = "sum_j c_j^-2 int v^2";
  j["energy_convention"] = kEnergyConvention;
  j["manifest"] = Json::parse(m.to_json());
  return j;
}

std::string out_path(const RunManifest& m, const std::string& name) {
  fs::create_directories(m.output_dir);
  return (fs::path(m.output_dir) / name).string();
}

Json state_json(const StationaryState& s) {
  Json j;
  j["branch"] = std::string(to_string(s.loop.branch()));
  j["k"] = s.loop.k();
  j["a"] = s.tail.a;
  j["E"] = s.energy_E;
  j["K"] = s.loop.K();
  if (s.loop.branch() == Branch::Crossing) {
    j["b"] = s.loop.b();
  } else {
    j["b"] = nullptr;
  }
  j["admissible"] = s.admissible();
  j["flux_residual"] = s.flux_residual();
  j["continuity_residual"] = s.continuity_residual();
  return j;
}

Json report_json(const SpectrumReport& r) {
  Json j;
  j["method"] = std::string(to_string(r.method));
  j["eigenvalues"] = to_json_array(r.eigenvalues);
  j["eigenvalues_h"] = to_json_array(r.eigenvalues_h);
  j["eigenvalues_h2"] = to_json_array(r.eigenvalues_h2);
  Json flags = Json::array();
  for (bool b : r.near_edge) flags.push_back(b);
  j["near_edge"] = flags;
  if (!r.embedded.empty()) j["embedded"] = to_json_array(r.embedded);
  j["morse_index"] = r.morse_index;
  j["kernel_dim"] = r.kernel_dim;
  j["tol_zero"] = r.tol_zero;
  j["essential_edge"] = r.essential_edge;
  return j;
}

void graph_columns(const RunManifest& m, const Discretization& d,
                   const std::vector<GraphFunction>& fs_, std::vector<std::vector<double>>& cols) {
  const double L = m.params.L;
  std::vector<double> x;
  for (int i = 0; i < d.N_loop(); ++i) x.push_back(i + 1 == d.N_loop() ? L : d.loop_x(i));
  for (int j = 1; j < d.N_tail(); ++j) x.push_back(L + d.tail_y(j));
  cols.push_back(std::move(x));
  for (const auto& f : fs_) {
    std::vector<double> c(f.loop.begin(), f.loop.end());
    c.insert(c.end(), f.tail.begin() + 1, f.tail.end());
    cols.push_back(std::move(c));
  }
}

struct SpectralBundle {
  SpectrumReport direct;
  SplittingReport split;
  SplittingCheck check;
  KernelCertificate kernel;
  bool lobe = false;
};

SpectralBundle spectral_bundle(const StationaryState& s, const Discretization& d) {
  SpectralBundle b;
  b.direct = direct_spectrum(s, d, 6);
  b.split = splitting_spectrum(s, d, 4);
  const double sup = assemble_linearized(s, d).potential_sup;
  b.check = splitting_consistency(b.direct, b.split, 5.0 * d.h() * d.h() * sup);
  b.kernel = kernel_certificate(s, b.direct);
  b.lobe = lobe_condition_check(s, d);
  return b;
}

Json bundle_json(const SpectralBundle& b) {
  Json j;
  j["direct"] = report_json(b.direct);
  Json sp;
  sp["periodic"] = report_json(b.split.periodic);
  sp["delta"] = report_json(b.split.delta);
  sp["loop_dirichlet"] = report_json(b.split.dirichlet);
  sp["shared"] = to_json_array(b.split.shared);
  Json chk;
  chk["consistent"] = b.check.consistent;
  chk["tolerance"] = b.check.tolerance;
  Json entries = Json::array();
  for (const auto& e : b.check.entries) {
    entries.push_back(Json{{"direct", e.direct},
                           {"periodic_nearest", e.periodic_nearest},
                           {"delta_nearest", e.delta_nearest},
                           {"dirichlet_nearest", e.dirichlet_nearest},
                           {"accounted_by", e.accounted_by}});
  }
  chk["entries"] = entries;
  sp["consistency"] = chk;
  j["splitting"] = sp;
  j["kernel"] = Json{{"alpha_a", b.kernel.alpha_a},
                     {"case", b.kernel.case_label},
                     {"analytic_trivial", b.kernel.analytic_trivial},
                     {"min_abs_eigenvalue", b.kernel.min_abs_eigenvalue},
                     {"numeric_trivial", b.kernel.numeric_trivial}};
  j["lobe_condition"] = b.lobe;
  return j;
}

GraphOperator positive_test_operator(const GraphParams& g, const Discretization& d) {
  GraphParams p = g;
  p.Z = 0.0;
  GraphFunction V{std::vector<double>(d.N_loop(), 1.0), std::vector<double>(d.N_tail(), 1.0)};
  return assemble_with_potential(p, d, V);
}

Json verdict_json(const StabilityVerdict& v) {
  return Json{{"n", v.n},
              {"kernel_trivial", v.kernel_trivial},
              {"verdict", std::string(to_string(v.verdict))},
              {"predicted_growth", v.predicted_growth},
              {"observed_gap", v.observed_gap}};
}

Json evolution_json(const InstabilityResult& r) {
  return Json{{"amplitude", r.amplitude},
              {"fitted_growth", r.fitted_growth},
              {"predicted_growth", r.predicted_growth},
              {"relative_mismatch", r.relative_mismatch},
              {"fit_window_deviation", Json::array({r.window_lo, r.window_hi})},
              {"fit_window_time", Json::array({r.trace.fit.t0, r.trace.fit.t1})},
              {"fit_residual", r.trace.fit.residual},
              {"fit_points", r.trace.fit.points},
              {"aborted", r.trace.aborted}};
}

}  // namespace

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const InadmissibleError&) {
    return 2;
  } catch (const InvalidStateError&) {
    return 2;
  } catch (const DomainError&) {
    return 2;
  } catch (const NumericalError&) {
    return 3;
  } catch (const PreconditionError&) {
    return 3;
  } catch (const DimensionError&) {
    return 3;
  } catch (...) {
    return 3;
  }
}

CommandResult cmd_profile(const RunManifest& m) {
  const Resolved r = resolve_state(m, true);
  const Discretization d(m.params, m.grid.h, m.grid.R);
  const SampledState smp = sample_state(r.state, d);

  std::vector<std::vector<double>> cols;
  graph_columns(m, d,
                {GraphFunction{smp.loop_value, smp.tail_value},
                 GraphFunction{smp.loop_derivative, smp.tail_derivative}},
                cols);
  CommandResult out;
  out.files.push_back(out_path(m, "profile.csv"));
  detail::write_csv(out.files.back(), {"x", "value", "derivative"}, cols);

  Json j = state_json(r.state);
  j["case"] = r.kase.case_id;
  j["metadata"] = metadata(m, &d);
  out.files.push_back(out_path(m, "profile.json"));
  detail::write_text(out.files.back(), detail::dump_stable(j));
  out.summary = fmt::format("profile: branch {} k={:.12g} a={:.12g} case {}",
                            to_string(r.state.loop.branch()), r.state.loop.k(),
                            r.state.tail.a, r.kase.case_id);
  return out;
}

CommandResult cmd_exists(const RunManifest& m) {
  const GraphParams& g = m.params;
  g.validate();
  const GluingOutcome sol = solve_gluing(g, m.branch);
  const Interval w = branch_window(g, m.branch);

  std::vector<double> ks, as, hs;
  std::vector<std::string> labels;
  if (!w.empty()) {
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
      const double k = w.lo + (w.hi - w.lo) * i / (n - 1);
      try {
        const EllipticModulus km(k);
        const double a = shift_map_a(km, g, m.branch);
        const double H = existence_function_H(km, g, m.branch);
        ks.push_back(k);
        as.push_back(a);
        hs.push_back(H);
        labels.push_back(sol.kase.case_id);
      } catch (const DomainError&) {
      }
    }
  }
  CommandResult out;
  out.files.push_back(out_path(m, "exists.csv"));
  detail::write_csv(out.files.back(), {"k", "a", "H", "case"}, {ks, as, hs}, labels);

  Json j;
  j["case"] = case_json(sol.kase);
  const auto k0 = modulus_threshold_k0(g.L, g.c1);
  if (k0) {
    j["k0"] = *k0;
  } else {
    j["k0"] = nullptr;
  }
  j["rho"] = g.c1 / (2.0 * g.c2);
  j["tanh_L_over_c1"] = std::tanh(g.L / g.c1);
  j["strength_bound"] = g.strength_bound();
  j["roots"] = to_json_array(sol.roots);
  if (m.branch == Branch::Crossing && !w.empty()) {
    j["F_zeros"] = to_json_array(neumann_F_zeros(g));
  }
  if (sol.solution) {
    j["selected"] = Json{{"k", sol.solution->k_Z.k()},
                         {"a", sol.solution->a},
                         {"flux_residual", sol.solution->residual}};
  } else {
    j["selected"] = nullptr;
  }
  j["metadata"] = metadata(m, nullptr);
  out.files.push_back(out_path(m, "exists.json"));
  detail::write_text(out.files.back(), detail::dump_stable(j));
  out.summary = fmt::format("exists: case {} roots {} selected {}", sol.kase.case_id,
                            sol.roots.size(),
                            sol.solution ? fmt::format("{:.12g}", sol.solution->k_Z.k())
                                         : std::string("none"));
  return out;
}

CommandResult cmd_spectrum(const RunManifest& m) {
  const Discretization d(m.params, m.grid.h, m.grid.R);
  CommandResult out;
  Json j;
  std::vector<GraphFunction> modes;

  if (m.op == OperatorKind::Laplacian) {
    const SpectrumReport direct = direct_laplacian_spectrum(m.params, d);
    j["operator"] = "laplacian";
    j["analytic"] = report_json(laplacian_point_spectrum(m.params));
    j["direct"] = report_json(direct);
    modes = direct.modes;
    out.summary = fmt::format("spectrum (F_Z): {} negative eigenvalue(s)", direct.morse_index);
  } else if (m.op == OperatorKind::PositiveTest) {
    const SpectrumReport direct = operator_spectrum(positive_test_operator(m.params, d), 4, 1.0);
    j["operator"] = "positive-test";
    j["direct"] = report_json(direct);
    modes = direct.modes;
    out.summary = fmt::format("spectrum (positive test): morse {}", direct.morse_index);
  } else {
    const Resolved r = resolve_state(m, false);
    const SpectralBundle b = spectral_bundle(r.state, d);
    j["operator"] = "linearized";
    j["state"] = state_json(r.state);
    j["case"] = r.kase.case_id;
    j.update(bundle_json(b));
    modes = b.direct.modes;
    out.summary = fmt::format("spectrum: morse {} kernel {} lambda0 {:.12g}", b.direct.morse_index,
                              b.direct.kernel_dim,
                              b.direct.eigenvalues.empty() ? NAN : b.direct.eigenvalues.front());
  }
  j["metadata"] = metadata(m, &d);
  out.files.push_back(out_path(m, "spectrum.json"));
  detail::write_text(out.files.back(), detail::dump_stable(j));

  std::vector<std::vector<double>> cols;
  graph_columns(m, d, modes, cols);
  std::vector<std::string> header{"x"};
  for (std::size_t i = 0; i < modes.size(); ++i) header.push_back(fmt::format("mode_{}", i));
  out.files.push_back(out_path(m, "modes.csv"));
  detail::write_csv(out.files.back(), header, cols);
  return out;
}

CommandResult cmd_evolve(const RunManifest& m) {
  const Resolved r = resolve_state(m, false);
  const Discretization d(m.params, m.grid.h, m.grid.R);
  const SpectrumReport spec = direct_spectrum(r.state, d, 3);
  const InstabilityResult res = instability_experiment(r.state, spec, m.amplitude, d);

  CommandResult out;
  out.files.push_back(out_path(m, "trace.csv"));
  detail::write_csv(out.files.back(), {"t", "deviation", "energy"},
                    {res.trace.times, res.trace.deviation_norms, res.trace.energies});
  Json j = evolution_json(res);
  j["case"] = r.kase.case_id;
  j["metadata"] = metadata(m, &d);
  out.files.push_back(out_path(m, "evolve.json"));
  detail::write_text(out.files.back(), detail::dump_stable(j));
  out.summary = fmt::format("evolve: sigma {:.8g} predicted {:.8g} mismatch {:.3g}",
                            res.fitted_growth, res.predicted_growth, res.relative_mismatch);
  return out;
}

CommandResult cmd_certify(const RunManifest& m) {
  const Discretization d(m.params, m.grid.h, m.grid.R);
  Json j;
  StabilityVerdict v;
  if (m.op == OperatorKind::PositiveTest) {
    const SpectrumReport direct = operator_spectrum(positive_test_operator(m.params, d), 4, 1.0);
    v = stability_verdict(direct, direct.kernel_dim == 0);
    j["case"] = "positive-test";
    j["verdict"] = verdict_json(v);
    j["direct"] = report_json(direct);
  } else {
    const Resolved r = resolve_state(m, false);
    const SpectralBundle b = spectral_bundle(r.state, d);
    v = stability_verdict(b.direct, b.kernel.trivial());
    j["case"] = r.kase.case_id;
    j["verdict"] = verdict_json(v);
    j["state"] = state_json(r.state);
    j.update(bundle_json(b));
    if (m.evolve_check && v.n == 1) {
      j["evolution"] = evolution_json(instability_experiment(r.state, b.direct, m.amplitude, d));
    } else {
      j["evolution"] = nullptr;
    }
  }
  j["metadata"] = metadata(m, &d);
  CommandResult out;
  out.files.push_back(out_path(m, "verdict.json"));
  detail::write_text(out.files.back(), detail::dump_stable(j));
  out.summary = fmt::format("certify: {} (n={}, kernel {})", to_string(v.verdict), v.n,
                            v.kernel_trivial ? "trivial" : "not certified");
  return out;
}

CommandResult run_command(const RunManifest& m) {
  switch (m.command) {
    case Command::Profile:
      return cmd_profile(m);
    case Command::Exists:
      return cmd_exists(m);
    case Command::Spectrum:
      return cmd_spectrum(m);
    case Command::Evolve:
      return cmd_evolve(m);
    case Command::Certify:
      return cmd_certify(m);
  }
  throw DomainError("unknown command");
}

CommandResult cmd_certify_sweep(std::string_view sweep_json, const RunManifest& base) {
  Json arr;
  try {
    arr = Json::parse(sweep_json.begin(), sweep_json.end());
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("sweep file is not valid JSON: ") + e.what());
  }
  if (!arr.is_array()) throw DomainError("sweep file must hold a JSON array");

  std::vector<RunManifest> points;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    RunManifest p = RunManifest::from_json(arr[i].dump());
    if (!arr[i].contains("params")) {
      const GraphParams g = p.params;
      p = base;
      p.params = g;
    }
    p.command = Command::Certify;
    p.output_dir = (fs::path(base.output_dir) / fmt::format("point_{}", i)).string();
    points.push_back(std::move(p));
  }

  struct Outcome {
    int code;
    std::string message;
  };
  std::vector<std::future<Outcome>> jobs;
  for (const auto& p : points) {
    jobs.push_back(std::async(std::launch::async, [p]() -> Outcome {
      try {
        return {0, cmd_certify(p).summary};
      } catch (const std::exception& e) {
        return {exit_code_for_current_exception(), e.what()};
      }
    }));
  }
  Json summary = Json::array();
  CommandResult out;
  int failures = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Outcome o = jobs[i].get();
    if (o.code != 0) ++failures;
    summary.push_back(Json{{"point", i},
                           {"output_dir", points[i].output_dir},
                           {"exit_code", o.code},
                           {"message", o.message}});
  }
  RunManifest root = base;
  out.files.push_back(out_path(root, "sweep.json"));
  detail::write_text(out.files.back(), detail::dump_stable(Json{{"points", summary}}));
  out.summary = fmt::format("sweep: {} point(s), {} failed", points.size(), failures);
  return out;
}

}  // namespace tadpole
