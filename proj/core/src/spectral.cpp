#include "tadpole/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tadpole/errors.hpp"

namespace tadpole {

namespace {

using Triplet = Eigen::Triplet<double>;

void add_edge(std::vector<Triplet>& t, int a, int b, double w) {
  t.emplace_back(a, a, w);
  t.emplace_back(b, b, w);
  t.emplace_back(a, b, -w);
  t.emplace_back(b, a, -w);
}

double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

// Values above edge - kNearEdgeCells * h are flagged as low confidence.
constexpr double kNearEdgeCells = 100.0;

void fill_indices(SpectrumReport& r) {
  r.morse_index = 0;
  r.kernel_dim = 0;
  r.near_edge.clear();
  for (double v : r.eigenvalues) {
    if (v < -r.tol_zero) ++r.morse_index;
    if (std::abs(v) <= r.tol_zero) ++r.kernel_dim;
    r.near_edge.push_back(v > r.essential_edge - kNearEdgeCells * r.h);
  }
}

void orient(GraphFunction& f) {
  double best = 0.0;
  for (double v : f.loop) if (std::abs(v) > std::abs(best)) best = v;
  for (double v : f.tail) if (std::abs(v) > std::abs(best)) best = v;
  if (best < 0.0) {
    for (double& v : f.loop) v = -v;
    for (double& v : f.tail) v = -v;
  }
}

void merge_extrapolated(SpectrumReport& out, const SpectrumReport& coarse,
                        const SpectrumReport& fine) {
  out.eigenvalues_h = coarse.eigenvalues;
  out.eigenvalues_h2 = fine.eigenvalues;
  const std::size_t n = std::min(coarse.eigenvalues.size(), fine.eigenvalues.size());
  out.eigenvalues.clear();
  for (std::size_t i = 0; i < n; ++i) {
    out.eigenvalues.push_back(richardson(coarse.eigenvalues[i], fine.eigenvalues[i]));
  }
  fill_indices(out);
}

// Sub-problem on a path or cycle of loop/tail nodes, used by the splitting method.
struct SubProblem {
  GeneralizedProblem p;
  double h;
  double potential_sup;
};

SubProblem periodic_problem(const StationaryState& s, const Discretization& d) {
  const int n = d.loop_cells();
  const double h = d.h_loop();
  const double w = 1.0 / (s.params.c1 * s.params.c1);
  std::vector<Triplet> t;
  SubProblem sp{{SparseMatrix(n, n), Eigen::VectorXd::Constant(n, h * w)}, h, 0.0};
  for (int i = 0; i < n; ++i) {
    add_edge(t, i, (i + 1) % n, 1.0 / h);
    const double V = std::cos(libration_value(s.loop, d.loop_x(i)));
    sp.potential_sup = std::max(sp.potential_sup, std::abs(V));
    t.emplace_back(i, i, h * w * V);
  }
  sp.p.A.setFromTriplets(t.begin(), t.end());
  return sp;
}

SubProblem loop_dirichlet_problem(const StationaryState& s, const Discretization& d) {
  const int n = d.loop_cells() - 1;  // interior points 1..n_loop-1
  const double h = d.h_loop();
  const double w = 1.0 / (s.params.c1 * s.params.c1);
  std::vector<Triplet> t;
  SubProblem sp{{SparseMatrix(n, n), Eigen::VectorXd::Constant(n, h * w)}, h, 0.0};
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0 / h);
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1.0 / h);
      t.emplace_back(i + 1, i, -1.0 / h);
    }
    const double V = std::cos(libration_value(s.loop, d.loop_x(i + 1)));
    sp.potential_sup = std::max(sp.potential_sup, std::abs(V));
    t.emplace_back(i, i, h * w * V);
  }
  sp.p.A.setFromTriplets(t.begin(), t.end());
  return sp;
}

SubProblem delta_problem(const StationaryState& s, const Discretization& d) {
  const int n = d.tail_cells();  // points 0..n_tail-1, Dirichlet at R
  const double h = d.h_tail();
  const double w = 1.0 / (s.params.c2 * s.params.c2);
  std::vector<Triplet> t;
  SubProblem sp{{SparseMatrix(n, n), Eigen::VectorXd::Constant(n, h * w)}, h, 0.0};
  sp.p.M[0] = 0.5 * h * w;
  for (int j = 0; j < n; ++j) {
    if (j + 1 < n) {
      add_edge(t, j, j + 1, 1.0 / h);
    } else {
      t.emplace_back(j, j, 1.0 / h);
    }
    const double V = kink_cos(s.tail, s.tail.origin + d.tail_y(j));
    sp.potential_sup = std::max(sp.potential_sup, std::abs(V));
    t.emplace_back(j, j, sp.p.M[j] * V);
  }
  t.emplace_back(0, 0, -s.params.Z);
  sp.p.A.setFromTriplets(t.begin(), t.end());
  return sp;
}

SpectrumReport sub_spectrum(const SubProblem& sp, int count, double edge,
                            bool on_loop) {
  SpectrumReport r;
  r.method = SpectralMethod::Splitting;
  r.essential_edge = edge;
  r.h = sp.h;
  r.tol_zero = zero_tolerance(sp.h, sp.potential_sup);
  const EigenPairs ep = lowest_eigenpairs(sp.p, count, edge - 10.0 * sp.h);
  r.eigenvalues = ep.values;
  for (const auto& v : ep.vectors) {
    GraphFunction f;
    std::vector<double> vals(v.data(), v.data() + v.size());
    if (on_loop) {
      f.loop = std::move(vals);
    } else {
      f.tail = std::move(vals);
    }
    orient(f);
    r.modes.push_back(std::move(f));
  }
  if (!r.modes.empty()) r.ground_mode = r.modes.front();
  fill_indices(r);
  return r;
}

// Keep loop Dirichlet modes whose end slopes agree (f'(L) = f'(-L)).
SpectrumReport filter_flux_matched(SpectrumReport r) {
  SpectrumReport out = r;
  out.eigenvalues.clear();
  out.modes.clear();
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    const auto& f = r.modes[i].loop;
    double sup = 0.0;
    for (double v : f) sup = std::max(sup, std::abs(v));
    // slopes (f_1 - 0)/h and (0 - f_{n-1})/h agree iff f_1 + f_{n-1} = 0
    if (std::abs(f.front() + f.back()) <= 1e-6 * sup) {
      out.eigenvalues.push_back(r.eigenvalues[i]);
      out.modes.push_back(r.modes[i]);
    }
  }
  out.ground_mode = out.modes.empty() ? GraphFunction{} : out.modes.front();
  fill_indices(out);
  return out;
}

SpectrumReport extrapolated_sub(const SubProblem& coarse, const SubProblem& fine,
                                int count, double edge, bool on_loop,
                                bool flux_filter = false) {
  SpectrumReport a = sub_spectrum(coarse, count, edge, on_loop);
  SpectrumReport b = sub_spectrum(fine, count, edge, on_loop);
  if (flux_filter) {
    a = filter_flux_matched(std::move(a));
    b = filter_flux_matched(std::move(b));
  }
  SpectrumReport out = a;
  merge_extrapolated(out, a, b);
  return out;
}

double nearest(const std::vector<double>& xs, double x) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : xs) {
    if (std::abs(v - x) < std::abs(best - x)) best = v;
  }
  return best;
}

}  // namespace

std::string_view to_string(SpectralMethod m) {
  switch (m) {
    case SpectralMethod::Direct:
      return "direct";
    case SpectralMethod::Splitting:
      return "splitting";
    case SpectralMethod::Analytic:
      return "analytic";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  return v == Verdict::LinearlyUnstable ? "LinearlyUnstable" : "Inconclusive";
}

double zero_tolerance(double h, double potential_sup) {
  return std::max(1e-8, 5.0 * h * h * potential_sup);
}

GraphOperator assemble_with_potential(const GraphParams& g, const Discretization& d,
                                      const GraphFunction& V) {
  g.validate();
  const int nl = d.loop_cells();
  const int nt = d.tail_cells();
  if (static_cast<int>(V.loop.size()) != nl + 1 ||
      static_cast<int>(V.tail.size()) != nt + 1) {
    throw DimensionError("potential does not match the grid");
  }
  const int n = d.unknowns();
  const double h1 = d.h_loop();
  const double h2 = d.h_tail();
  const double w1 = 1.0 / (g.c1 * g.c1);
  const double w2 = 1.0 / (g.c2 * g.c2);

  GraphOperator op{{SparseMatrix(n, n), Eigen::VectorXd::Zero(n)}, d, g, 0.0};
  std::vector<Triplet> t;
  t.reserve(4 * (nl + nt) + n);
  for (int i = 0; i < nl; ++i) add_edge(t, d.loop_index(i), d.loop_index(i + 1), 1.0 / h1);
  for (int j = 0; j + 1 < nt; ++j) add_edge(t, d.tail_index(j), d.tail_index(j + 1), 1.0 / h2);
  t.emplace_back(d.tail_index(nt - 1), d.tail_index(nt - 1), 1.0 / h2);

  Eigen::VectorXd& M = op.problem.M;
  Eigen::VectorXd pot = Eigen::VectorXd::Zero(n);
  for (int i = 1; i < nl; ++i) {
    M[i] = h1 * w1;
    pot[i] = h1 * w1 * V.loop[i];
  }
  for (int j = 1; j < nt; ++j) {
    M[d.tail_index(j)] = h2 * w2;
    pot[d.tail_index(j)] = h2 * w2 * V.tail[j];
  }
  M[0] = h1 * w1 + 0.5 * h2 * w2;
  pot[0] = 0.5 * h1 * w1 * (V.loop.front() + V.loop.back()) + 0.5 * h2 * w2 * V.tail[0] - g.Z;
  for (int i = 0; i < n; ++i) t.emplace_back(i, i, pot[i]);
  op.problem.A.setFromTriplets(t.begin(), t.end());

  for (double v : V.loop) op.potential_sup = std::max(op.potential_sup, std::abs(v));
  for (double v : V.tail) op.potential_sup = std::max(op.potential_sup, std::abs(v));
  return op;
}

GraphOperator assemble_laplacian(const GraphParams& g, const Discretization& d) {
  GraphFunction V{std::vector<double>(d.N_loop(), 0.0), std::vector<double>(d.N_tail(), 0.0)};
  return assemble_with_potential(g, d, V);
}

GraphOperator assemble_linearized(const StationaryState& s, const Discretization& d) {
  if (s.params.L != d.L()) throw DimensionError("grid and state disagree on L");
  const SampledState smp = sample_state(s, d);
  GraphFunction V;
  V.loop.resize(smp.loop_value.size());
  V.tail.resize(smp.tail_value.size());
  for (std::size_t i = 0; i < V.loop.size(); ++i) V.loop[i] = std::cos(smp.loop_value[i]);
  for (std::size_t j = 0; j < V.tail.size(); ++j) {
    V.tail[j] = kink_cos(s.tail, s.tail.origin + smp.tail_y[j]);
  }
  // One vertex potential, taken from the tail.
  V.loop.front() = V.loop.back() = V.tail.front();
  return assemble_with_potential(s.params, d, V);
}

GraphFunction to_graph(const Discretization& d, const Eigen::VectorXd& u) {
  if (u.size() != d.unknowns()) throw DimensionError("vector does not match the grid");
  GraphFunction f;
  f.loop.resize(d.N_loop());
  f.tail.resize(d.N_tail());
  for (int i = 0; i < d.N_loop(); ++i) f.loop[i] = u[d.loop_index(i)];
  for (int j = 0; j < d.tail_cells(); ++j) f.tail[j] = u[d.tail_index(j)];
  f.tail.back() = 0.0;
  return f;
}

Eigen::VectorXd from_graph(const Discretization& d, const GraphFunction& f) {
  if (static_cast<int>(f.loop.size()) != d.N_loop() ||
      static_cast<int>(f.tail.size()) != d.N_tail()) {
    throw DimensionError("graph function does not match the grid");
  }
  Eigen::VectorXd u(d.unknowns());
  for (int i = 1; i < d.loop_cells(); ++i) u[i] = f.loop[i];
  for (int j = 0; j < d.tail_cells(); ++j) u[d.tail_index(j)] = f.tail[j];
  return u;
}

SpectrumReport operator_spectrum(const GraphOperator& op, int count, double edge) {
  SpectrumReport r;
  r.method = SpectralMethod::Direct;
  r.essential_edge = edge;
  r.h = op.grid.h();
  r.tol_zero = zero_tolerance(r.h, op.potential_sup);
  const EigenPairs ep = lowest_eigenpairs(op.problem, count, edge - 10.0 * r.h);
  r.eigenvalues = ep.values;
  for (const auto& v : ep.vectors) {
    GraphFunction f = to_graph(op.grid, v);
    orient(f);
    r.modes.push_back(std::move(f));
  }
  if (!r.modes.empty()) r.ground_mode = r.modes.front();
  fill_indices(r);
  return r;
}

double laplacian_rho(const GraphParams& g) {
  g.validate();
  if (!(g.Z > 0.0)) throw DomainError("laplacian_rho needs Z > 0");
  auto G = [&](double rho) {
    return rho * (2.0 / g.c1 * std::tanh(rho * g.L / g.c1) + 1.0 / g.c2) - g.Z;
  };
  double lo = 0.0;
  double hi = 2.0 * g.Z * g.c2;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (G(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(G(lo)) <= std::abs(G(hi)) ? lo : hi;
}

SpectrumReport laplacian_point_spectrum(const GraphParams& g) {
  g.validate();
  SpectrumReport r;
  r.method = SpectralMethod::Analytic;
  r.essential_edge = 0.0;
  if (g.Z > 0.0) {
    const double rho = laplacian_rho(g);
    r.eigenvalues = {-rho * rho};
  }
  for (int n = 1; n <= 5; ++n) {
    const double w = n * std::numbers::pi * g.c1 / g.L;
    r.embedded.push_back(w * w);
  }
  r.morse_index = static_cast<int>(r.eigenvalues.size());
  return r;
}

SpectrumReport direct_laplacian_spectrum(const GraphParams& g, const Discretization& d,
                                         int count) {
  const SpectrumReport a = operator_spectrum(assemble_laplacian(g, d), count, 0.0);
  const SpectrumReport b = operator_spectrum(assemble_laplacian(g, d.refined()), count, 0.0);
  SpectrumReport out = a;
  merge_extrapolated(out, a, b);
  return out;
}

SpectrumReport direct_spectrum(const StationaryState& s, const Discretization& d,
                               int count) {
  const SpectrumReport a = operator_spectrum(assemble_linearized(s, d), count, 1.0);
  const SpectrumReport b =
      operator_spectrum(assemble_linearized(s, d.refined()), count, 1.0);
  SpectrumReport out = a;
  merge_extrapolated(out, a, b);
  return out;
}

SplittingReport splitting_spectrum(const StationaryState& s, const Discretization& d,
                                   int count) {
  const Discretization f = d.refined();
  SplittingReport r;
  r.periodic = extrapolated_sub(periodic_problem(s, d), periodic_problem(s, f), count,
                                1.0, true);
  r.delta = extrapolated_sub(delta_problem(s, d), delta_problem(s, f), count, 1.0, false);
  r.dirichlet = extrapolated_sub(loop_dirichlet_problem(s, d),
                                 loop_dirichlet_problem(s, f), 2 * count, 1.0, true, true);
  const double tol = std::max(r.periodic.tol_zero, r.delta.tol_zero);
  for (double p : r.periodic.eigenvalues) {
    if (std::abs(nearest(r.delta.eigenvalues, p) - p) <= tol) r.shared.push_back(p);
  }
  return r;
}

SplittingCheck splitting_consistency(const SpectrumReport& direct,
                                     const SplittingReport& split, double tol) {
  SplittingCheck c;
  c.tolerance = tol;
  for (double lam : direct.eigenvalues) {
    if (!(lam < -direct.tol_zero)) continue;
    SplittingCheck::Entry e{lam, nearest(split.periodic.eigenvalues, lam),
                            nearest(split.delta.eigenvalues, lam),
                            nearest(split.dirichlet.eigenvalues, lam), "none"};
    if (std::abs(e.periodic_nearest - lam) <= tol && std::abs(e.delta_nearest - lam) <= tol) {
      e.accounted_by = "shared";
    } else if (std::abs(e.dirichlet_nearest - lam) <= tol) {
      e.accounted_by = "dirichlet";
    } else {
      c.consistent = false;
    }
    c.entries.push_back(e);
  }
  return c;
}

double lobe_T(double theta) {
  if (std::abs(theta) < 1e-3) {
    // theta cos(theta) - sin(theta) cancels to 0 far out on the tail.
    const double t2 = theta * theta;
    return theta * t2 * (-1.0 / 3.0 + t2 * (1.0 / 30.0 - t2 / 840.0));
  }
  return theta * std::cos(theta) - std::sin(theta);
}

bool lobe_condition_check(const StationaryState& s, const Discretization& d) {
  const SampledState smp = sample_state(s, d);
  for (double v : smp.loop_value) {
    if (lobe_T(v) > 1e-12) return false;
  }
  for (double v : smp.tail_value) {
    if (!(lobe_T(v) < 0.0)) return false;
  }
  return true;
}

double weighted_norm_sq(const GraphParams& g, const Discretization& d,
                        const GraphFunction& v) {
  auto trapz = [](const std::vector<double>& f, double h) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) s += 0.5 * h * (f[i] * f[i] + f[i + 1] * f[i + 1]);
    return s;
  };
  return trapz(v.loop, d.h_loop()) / (g.c1 * g.c1) + trapz(v.tail, d.h_tail()) / (g.c2 * g.c2);
}

double quadratic_form_Q(const StationaryState& s, const Discretization& d,
                        const GraphFunction& v) {
  if (static_cast<int>(v.loop.size()) != d.N_loop() ||
      static_cast<int>(v.tail.size()) != d.N_tail()) {
    throw DimensionError("quadratic_form_Q: function does not match the grid");
  }
  const double v0 = v.tail.front();
  const double scale = std::max({1.0, std::abs(v0), std::abs(v.loop.front())});
  if (std::abs(v.loop.front() - v0) > 1e-12 * scale ||
      std::abs(v.loop.back() - v0) > 1e-12 * scale) {
    throw DomainError("quadratic_form_Q: function is discontinuous at the vertex");
  }
  const GraphParams& g = s.params;
  const double h1 = d.h_loop();
  const double h2 = d.h_tail();
  const SampledState smp = sample_state(s, d);

  double q = 0.0;
  for (std::size_t i = 0; i + 1 < v.loop.size(); ++i) {
    const double dv = v.loop[i + 1] - v.loop[i];
    const double a = std::cos(smp.loop_value[i]) * v.loop[i] * v.loop[i];
    const double b = std::cos(smp.loop_value[i + 1]) * v.loop[i + 1] * v.loop[i + 1];
    q += dv * dv / h1 + 0.5 * h1 * (a + b) / (g.c1 * g.c1);
  }
  for (std::size_t j = 0; j + 1 < v.tail.size(); ++j) {
    const double dv = v.tail[j + 1] - v.tail[j];
    const double a = kink_cos(s.tail, s.tail.origin + smp.tail_y[j]) * v.tail[j] * v.tail[j];
    const double b =
        kink_cos(s.tail, s.tail.origin + smp.tail_y[j + 1]) * v.tail[j + 1] * v.tail[j + 1];
    q += dv * dv / h2 + 0.5 * h2 * (a + b) / (g.c2 * g.c2);
  }
  return q - g.Z * v0 * v0;
}

KernelCertificate kernel_certificate(const StationaryState& s, const SpectrumReport& direct) {
  KernelCertificate k{};
  const double c2 = s.params.c2;
  const double Z = s.params.Z;
  k.alpha_a = -std::tanh(s.tail.a / c2) / c2;
  if (s.loop.branch() == Branch::Center) {
    k.case_label = "degenerate";
    k.analytic_trivial = true;
  } else if (std::abs(k.alpha_a + Z) > 1e-12 * std::max(1.0, std::abs(Z))) {
    k.case_label = "alpha!=-Z";
    k.analytic_trivial = true;
  } else if (Z <= 0.0) {
    k.case_label = "alpha=-Z,Z<=0";
    k.analytic_trivial = true;
  } else {
    k.case_label = "uncovered";
    k.analytic_trivial = false;
  }
  k.min_abs_eigenvalue = std::numeric_limits<double>::infinity();
  for (double v : direct.eigenvalues) k.min_abs_eigenvalue = std::min(k.min_abs_eigenvalue, std::abs(v));
  k.numeric_trivial = k.min_abs_eigenvalue > direct.tol_zero;
  return k;
}

StabilityVerdict stability_verdict(const SpectrumReport& direct, bool kernel_trivial) {
  StabilityVerdict v;
  v.n = direct.morse_index;
  v.kernel_trivial = kernel_trivial && direct.kernel_dim == 0;
  if (v.n >= 1) v.predicted_growth = std::sqrt(-direct.eigenvalues.front());
  v.observed_gap = direct.essential_edge - 10.0 * direct.h;
  for (double lam : direct.eigenvalues) {
    if (lam > direct.tol_zero) {
      v.observed_gap = std::min(v.observed_gap, lam);
      break;
    }
  }
  const bool gap = v.observed_gap > direct.tol_zero;
  v.verdict = (v.n == 1 && v.kernel_trivial && gap) ? Verdict::LinearlyUnstable
                                                     : Verdict::Inconclusive;
  return v;
}

}  // namespace tadpole
