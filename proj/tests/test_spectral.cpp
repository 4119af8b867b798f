#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "tadpole/errors.hpp"
#include "tadpole/existence.hpp"
#include "tadpole/spectral.hpp"

using namespace tadpole;

namespace {
const double kPi = std::acos(-1.0);

const GraphParams kDegenerate{1.0, 1.0, 1.0, 2.0 / kPi};
const GraphParams kShortLoop{1.5, 1.0, 0.5, 0.856941};

StationaryState solved(const GraphParams& g, Branch b = Branch::AbovePi) {
  const GluingOutcome out = solve_gluing(g, b);
  REQUIRE(out.solution);
  return out.solution->state(g);
}

double max_asymmetry(const SparseMatrix& A) {
  const SparseMatrix D = SparseMatrix(A.transpose()) - A;
  double m = 0.0;
  for (int j = 0; j < D.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(D, j); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

// V_i = (A_lin - A_lap)_ii / M_ii; the laplacian carries the same -Z.
std::vector<double> recovered_potential(const StationaryState& s, const Discretization& d) {
  const GraphOperator lin = assemble_linearized(s, d);
  const GraphOperator lap = assemble_laplacian(s.params, d);
  std::vector<double> V(d.unknowns());
  for (int i = 0; i < d.unknowns(); ++i)
    V[i] = (lin.problem.A.coeff(i, i) - lap.problem.A.coeff(i, i)) / lin.problem.M[i];
  return V;
}
}  // namespace

TEST_CASE("zero tolerance rule") {
  CHECK(zero_tolerance(1e-5, 1.0) == 1e-8);
  CHECK(zero_tolerance(1e-3, 1.0) == doctest::Approx(5e-6));
  CHECK(zero_tolerance(1e-2, 2.0) == doctest::Approx(1e-3));
}

TEST_CASE("laplacian point spectrum: transcendental root") {
  const GraphParams g{1.0, 1.0, 1.0, 1.0};
  const double rho = laplacian_rho(g);
  CHECK(std::abs(rho - oracle::laplacian_root(1, 1, 1, 1)) < 1e-13);
  CHECK(std::abs(rho - 0.51) < 0.01);
  const double G = rho * (2 * std::tanh(rho) + 1) - 1;
  CHECK(std::abs(G) < 1e-12);
  const SpectrumReport r = laplacian_point_spectrum(g);
  REQUIRE(r.eigenvalues.size() == 1);
  CHECK(std::abs(r.eigenvalues[0] + rho * rho) < 1e-15);
  CHECK(std::abs(r.eigenvalues[0] + 0.26) < 0.01);
  CHECK(r.morse_index == 1);
  REQUIRE(r.embedded.size() == 5);
  for (int n = 1; n <= 5; ++n) CHECK(std::abs(r.embedded[n - 1] - n * n * kPi * kPi) < 1e-12);

  // (cosh(rho x), exp(-rho y)) normalized at the vertex meets both conditions
  const double f = std::cosh(rho);
  const double fL = 1.0, gv = 1.0;
  const double dfL = rho * std::sinh(rho) / f, dfmL = -dfL, dg = -rho;
  CHECK(std::abs(fL - gv) < 1e-15);
  CHECK(std::abs((dfL - dfmL) - (dg + g.Z * gv)) < 1e-10);

  for (double Z : {0.0, -1.0}) {
    const SpectrumReport e = laplacian_point_spectrum(GraphParams{1, 1, 1, Z});
    CHECK(e.eigenvalues.empty());
    CHECK(e.morse_index == 0);
  }
}

TEST_CASE("discrete F_Z has one negative eigenvalue for Z > 0, none otherwise") {
  for (double Z : {0.5, 1.0, 2.0, 0.0, -1.0}) {
    const GraphParams g{1.0, 1.0, 1.0, Z};
    const Discretization d(g, 4e-3, 25.0);
    const SpectrumReport r = direct_laplacian_spectrum(g, d);
    CAPTURE(Z);
    CHECK(r.essential_edge == 0.0);
    if (Z > 0) {
      REQUIRE(r.morse_index == 1);
      const double rho = oracle::laplacian_root(1, 1, 1, Z);
      CHECK(std::abs(r.eigenvalues[0] + rho * rho) < 1e-4 * rho * rho);
    } else {
      CHECK(r.morse_index == 0);
    }
  }
}

TEST_CASE("assembled linearization: symmetry and potentials") {
  const StationaryState c = center_state(kDegenerate);
  const Discretization d(kDegenerate, 5e-3, 20.0);
  const GraphOperator op = assemble_linearized(c, d);
  CHECK(max_asymmetry(op.problem.A) < 1e-12);
  CHECK((op.problem.M.array() > 0).all());
  const std::vector<double> V = recovered_potential(c, d);
  for (int i = 1; i < d.loop_cells(); ++i) REQUIRE(std::abs(V[d.loop_index(i)] + 1.0) < 1e-10);
  for (int j = 1; j < d.tail_cells(); ++j) {
    const double y = d.tail_y(j);
    const double s = 1.0 / std::cosh((y + c.tail.a) / c.tail.c2);
    REQUIRE(std::abs(V[d.tail_index(j)] - (1 - 2 * s * s)) < 1e-10);
  }

  const StationaryState s = solved(kShortLoop);
  const Discretization d2(kShortLoop, 5e-3, 10.0);
  CHECK(max_asymmetry(assemble_linearized(s, d2).problem.A) < 1e-12);
  const std::vector<double> V2 = recovered_potential(s, d2);
  for (int j = 1; j < d2.tail_cells(); ++j) {
    const double y = d2.tail_y(j);
    const double sh = 1.0 / std::cosh((y + s.tail.a) / s.tail.c2);
    REQUIRE(std::abs(V2[d2.tail_index(j)] - (1 - 2 * sh * sh)) < 1e-10);
  }
}

TEST_CASE("grid maps round-trip") {
  const Discretization d(kShortLoop, 1e-2, 5.0);
  Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(d.unknowns(), 1.0, 2.0);
  const GraphFunction f = to_graph(d, u);
  CHECK(f.loop.front() == f.tail.front());
  CHECK(f.loop.back() == f.tail.front());
  CHECK(f.tail.back() == 0.0);
  CHECK((from_graph(d, f) - u).norm() == 0.0);
  CHECK(std::abs(d.h_loop() * d.loop_cells() - 2 * d.L()) < 1e-12);
  CHECK(std::abs(d.h_tail() * d.tail_cells() - d.R()) < 1e-12);
}

TEST_CASE("degenerate state: Morse index 1, trivial kernel, ground mode properties") {
  const StationaryState s = center_state(kDegenerate);
  const Discretization d(kDegenerate, 2e-3, 30.0);
  const SpectrumReport r = direct_spectrum(s, d, 4);
  CHECK(r.morse_index == 1);
  CHECK(r.kernel_dim == 0);
  for (double v : r.eigenvalues) CHECK(std::abs(v) > r.tol_zero);
  CHECK(weighted_norm_sq(kDegenerate, d, r.ground_mode) == doctest::Approx(1.0).epsilon(1e-10));

  // Perron-Frobenius and evenness
  const auto& gm = r.ground_mode;
  bool positive = true;
  for (double v : gm.loop) positive = positive && v > 0;
  for (std::size_t j = 0; j + 1 < gm.tail.size(); ++j) positive = positive && gm.tail[j] > 0;
  CHECK(positive);
  double odd = 0.0;
  for (std::size_t i = 0; i < gm.loop.size(); ++i)
    odd = std::max(odd, std::abs(gm.loop[i] - gm.loop[gm.loop.size() - 1 - i]));
  CHECK(odd < 1e-8);

  // Rayleigh quotient through the quadratic form
  const double Q = quadratic_form_Q(s, d, gm);
  CHECK(std::abs(Q - r.eigenvalues_h[0] * weighted_norm_sq(kDegenerate, d, gm)) < 1e-6);
}

TEST_CASE("periodic sub-problem of the degenerate state is trigonometric") {
  const GraphParams g{3.0, 1.0, 1.0, 2.0 / kPi};
  const StationaryState s = center_state(g);
  const Discretization d(g, 3e-3, 30.0);
  const SplittingReport sp = splitting_spectrum(s, d, 4);
  REQUIRE(sp.periodic.eigenvalues.size() >= 3);
  CHECK(std::abs(sp.periodic.eigenvalues[0] + 1.0) < 1e-8);
  const double e1 = -1.0 + (kPi / 3.0) * (kPi / 3.0);
  CHECK(std::abs(sp.periodic.eigenvalues[1] - e1) < 1e-7);
  CHECK(std::abs(sp.periodic.eigenvalues[2] - e1) < 1e-7);
}

TEST_CASE("delta half-line problem has at most one negative eigenvalue") {
  for (double Z : {-1.0, 0.0, 0.3, 0.6}) {
    const GraphParams g{1.0, 1.0, 1.0, Z};
    const GluingOutcome out = solve_gluing(g, Branch::AbovePi);
    if (!out.solution) continue;
    const StationaryState s = out.solution->state(g);
    const SplittingReport sp = splitting_spectrum(s, Discretization(g, 5e-3, 30.0), 3);
    CAPTURE(Z);
    CHECK(sp.delta.morse_index <= 1);
  }
  const SplittingReport c = splitting_spectrum(center_state(kDegenerate),
                                               Discretization(kDegenerate, 5e-3, 30.0), 3);
  CHECK(c.delta.morse_index <= 1);
}

TEST_CASE("short-loop solved state: Morse index 1, trivial kernel, unstable verdict") {
  const StationaryState s = solved(kShortLoop);
  CHECK(s.loop.k() * s.loop.k() <= lobe_bound_kl().k_l * lobe_bound_kl().k_l);
  const Discretization d(kShortLoop, 2e-3, 12.0);
  CHECK(lobe_condition_check(s, d));
  const SpectrumReport r = direct_spectrum(s, d, 4);
  CHECK(r.morse_index == 1);
  CHECK(r.kernel_dim == 0);
  const KernelCertificate kc = kernel_certificate(s, r);
  CHECK(s.tail.a < 0.0);
  CHECK(kc.case_label == "alpha!=-Z");
  CHECK(kc.trivial());
  CHECK(kc.min_abs_eigenvalue > 10 * d.h() * d.h());
  const StabilityVerdict v = stability_verdict(r, kc.trivial());
  CHECK(v.verdict == Verdict::LinearlyUnstable);
  CHECK(v.predicted_growth == doctest::Approx(std::sqrt(-r.eigenvalues[0])));
  CHECK(v.observed_gap > 0.0);

  const auto& gm = r.ground_mode;
  double sign = gm.tail.front() > 0 ? 1.0 : -1.0;
  bool same = true;
  for (double x : gm.loop) same = same && sign * x > 0;
  for (std::size_t j = 0; j + 1 < gm.tail.size(); ++j) same = same && sign * gm.tail[j] > 0;
  CHECK(same);
}

TEST_CASE("Morse index bounds on a family of states") {
  const GraphParams pts[] = {{1.0, 1.0, 1.0, 0.3}, {1.2, 1.0, 2.0, -0.2},
                             {kPi, 1.0, 0.3, 0.5}, {4.0, 1.3, 0.6566, 0.0}};
  for (const auto& g : pts) {
    const StationaryState s = solved(g);
    const SpectrumReport r = direct_spectrum(s, Discretization(g, 8e-3, 30 * g.c2), 4);
    CAPTURE(g.L);
    CHECK(r.morse_index <= 2);
    CHECK(r.morse_index <= 1);
  }
}

TEST_CASE("kernel certificate: Neumann vertex with a nonzero shift") {
  const GraphParams g{4.0, 1.3, 0.6566, 0.0};
  const StationaryState s = solved(g);
  REQUIRE(s.tail.a != 0.0);
  const SpectrumReport r = direct_spectrum(s, Discretization(g, 8e-3, 24.0), 3);
  const KernelCertificate kc = kernel_certificate(s, r);
  CHECK(kc.analytic_trivial);
  CHECK(kc.trivial());
}

TEST_CASE("lobe condition") {
  const GraphParams g{1.0, 1.0, 1.0, 0.0};
  const Discretization d(g, 1e-2, 20.0);
  CHECK(lobe_condition_check(make_state(g, std::sqrt(0.3), Branch::AbovePi), d));
  CHECK(lobe_condition_check(center_state(g), d));
  CHECK(lobe_T(kPi) == doctest::Approx(-kPi));
  const StationaryState hi = make_state(g, std::sqrt(0.9), Branch::AbovePi);
  CHECK(libration_value(hi.loop, 0.0) > lobe_bound_kl().theta0);
  CHECK(lobe_T(libration_value(hi.loop, 0.0)) > 0.0);
  CHECK_FALSE(lobe_condition_check(hi, d));
}

TEST_CASE("quadratic form") {
  const StationaryState s = solved(kShortLoop);
  const Discretization d(kShortLoop, 5e-3, 10.0);
  const SampledState smp = sample_state(s, d);
  const GraphFunction prof{smp.loop_value, smp.tail_value};
  CHECK(quadratic_form_Q(s, d, prof) < 0.0);

  const GraphFunction zero{std::vector<double>(d.N_loop(), 0.0),
                           std::vector<double>(d.N_tail(), 0.0)};
  CHECK(quadratic_form_Q(s, d, zero) == 0.0);

  GraphFunction broken = prof;
  broken.loop.front() += 0.1;
  CHECK_THROWS_AS(quadratic_form_Q(s, d, broken), DomainError);
  GraphFunction shorter = prof;
  shorter.tail.pop_back();
  CHECK_THROWS_AS(quadratic_form_Q(s, d, shorter), DimensionError);
}

TEST_CASE("positive test operator gives an inconclusive verdict") {
  const GraphParams g{1.0, 1.0, 1.0, 0.0};
  const Discretization d(g, 1e-2, 20.0);
  GraphFunction V{std::vector<double>(d.N_loop(), 1.0), std::vector<double>(d.N_tail(), 1.0)};
  const SpectrumReport r = operator_spectrum(assemble_with_potential(g, d, V), 3, 1.0);
  CHECK(r.morse_index == 0);
  CHECK(stability_verdict(r, true).verdict == Verdict::Inconclusive);
}

TEST_CASE("eigenvalues converge at second order") {
  const StationaryState s = solved(kShortLoop);
  const Discretization d(kShortLoop, 1e-2, 12.0);
  const double l1 = operator_spectrum(assemble_linearized(s, d), 1, 1.0).eigenvalues[0];
  const double l2 = operator_spectrum(assemble_linearized(s, d.refined()), 1, 1.0).eigenvalues[0];
  const double l3 =
      operator_spectrum(assemble_linearized(s, d.refined().refined()), 1, 1.0).eigenvalues[0];
  const double ratio = (l1 - l2) / (l2 - l3);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
  const double x12 = (4 * l2 - l1) / 3, x23 = (4 * l3 - l2) / 3;
  CHECK(std::abs(x12 - x23) < 1e-6);
}

// The splitting lemma predicts that a negative eigenvalue whose mode does not
// vanish at the vertex is shared by the periodic and delta problems. The
// discrete spectra do not bear this out; see the ledger note on splitting.
TEST_CASE("splitting lemma: direct negative eigenvalues are accounted for") {
  for (const auto& s : {center_state(kDegenerate), solved(kShortLoop)}) {
    const Discretization d(s.params, 2e-3, 30.0 * s.params.c2);
    const SpectrumReport r = direct_spectrum(s, d, 4);
    const SplittingReport sp = splitting_spectrum(s, d, 4);
    const double sup = assemble_linearized(s, d).potential_sup;
    const SplittingCheck chk = splitting_consistency(r, sp, 5 * d.h() * d.h() * sup);
    for (const auto& e : chk.entries) {
      CAPTURE(e.direct);
      CAPTURE(e.periodic_nearest);
      CAPTURE(e.delta_nearest);
      CHECK(e.accounted_by != "none");
    }
    CHECK(chk.consistent);
  }
}

TEST_CASE("resolvent of the Laplacian by a direct sparse solve") {
  const GraphParams g{1.0, 1.0, 1.0, 1.0};
  const Discretization d(g, 5e-3, 20.0);
  const GraphOperator op = assemble_laplacian(g, d);
  const GeneralizedProblem& p = op.problem;
  Eigen::VectorXd u(d.unknowns());
  for (int i = 0; i < u.size(); ++i) u[i] = std::exp(-1e-3 * i) * std::cos(0.01 * i);
  for (double lam : {0.5, 1.0, 3.0}) {
    const Eigen::VectorXd rhs = p.M.cwiseProduct(u);
    const Eigen::VectorXd x = shifted_solve(p, -lam * lam, rhs);
    const Eigen::VectorXd r = p.A * x + lam * lam * p.M.cwiseProduct(x) - rhs;
    CAPTURE(lam);
    CHECK(r.norm() < 1e-10 * rhs.norm());
  }
}
