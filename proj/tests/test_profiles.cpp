#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "tadpole/errors.hpp"
#include "tadpole/existence.hpp"
#include "tadpole/grid.hpp"
#include "tadpole/profiles.hpp"

using namespace tadpole;

namespace {
const double kPi = std::acos(-1.0);

// fourth-order second difference; the plain three-point stencil is too coarse
// for a 1e-8 residual
double d2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
         (12 * h * h);
}
}  // namespace

TEST_CASE("graph parameters validate") {
  CHECK_NOTHROW(GraphParams{1, 1, 1, 0}.validate());
  CHECK_THROWS_AS((GraphParams{0, 1, 1, 0}.validate()), DomainError);
  CHECK_THROWS_AS((GraphParams{1, -1, 1, 0}.validate()), DomainError);
  CHECK_THROWS_AS((GraphParams{1, 1, 0, 0}.validate()), DomainError);
  CHECK_THROWS_AS((GraphParams{1, 1, 1, std::nan("")}.validate()), DomainError);
  CHECK(std::abs(GraphParams{1, 1, 0.5, 0}.strength_bound() - 4 / kPi) < 1e-15);
}

TEST_CASE("branch names round-trip") {
  for (Branch b : {Branch::AbovePi, Branch::Crossing, Branch::Center})
    CHECK(parse_branch(to_string(b)) == b);
  CHECK_THROWS_AS(parse_branch("sideways"), DomainError);
}

TEST_CASE("kink tail values") {
  CHECK(std::abs(kink_value({0.0, 1.0, 0.0}, 0.0) - kPi) < 1e-15);
  CHECK(std::abs(kink_value({0.0, 2.0, 3.0}, 3.0) - kPi) < 1e-15);
  CHECK(kink_value({0.3, 1.0, 0.0}, 60.0) < 1e-24);
  const long double ref = 4.0L * std::atan(std::exp(1.0L));
  CHECK(std::abs(kink_value({-1.0, 1.0, 0.0}, 0.0) - static_cast<double>(ref)) < 1e-15);
  CHECK_THROWS_AS(kink_value({0.0, 1.0, 1.0}, 0.5), DomainError);
  CHECK_THROWS_AS(kink_derivative({0.0, 1.0, 1.0}, 0.5), DomainError);
}

TEST_CASE("kink tail is strictly decreasing and its derivative matches differences") {
  const KinkTail t{-0.4, 0.7, 2.0};
  CHECK(std::abs(kink_derivative({0.0, 1.0, 0.0}, 0.0) + 2.0) < 1e-15);
  CHECK(std::abs(kink_derivative(t, 2.0) + 2 / 0.7 / std::cosh(-0.4 / 0.7)) < 1e-14);
  double prev = kink_value(t, 2.0);
  for (int i = 1; i <= 2000; ++i) {
    const double x = 2.0 + i * 5e-3;
    const double v = kink_value(t, x);
    REQUIRE(v < prev);
    prev = v;
    const double fd =
        oracle::central_difference([&](double y) { return kink_value(t, y); }, x, 1e-4);
    REQUIRE(std::abs(fd - kink_derivative(t, x)) < 1e-7);
  }
}

TEST_CASE("tail potential identity") {
  const KinkTail t{0.37, 1.3, 0.0};
  for (int i = 0; i <= 1000; ++i) {
    const double x = i * 0.02;
    REQUIRE(std::abs(kink_cos(t, x) - std::cos(kink_value(t, x))) < 1e-12);
    const double s = 1.0 / std::cosh((x + t.a) / t.c2);
    REQUIRE(std::abs(kink_cos(t, x) - (1.0 - 2.0 * s * s)) < 1e-12);
  }
}

TEST_CASE("libration branch windows are enforced") {
  // K(0.5) ~ 1.686 < pi
  CHECK_THROWS_AS(LibrationProfile(EllipticModulus(0.5), 1.0, kPi, Branch::AbovePi),
                  InvalidStateError);
  CHECK_THROWS_AS(LibrationProfile(EllipticModulus(0.99), 1.0, kPi, Branch::Crossing),
                  InvalidStateError);
  CHECK_THROWS_AS(LibrationProfile(EllipticModulus(0.5), 1.0, kPi, Branch::Center),
                  InvalidStateError);
  CHECK_NOTHROW(LibrationProfile(EllipticModulus(0.99), 1.0, kPi, Branch::AbovePi));
}

TEST_CASE("above-pi libration: peak value, derivative at L, ODE residual") {
  const double k = 0.99;
  const LibrationProfile p(EllipticModulus(k), 1.0, kPi, Branch::AbovePi);
  CHECK(std::abs(libration_value(p, 0.0) - (2 * kPi - std::acos(2 * k * k - 1))) < 1e-13);
  CHECK(std::abs(libration_derivative(p, 0.0)) < 1e-13);
  const EllipticModulus m(k);
  const JacobiTriple t = jacobi_sn_cn_dn(kPi, m);
  CHECK(std::abs(libration_derivative(p, kPi) + 2 * k * m.k_comp() * t.sn / t.dn) < 1e-12);

  auto f = [&](double x) { return libration_value(p, x); };
  double worst = 0.0;
  for (int i = -150; i <= 150; ++i) {
    const double x = i * 0.02;
    worst = std::max(worst, std::abs(-d2(f, x, 1e-2) + std::sin(f(x))));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("libration profiles are even, above pi, and peak only at the origin") {
  for (double k : {0.985, 0.99, 0.999}) {
    const LibrationProfile p(EllipticModulus(k), 1.0, kPi, Branch::AbovePi);
    auto f = [&](double x) { return libration_value(p, x); };
    double prev = f(0.0);
    for (int i = 1; i <= 1000; ++i) {
      const double x = i * kPi / 1000;
      REQUIRE(std::abs(f(x) - f(-x)) < 1e-12);
      REQUIRE(f(x) > kPi);
      REQUIRE(f(x) < prev);
      prev = f(x);
      if (i < 1000) REQUIRE(oracle::second_difference(f, x, 1e-3) < 0.0);
    }
  }
}

TEST_CASE("crossing libration: crossing point, sign pattern of the curvature") {
  const LibrationProfile p(EllipticModulus(0.5), 1.0, kPi, Branch::Crossing);
  CHECK(std::abs(p.b() - complete_K(EllipticModulus(0.5))) < 1e-15);
  CHECK(std::abs(libration_value(p, p.b()) - kPi) < 1e-12);
  CHECK(std::abs(libration_value(p, -p.b()) - kPi) < 1e-12);
  auto f = [&](double x) { return libration_value(p, x); };
  double prev = f(0.0);
  int crossings = 0;
  for (int i = 1; i <= 2000; ++i) {
    const double x = i * kPi / 2000;
    REQUIRE(f(x) < prev);
    if ((prev - kPi) * (f(x) - kPi) <= 0) ++crossings;
    prev = f(x);
    REQUIRE(std::abs(f(x) - f(-x)) < 1e-12);
    if (i < 2000 && std::abs(x - p.b()) > 5e-3) {
      const double c = oracle::second_difference(f, x, 1e-3);
      if (x < p.b())
        REQUIRE(c < 0.0);
      else
        REQUIRE(c > 0.0);
    }
  }
  CHECK(crossings == 1);
}

TEST_CASE("crossing libration: one-sided derivatives agree at b") {
  const LibrationProfile p(EllipticModulus(0.5), 1.0, kPi, Branch::Crossing);
  const double b = p.b();
  for (double e : {1e-4, 1e-6, 1e-8}) {
    CHECK(std::abs(libration_derivative(p, b - e) - libration_derivative(p, b + e)) < 10 * e);
  }
  auto f = [&](double x) { return libration_value(p, x); };
  CHECK(std::abs(oracle::central_difference(f, b, 1e-5) - libration_derivative(p, b)) < 1e-8);
}

TEST_CASE("closed-form derivatives match central differences") {
  const LibrationProfile a(EllipticModulus(0.99), 1.3, 4.0, Branch::AbovePi);
  const LibrationProfile c(EllipticModulus(0.6), 0.8, 2.0, Branch::Crossing);
  for (const auto* p : {&a, &c}) {
    auto f = [&](double x) { return libration_value(*p, x); };
    double worst = 0.0;
    for (int i = -99; i <= 99; ++i) {
      const double x = i * p->L() / 100;
      worst = std::max(worst, std::abs(oracle::central_difference(f, x, 1e-5) -
                                       libration_derivative(*p, x)));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("energy relation holds pointwise on the loop") {
  for (auto [k, c1, L, br] : {std::tuple{0.99, 1.0, kPi, Branch::AbovePi},
                              std::tuple{0.9, 2.0, 3.0, Branch::AbovePi},
                              std::tuple{0.5, 1.0, kPi, Branch::Crossing},
                              std::tuple{0.95, 0.7, 3.0, Branch::Crossing}}) {
    const LibrationProfile p(EllipticModulus(k), c1, L, br);
    const double E = 2 - 2 * k * k;
    CHECK(std::abs(1 - std::cos(libration_value(p, 0.0)) - E) < 1e-12);
    double worst = 0.0;
    for (int i = -500; i <= 500; ++i) {
      const double x = i * L / 500;
      const double v = libration_value(p, x), dv = libration_derivative(p, x);
      worst = std::max(worst, std::abs(-0.5 * c1 * c1 * dv * dv + 1 - std::cos(v) - E));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("center state is constant pi and admissible only at the strength bound") {
  const GraphParams at{1.0, 1.0, 1.0, 2.0 / kPi};
  const GraphParams off{1.0, 1.0, 1.0, 0.3};
  CHECK(center_state(at).admissible());
  CHECK_FALSE(center_state(off).admissible());
  const StationaryState s = center_state(at);
  CHECK(s.energy_E == doctest::Approx(2.0));
  CHECK(std::abs(s.continuity_residual()) < 1e-15);
  CHECK(std::abs(s.flux_residual()) < 1e-14);

  const Discretization d(at, 1e-2);
  const SampledState smp = sample_state(s, d);
  for (double v : smp.loop_value) REQUIRE(v == kPi);
  // 4 atan(e^-x) and 4 e^-x agree to the last bit this far out
  CHECK(smp.tail_value.back() <= 4 * std::exp(-d.R() / at.c2));
}

TEST_CASE("sampled states are continuous at the vertex") {
  const GraphParams g{1.5, 1.0, 0.5, 0.856941};
  const auto out = solve_gluing(g, Branch::AbovePi);
  REQUIRE(out.solution);
  const StationaryState s = out.solution->state(g);
  CHECK(std::abs(s.continuity_residual()) < 1e-10);
  CHECK(std::abs(s.flux_residual()) < 1e-9);
  const Discretization d(g);
  const SampledState smp = sample_state(s, d);
  CHECK(smp.loop_value.front() == smp.tail_value.front());
  CHECK(smp.loop_value.back() == smp.tail_value.front());
  CHECK(std::abs(libration_value(s.loop, g.L) - smp.tail_value.front()) < 1e-10);
  CHECK(smp.loop_x.size() == static_cast<size_t>(d.N_loop()));
  CHECK(smp.tail_y.size() == static_cast<size_t>(d.N_tail()));
}

TEST_CASE("tail at the truncation radius is below the exponential envelope") {
  // a >= 0: crossing branch and center
  const GraphParams g{3 * kPi, 1.0, 2.0, 0.0};
  const auto out = solve_gluing(g, Branch::Crossing);
  REQUIRE(out.solution);
  const StationaryState s = out.solution->state(g);
  REQUIRE(s.tail.a >= 0.0);
  const Discretization d(g, 0.05);
  const SampledState smp = sample_state(s, d);
  CHECK(smp.tail_value.back() < 4 * std::exp(-d.R() / g.c2));
}
