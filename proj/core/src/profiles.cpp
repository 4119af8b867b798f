#include "tadpole/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tadpole/errors.hpp"
#include "tadpole/grid.hpp"

namespace tadpole {

namespace {

constexpr double kPi = std::numbers::pi;

double sech(double z) { return 1.0 / std::cosh(z); }

void check_tail_point(const KinkTail& t, double x) {
  if (!(x >= t.origin)) {
    throw DomainError("kink tail evaluated before its origin");
  }
}

void check_loop_point(const LibrationProfile& p, double x) {
  if (!(std::abs(x) <= p.L() * (1.0 + 1e-12))) {
    throw DomainError("libration evaluated outside [-L, L]");
  }
}


}  // namespace

void GraphParams::validate() const {
  if (!(L > 0.0 && c1 > 0.0 && c2 > 0.0) || !std::isfinite(L) ||
      !std::isfinite(c1) || !std::isfinite(c2) || !std::isfinite(Z)) {
    throw DomainError("graph parameters need finite L, c1, c2 > 0 and finite Z");
  }
}

double GraphParams::strength_bound() const { return 2.0 / (kPi * c2); }

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::AbovePi:
      return "above-pi";
    case Branch::Crossing:
      return "crossing";
    case Branch::Center:
      return "center";
  }
  return "?";
}

Branch parse_branch(std::string_view s) {
  if (s == "above-pi") return Branch::AbovePi;
  if (s == "crossing") return Branch::Crossing;
  if (s == "center") return Branch::Center;
  throw DomainError("unknown branch '" + std::string(s) + "'");
}

double kink_value(const KinkTail& t, double x) {
  check_tail_point(t, x);
  return 4.0 * std::atan(std::exp(-(x - t.origin + t.a) / t.c2));
}

double kink_derivative(const KinkTail& t, double x) {
  check_tail_point(t, x);
  return -(2.0 / t.c2) * sech((x - t.origin + t.a) / t.c2);
}

double kink_cos(const KinkTail& t, double x) {
  check_tail_point(t, x);
  const double s = sech((x - t.origin + t.a) / t.c2);
  return 1.0 - 2.0 * s * s;
}

LibrationProfile::LibrationProfile(EllipticModulus k, double c1, double L,
                                   Branch branch)
    : k_(k), c1_(c1), L_(L), branch_(branch), K_(complete_K(k)), b_(0.0) {
  if (!(c1 > 0.0 && L > 0.0)) {
    throw DomainError("libration needs c1 > 0 and L > 0");
  }
  const double r = L / c1;
  switch (branch) {
    case Branch::AbovePi:
      if (!(K_ > r)) {
        throw InvalidStateError("above-pi branch requires K(k) > L/c1");
      }
      break;
    case Branch::Crossing:
      if (!(K_ < r)) {
        throw InvalidStateError("crossing branch requires K(k) < L/c1");
      }
      b_ = c1 * K_;
      break;
    case Branch::Center:
      if (k.k() != 0.0) {
        throw InvalidStateError("center branch requires k = 0");
      }
      break;
  }
}

LibrationProfile LibrationProfile::center(double c1, double L) {
  return LibrationProfile(EllipticModulus(0.0), c1, L, Branch::Center);
}

double libration_value(const LibrationProfile& p, double x) {
  check_loop_point(p, x);
  if (p.branch() == Branch::Center) return kPi;
  // cos(pi + 2 asin(k sn)) = -1 + 2 k^2 sn^2; this form stays well conditioned
  // where phi passes pi, unlike acos near -1
  const double sn = jacobi_sn_cn_dn(x / p.c1() + p.K(), p.modulus()).sn;
  return kPi + 2.0 * std::asin(std::clamp(p.k() * sn, -1.0, 1.0));
}

double libration_derivative(const LibrationProfile& p, double x) {
  check_loop_point(p, x);
  if (p.branch() == Branch::Center) return 0.0;
  // d/dx of pi + 2 asin(k sn(u)) with dn = sqrt(1 - k^2 sn^2)
  const double cn = jacobi_sn_cn_dn(x / p.c1() + p.K(), p.modulus()).cn;
  return (2.0 * p.k() / p.c1()) * cn;
}

StationaryState::StationaryState(GraphParams g, LibrationProfile p, KinkTail t)
    : params(g), loop(p), tail(t), energy_E(2.0 - 2.0 * p.k() * p.k()) {
  g.validate();
  if (p.L() != g.L || p.c1() != g.c1 || t.c2 != g.c2) {
    throw InvalidStateError("state components disagree with graph parameters");
  }
}

bool StationaryState::admissible(double tol) const {
  const double bound = params.strength_bound();
  if (loop.branch() == Branch::Center) {
    return std::abs(params.Z - bound) <= tol * std::max(1.0, bound);
  }
  return params.Z < bound;
}

double StationaryState::flux_residual() const {
  return 2.0 * libration_derivative(loop, params.L) -
         kink_derivative(tail, tail.origin) -
         params.Z * kink_value(tail, tail.origin);
}

double StationaryState::continuity_residual() const {
  return libration_value(loop, params.L) - kink_value(tail, tail.origin);
}

StationaryState center_state(const GraphParams& g) {
  return StationaryState(g, LibrationProfile::center(g.c1, g.L),
                         KinkTail{0.0, g.c2, g.L});
}

SampledState sample_state(const StationaryState& s, const Discretization& d) {
  SampledState out;
  const int nl = d.N_loop();
  const int nt = d.N_tail();
  out.loop_x.resize(nl);
  out.loop_value.resize(nl);
  out.loop_derivative.resize(nl);
  for (int i = 0; i < nl; ++i) {
    double x = d.loop_x(i);
    if (i == nl - 1) x = d.L();
    out.loop_x[i] = x;
    out.loop_value[i] = libration_value(s.loop, x);
    out.loop_derivative[i] = libration_derivative(s.loop, x);
  }
  out.tail_y.resize(nt);
  out.tail_value.resize(nt);
  out.tail_derivative.resize(nt);
  for (int j = 0; j < nt; ++j) {
    const double y = d.tail_y(j);
    out.tail_y[j] = y;
    out.tail_value[j] = kink_value(s.tail, s.tail.origin + y);
    out.tail_derivative[j] = kink_derivative(s.tail, s.tail.origin + y);
  }
  // One vertex value: the tail origin. Loop ends equal it up to solver error.
  out.loop_value.front() = out.tail_value.front();
  out.loop_value.back() = out.tail_value.front();
  return out;
}

}  // namespace tadpole
