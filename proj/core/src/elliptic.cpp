#include "tadpole/elliptic.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "tadpole/errors.hpp"

namespace tadpole {

namespace {

constexpr double kAgmTol = 1e-15;
constexpr int kMaxAgm = 64;

double agm(double a, double b) {
  for (int i = 0; i < kMaxAgm && std::abs(a - b) >= kAgmTol * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return 0.5 * (a + b);
}

// Hyperbolic expansion in m1 = k'^2, valid for 0 <= u <= K.
JacobiTriple hyperbolic(double u, double kc) {
  const double m1 = kc * kc;
  const double th = std::tanh(u);
  const double sech = 1.0 / std::cosh(u);
  const double sc = std::sinh(u) * std::cosh(u);
  JacobiTriple r;
  r.sn = th + 0.25 * m1 * (sc - u) * sech * sech;
  r.cn = sech - 0.25 * m1 * (sc - u) * th * sech;
  r.dn = sech + 0.25 * m1 * (sc + u) * th * sech;
  return r;
}

JacobiTriple landen(double u, const EllipticModulus& m) {
  std::array<double, kMaxAgm + 1> a{};
  std::array<double, kMaxAgm + 1> c{};
  a[0] = 1.0;
  c[0] = m.k();
  double b = m.k_comp();
  int n = 0;
  while (std::abs(c[n]) >= kAgmTol && n < kMaxAgm) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  for (int i = n; i > 0; --i) {
    phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // 1 - k^2 sn^2 = k'^2 + k^2 cn^2 has no cancellation near u = K.
  const double dn = std::sqrt(m.k_comp() * m.k_comp() + m.k() * m.k() * cn * cn);
  return {sn, cn, dn};
}

}  // namespace

EllipticModulus::EllipticModulus(double k) : k_(k), k_comp_(0.0) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw DomainError("elliptic modulus must satisfy 0 <= k < 1");
  }
  k_comp_ = std::sqrt((1.0 - k) * (1.0 + k));
}

double complete_K(const EllipticModulus& k) {
  return std::numbers::pi / (2.0 * agm(1.0, k.k_comp()));
}

JacobiTriple jacobi_sn_cn_dn(double u, const EllipticModulus& k) {
  if (!std::isfinite(u)) {
    throw DomainError("jacobi_sn_cn_dn: argument must be finite");
  }
  if (k.k() == 0.0) {
    return {std::sin(u), std::cos(u), 1.0};
  }
  const double K = complete_K(k);
  const double period = 4.0 * K;
  double r = u - period * std::nearbyint(u / period);  // r in [-2K, 2K]

  if (k.k_comp() >= kHyperbolicSwitch) {
    return landen(r, k);
  }

  // sn odd, cn and dn even; reflect (K, 2K] onto [0, K).
  const double sign = r < 0.0 ? -1.0 : 1.0;
  r = std::abs(r);
  double cn_sign = 1.0;
  if (r > K) {
    r = 2.0 * K - r;
    cn_sign = -1.0;
  }
  JacobiTriple t = hyperbolic(r, k.k_comp());
  return {sign * t.sn, cn_sign * t.cn, t.dn};
}

JacobiTriple shift_identities(double u, const EllipticModulus& k) {
  const JacobiTriple t = jacobi_sn_cn_dn(u, k);
  const double kc = k.k_comp();
  return {t.cn / t.dn, -kc * t.sn / t.dn, kc / t.dn};
}

}  // namespace tadpole
