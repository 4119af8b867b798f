#pragma once

// Complete elliptic integral of the first kind and the Jacobi elliptic
// functions sn, cn, dn for a real modulus 0 <= k < 1.
//
// K(k) uses the arithmetic-geometric mean. The Jacobi functions use the
// descending Landen (AGM) scheme after reducing the argument modulo 4K;
// for k' < 1e-7 they switch to the hyperbolic expansions around k = 1.

namespace tadpole {

/// Elliptic modulus k together with its complement k' = sqrt(1 - k^2).
class EllipticModulus {
 public:
  /// Throws DomainError unless 0 <= k < 1.
  explicit EllipticModulus(double k);

  double k() const noexcept { return k_; }
  double k_comp() const noexcept { return k_comp_; }
  double parameter() const noexcept { return k_ * k_; }

 private:
  double k_;
  double k_comp_;
};

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

/// K(k) = int_0^1 dt / sqrt((1 - t^2)(1 - k^2 t^2)).
double complete_K(const EllipticModulus& k);

/// sn(u;k), cn(u;k), dn(u;k). Throws DomainError for non-finite u.
JacobiTriple jacobi_sn_cn_dn(double u, const EllipticModulus& k);

/// sn, cn, dn at u + K(k) via the quarter-period identities
///   sn(u+K) = cn/dn,  cn(u+K) = -k' sn/dn,  dn(u+K) = k'/dn.
JacobiTriple shift_identities(double u, const EllipticModulus& k);

/// Below this complementary modulus the hyperbolic expansion is used.
inline constexpr double kHyperbolicSwitch = 1e-7;

}  // namespace tadpole
