#pragma once

#include <string_view>
#include <vector>

#include "tadpole/elliptic.hpp"

namespace tadpole {

/// Physical configuration of the tadpole graph: loop [-L, L] with speed c1,
/// half-line with speed c2, delta coupling of strength Z at the vertex.
struct GraphParams {
  double L = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double Z = 0.0;

  /// Throws DomainError unless L, c1, c2 > 0 and Z is finite.
  void validate() const;
  /// Upper bound 2/(pi c2) on Z for single-lobe kink states.
  double strength_bound() const;

  bool operator==(const GraphParams&) const = default;
};

enum class Branch { AbovePi, Crossing, Center };

std::string_view to_string(Branch b);
/// Accepts "above-pi", "crossing", "center". Throws DomainError otherwise.
Branch parse_branch(std::string_view s);

/// Kink tail psi(x) = 4 atan(exp(-(x - origin + a)/c2)) for x >= origin.
struct KinkTail {
  double a = 0.0;
  double c2 = 1.0;
  double origin = 0.0;
};

double kink_value(const KinkTail& t, double x);
double kink_derivative(const KinkTail& t, double x);
/// cos(psi(x)) = 1 - 2 sech^2((x - origin + a)/c2).
double kink_cos(const KinkTail& t, double x);

/// Loop libration phi_1 on [-L, L].
class LibrationProfile {
 public:
  /// Validates the branch window: AbovePi needs K(k) > L/c1, Crossing needs
  /// K(k) < L/c1, Center needs k = 0. Throws InvalidStateError otherwise.
  LibrationProfile(EllipticModulus k, double c1, double L, Branch branch);

  static LibrationProfile center(double c1, double L);

  const EllipticModulus& modulus() const noexcept { return k_; }
  double k() const noexcept { return k_.k(); }
  double c1() const noexcept { return c1_; }
  double L() const noexcept { return L_; }
  Branch branch() const noexcept { return branch_; }
  double K() const noexcept { return K_; }
  /// Crossing point c1 K(k); meaningful on the Crossing branch only.
  double b() const noexcept { return b_; }

 private:
  EllipticModulus k_;
  double c1_;
  double L_;
  Branch branch_;
  double K_;
  double b_;
};

double libration_value(const LibrationProfile& p, double x);
double libration_derivative(const LibrationProfile& p, double x);

/// Glued (loop libration, kink tail) pair. The tail uses graph coordinates
/// (origin = L) unless stated otherwise.
struct StationaryState {
  GraphParams params;
  LibrationProfile loop;
  KinkTail tail;
  double energy_E;

  StationaryState(GraphParams g, LibrationProfile p, KinkTail t);

  /// Center states are admissible only at Z = 2/(pi c2); other branches
  /// need Z below that bound.
  bool admissible(double tol = 1e-12) const;
  /// 2 phi_1'(L) - psi'(L) - Z psi(L).
  double flux_residual() const;
  /// phi_1(L) - psi(L).
  double continuity_residual() const;
};

/// The degenerate state (pi, psi_0).
StationaryState center_state(const GraphParams& g);

class Discretization;

struct SampledState {
  std::vector<double> loop_x;  // -L .. L, both endpoints (vertex duplicated)
  std::vector<double> loop_value;
  std::vector<double> loop_derivative;
  std::vector<double> tail_y;  // 0 .. R, translated frame
  std::vector<double> tail_value;
  std::vector<double> tail_derivative;
};

SampledState sample_state(const StationaryState& s, const Discretization& d);

}  // namespace tadpole
