#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tadpole/elliptic.hpp"
#include "tadpole/profiles.hpp"

namespace tadpole {

enum class Regime { LoopLong, LoopShort };
enum class SignZ { Pos, Neg, Zero };

std::string_view to_string(Regime r);
std::string_view to_string(SignZ s);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x > lo && x < hi; }
  bool empty() const { return !(hi > lo); }
};

/// Row of the case table for (L/c1, c1/(2 c2), sign of Z, branch).
struct ExistenceCase {
  Regime regime = Regime::LoopShort;
  SignZ sign_Z = SignZ::Zero;
  std::string case_id;
  /// false for the impossibility rows and for rows left open.
  bool solvable = false;
  /// Z values for which the row predicts a state; empty when not solvable.
  Interval admissible_Z;
  /// Modulus window searched for H(k) = Z.
  Interval k_window;
  /// Z lies in admissible_Z.
  bool z_admissible = false;
};

struct LobeBound {
  double theta0;
  double k_l;
};

/// Unique k0 with K(k0) = L/c1; nullopt when L/c1 <= pi/2.
std::optional<double> modulus_threshold_k0(double L, double c1);

/// Root theta0 of theta cos(theta) - sin(theta) in (pi, 3pi/2) and
/// k_l = sqrt((1 + cos theta0)/2).
LobeBound lobe_bound_kl();

/// Shift a(k) of the kink tail gluing continuously to the libration at the
/// vertex: sech(a/c2) = k'/dn(L/c1), a < 0 on AbovePi, a > 0 on Crossing.
/// Throws DomainError if k is outside the branch window.
double shift_map_a(const EllipticModulus& k, const GraphParams& g, Branch branch);

/// H(k) = sech(a/c2) / (c1 atan(exp(-a/c2))) * (c1/(2 c2) - k sn(L/c1)).
double existence_function_H(const EllipticModulus& k, const GraphParams& g,
                            Branch branch);

/// Modulus k with K(k) = target, bisected to the last bit. target > pi/2.
double modulus_for_K(double target);

/// Nonzero roots of F in ascending order, from 2 n K(k) = L/c1.
std::vector<double> neumann_F_zeros(const GraphParams& g);

/// F(k) = k sn(L/c1; k).
double neumann_gluing_F(const EllipticModulus& k, const GraphParams& g);

/// Sign changes of f on a grid over [lo, hi], refined by bisection to tol.
/// The grid is half uniform and half clustered towards hi.
std::vector<double> scan_roots(const std::function<double(double)>& f, double lo,
                               double hi, int n = 2000, double tol = 1e-12);

/// Modulus window of a branch, shrunk by 1e-9 at both ends.
Interval branch_window(const GraphParams& g, Branch branch);

/// Case-table classification. Throws InadmissibleError when Z >= 2/(pi c2)
/// on the AbovePi and Crossing branches.
ExistenceCase classify(const GraphParams& g, Branch branch);

struct SolvedGluing {
  EllipticModulus k_Z;
  double a;
  double residual;
  ExistenceCase kase;
  Branch branch;
  /// Every root of H(k) = Z found in the window, ascending.
  std::vector<double> roots;

  StationaryState state(const GraphParams& g) const;
};

struct GluingOutcome {
  ExistenceCase kase;
  std::optional<SolvedGluing> solution;
  std::vector<double> roots;
};

/// Scan-then-bisect solve of H(k) = Z on the branch window. Returns the
/// smallest root whose libration is a monotone single lobe on (0, L].
GluingOutcome solve_gluing(const GraphParams& g, Branch branch);

/// Build the state for a given modulus (k = 0 on Center).
StationaryState make_state(const GraphParams& g, double k, Branch branch);

/// phi_1 strictly decreasing on (0, L] at grid resolution.
bool is_single_lobe(const LibrationProfile& p, int samples = 4000);

}  // namespace tadpole
