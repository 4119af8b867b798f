#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "tadpole/grid.hpp"
#include "tadpole/profiles.hpp"
#include "tadpole/spectral.hpp"

namespace tadpole {

/// Fields on the graph grid at time t. Loop and tail arrays include the
/// vertex (loop ends and tail origin carry the same value).
struct EvolutionState {
  std::vector<double> u_loop, v_loop;
  std::vector<double> u_tail, v_tail;
  double t = 0.0;
};

/// Semi-discrete sine-Gordon flow on the graph:
///   M u'' = -K u + b + Z e_v u_v - M sin(u)
/// with the same stiffness K and lumped mass M as the spectral module and
/// the tail end pinned to a fixed value (b carries it). Linearizing at an
/// equilibrium gives the discrete L_Z exactly.
class Dynamics {
 public:
  Dynamics(const GraphParams& g, const Discretization& d, double tail_end_value = 0.0);

  const GraphParams& params() const noexcept { return g_; }
  const Discretization& grid() const noexcept { return d_; }
  double tail_end_value() const noexcept { return u_R_; }
  /// 0.9 min(h) / max(c).
  double max_dt() const;
  int size() const noexcept { return static_cast<int>(M_.size()); }
  const Eigen::VectorXd& mass() const noexcept { return M_; }
  const SparseMatrix& stiffness() const noexcept { return K_; }

  Eigen::VectorXd acceleration(const Eigen::VectorXd& u) const;
  /// Conserved energy, scaled by c2^2:
  ///   c2^2 [ sum_j c_j^{-2} int (v^2/2 + 1 - cos u) + 1/2 sum_j int (u')^2
  ///          - Z u_v^2 / 2 ]
  /// which for c1 = c2 = c is int v^2/2 + c^2 (u')^2/2 + (1 - cos u) - c^2 Z u_v^2/2.
  double energy(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  /// Energy-space distance sqrt(du K du + du M du + dv M dv).
  double deviation(const Eigen::VectorXd& du, const Eigen::VectorXd& dv) const;
  /// Operator A(u) = K - Z e_v e_v^T + M diag(cos u), the linearization at u.
  GeneralizedProblem linearization(const Eigen::VectorXd& u) const;

  /// One kick-drift-kick step; `a` holds the acceleration at u on entry and exit.
  void kdk(Eigen::VectorXd& u, Eigen::VectorXd& v, Eigen::VectorXd& a, double dt) const;

  EvolutionState to_state(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                          double t) const;
  /// Throws DimensionError for wrong sizes, DomainError if vertex copies differ.
  void from_state(const EvolutionState& s, Eigen::VectorXd& u, Eigen::VectorXd& v) const;

  /// Throws PreconditionError when dt exceeds the CFL bound or is not positive.
  void check_dt(double dt) const;

 private:
  GraphParams g_;
  Discretization d_;
  double u_R_;
  SparseMatrix K_;
  Eigen::VectorXd M_;
  Eigen::VectorXd b_;
  double end_mass_;
};

/// One leapfrog step of the state.
EvolutionState step(const EvolutionState& state, const Dynamics& ctx, double dt);

double energy(const EvolutionState& state, const Dynamics& ctx);

/// Sampled stationary state as an unknown vector.
Eigen::VectorXd state_vector(const StationaryState& s, const Discretization& d);

/// Newton iteration on the discrete stationary equation starting from the
/// sampled profile. Throws NumericalError if it does not converge.
Eigen::VectorXd discrete_equilibrium(const Dynamics& ctx, const StationaryState& s,
                                     double tol = 1e-13, int max_iter = 30);

struct GrowthFit {
  double rate = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  double residual = 0.0;  // RMS of log-deviation residuals
  int points = 0;
};

/// Least-squares slope of log(deviation) over samples with deviation in [lo, hi].
GrowthFit fit_growth(const std::vector<double>& t, const std::vector<double>& dev,
                     double lo, double hi);

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> deviation_norms;
  std::vector<double> energies;
  std::vector<double> vertex_values;
  std::vector<double> continuity_defects;
  GrowthFit fit;
  bool aborted = false;  // non-finite values encountered
  EvolutionState final_state;
};

struct EvolveOptions {
  double T = 1.0;
  double dt = 0.0;  // 0 selects max_dt()
  int record_every = 10;
  /// Stop once the deviation exceeds this value.
  double stop_deviation = std::numeric_limits<double>::infinity();
};

/// Runs the flow from `initial`, measuring the deviation from `reference`.
EvolutionTrace evolve(const Dynamics& ctx, const Eigen::VectorXd& u0,
                      const Eigen::VectorXd& v0, const Eigen::VectorXd& reference,
                      const EvolveOptions& opt);

struct InstabilityResult {
  EvolutionTrace trace;
  double amplitude = 0.0;
  double fitted_growth = 0.0;
  double predicted_growth = 0.0;  // sqrt(-lambda_0) of the given report
  double relative_mismatch = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

/// Seeds the discrete equilibrium with amplitude * (ground mode, 0) and fits
/// the growth rate over deviations in [10 a, max(1e-2, 100 a)].
/// Throws PreconditionError unless spec has Morse index 1.
InstabilityResult instability_experiment(const StationaryState& s, const SpectrumReport& spec,
                                         double amplitude, const Discretization& d);

}  // namespace tadpole
