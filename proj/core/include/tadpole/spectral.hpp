#pragma once

#include <string>
#include <vector>

#include "tadpole/eigensolver.hpp"
#include "tadpole/grid.hpp"
#include "tadpole/profiles.hpp"

namespace tadpole {

enum class SpectralMethod { Direct, Splitting, Analytic };
std::string_view to_string(SpectralMethod m);

/// Function on the graph grid: loop points -L..L (vertex at both ends) and
/// tail points 0..R.
struct GraphFunction {
  std::vector<double> loop;
  std::vector<double> tail;
};

/// Discrete operator on the graph. The quadratic form is
///   sum_j [ int (v')^2 + c_j^{-2} V_j v^2 ] - Z v(0)^2
/// with the mass sum_j c_j^{-2} int v^2 (lumped). Its Euler-Lagrange
/// problem is -c_j^2 v'' + V_j v = lambda v with the delta vertex condition.
struct GraphOperator {
  GeneralizedProblem problem;
  Discretization grid;
  GraphParams params;
  double potential_sup = 0.0;  // max |V| on the grid
};

GraphOperator assemble_laplacian(const GraphParams& g, const Discretization& d);
GraphOperator assemble_linearized(const StationaryState& s, const Discretization& d);
/// Linearized operator for an arbitrary potential sampled on the grid.
GraphOperator assemble_with_potential(const GraphParams& g, const Discretization& d,
                                      const GraphFunction& potential);

/// Map between unknown vectors (vertex, loop interior, tail interior) and
/// graph functions. The truncation point carries 0.
GraphFunction to_graph(const Discretization& d, const Eigen::VectorXd& u);
Eigen::VectorXd from_graph(const Discretization& d, const GraphFunction& f);

struct SpectrumReport {
  SpectralMethod method = SpectralMethod::Direct;
  std::vector<double> eigenvalues;        // extrapolated when available
  std::vector<double> eigenvalues_h;      // raw at spacing h
  std::vector<double> eigenvalues_h2;     // raw at spacing h/2
  std::vector<bool> near_edge;            // flagged low-confidence values
  std::vector<double> embedded;           // e.g. loop Dirichlet values of F_Z
  int morse_index = 0;
  int kernel_dim = 0;
  double tol_zero = 0.0;
  double essential_edge = 1.0;
  double h = 0.0;
  GraphFunction ground_mode;              // unit discrete (weighted) norm
  std::vector<GraphFunction> modes;       // all reported modes at spacing h
};

/// tol_zero = max(1e-8, 5 h^2 sup|V|).
double zero_tolerance(double h, double potential_sup);

/// Positive root of G(rho) = rho (2/c1 tanh(rho L/c1) + 1/c2) - Z.
double laplacian_rho(const GraphParams& g);

/// Negative eigenvalue -rho_Z^2 of F_Z for Z > 0 (none for Z <= 0) and the
/// loop Dirichlet eigenvalues n^2 pi^2 c1^2 / L^2, n = 1..5, as embedded.
SpectrumReport laplacian_point_spectrum(const GraphParams& g);

/// Discrete F_Z on d and d.refined(), Richardson-extrapolated.
SpectrumReport direct_laplacian_spectrum(const GraphParams& g, const Discretization& d,
                                         int count = 4);

/// Lowest `count` eigenvalues of the discrete L_Z below 1 - 10 h, on d and
/// d.refined(), Richardson-extrapolated.
SpectrumReport direct_spectrum(const StationaryState& s, const Discretization& d,
                               int count = 6);

/// Report for an operator already assembled (single grid, no extrapolation).
SpectrumReport operator_spectrum(const GraphOperator& op, int count, double edge);

struct SplittingReport {
  SpectrumReport periodic;   // -c1^2 d^2 + cos(phi_1) on [-L, L], periodic
  SpectrumReport delta;      // -c2^2 d^2 + cos(psi_a) on [0, R], g'(0) = -Z g(0)
  SpectrumReport dirichlet;  // loop with f(+-L) = 0 and f'(L) = f'(-L)
  /// Values present in both the periodic and the delta problem.
  std::vector<double> shared;
};

SplittingReport splitting_spectrum(const StationaryState& s, const Discretization& d,
                                   int count = 4);

struct SplittingCheck {
  bool consistent = true;
  double tolerance = 0.0;
  struct Entry {
    double direct;
    double periodic_nearest;
    double delta_nearest;
    double dirichlet_nearest;
    std::string accounted_by;  // "shared", "dirichlet", or "none"
  };
  std::vector<Entry> entries;
};

/// Every negative direct eigenvalue must match, within tol, a value shared by
/// the periodic and delta problems or a loop Dirichlet-periodic value.
SplittingCheck splitting_consistency(const SpectrumReport& direct,
                                     const SplittingReport& split, double tol);

/// T(theta) = theta cos(theta) - sin(theta).
double lobe_T(double theta);

/// T(phi_1) <= 1e-12 on the loop grid and T(psi) < 0 on the tail grid.
bool lobe_condition_check(const StationaryState& s, const Discretization& d);

/// Quadratic form of L_Z at v (trapezoid, c-weighted). Throws DomainError
/// if the three vertex copies of v disagree.
double quadratic_form_Q(const StationaryState& s, const Discretization& d,
                        const GraphFunction& v);
/// Weighted norm sum_j c_j^{-2} int v^2 (trapezoid).
double weighted_norm_sq(const GraphParams& g, const Discretization& d,
                        const GraphFunction& v);

struct KernelCertificate {
  double alpha_a;
  std::string case_label;  // "alpha!=-Z", "alpha=-Z,Z<=0", "degenerate", "uncovered"
  bool analytic_trivial;
  double min_abs_eigenvalue;
  bool numeric_trivial;
  bool trivial() const { return analytic_trivial && numeric_trivial; }
};

KernelCertificate kernel_certificate(const StationaryState& s, const SpectrumReport& direct);

enum class Verdict { LinearlyUnstable, Inconclusive };
std::string_view to_string(Verdict v);

struct StabilityVerdict {
  int n = 0;
  bool kernel_trivial = false;
  Verdict verdict = Verdict::Inconclusive;
  double predicted_growth = 0.0;
  /// Smallest computed eigenvalue above the negative one (observed r0).
  double observed_gap = 0.0;
};

StabilityVerdict stability_verdict(const SpectrumReport& direct, bool kernel_trivial);

}  // namespace tadpole
