#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace tadpole {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Generalized symmetric problem A u = lambda M u with diagonal M > 0.
struct GeneralizedProblem {
  SparseMatrix A;
  Eigen::VectorXd M;
};

struct EigenPairs {
  std::vector<double> values;
  std::vector<Eigen::VectorXd> vectors;  // M-orthonormal
};

/// Number of eigenvalues strictly below sigma (Sylvester inertia of A - sigma M).
/// Throws NumericalError if the factorization breaks down.
int count_below(const GeneralizedProblem& p, double sigma);

/// Lower bound on the spectrum from Gershgorin discs of M^{-1/2} A M^{-1/2}.
double spectrum_lower_bound(const GeneralizedProblem& p);

/// The lowest min(count, #eigenvalues < upper) eigenpairs, ascending.
/// Eigenvalues are bracketed by inertia bisection and polished by inverse
/// iteration with Rayleigh quotients.
EigenPairs lowest_eigenpairs(const GeneralizedProblem& p, int count, double upper);

/// Solve (A - sigma M) x = b. Throws NumericalError on breakdown.
Eigen::VectorXd shifted_solve(const GeneralizedProblem& p, double sigma,
                              const Eigen::VectorXd& b);

}  // namespace tadpole
