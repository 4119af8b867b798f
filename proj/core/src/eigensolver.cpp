#include "tadpole/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>

#include "tadpole/errors.hpp"

namespace tadpole {

namespace {

using Factor = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

SparseMatrix shifted(const GeneralizedProblem& p, double sigma) {
  SparseMatrix S = p.A;
  for (int i = 0; i < S.rows(); ++i) S.coeffRef(i, i) -= sigma * p.M[i];
  return S;
}

void factor(Factor& f, const GeneralizedProblem& p, double sigma) {
  f.compute(shifted(p, sigma));
  if (f.info() != Eigen::Success) {
    throw NumericalError("LDL^T factorization of A - sigma M failed");
  }
}

double m_dot(const GeneralizedProblem& p, const Eigen::VectorXd& x,
             const Eigen::VectorXd& y) {
  return x.dot(p.M.cwiseProduct(y));
}

// Inverse iteration at a fixed shift, keeping x M-orthogonal to `lock`.
Eigen::VectorXd inverse_iteration(const GeneralizedProblem& p, double sigma,
                                  const std::vector<Eigen::VectorXd>& lock,
                                  double& lambda) {
  Factor f;
  factor(f, p, sigma);
  const int n = static_cast<int>(p.A.rows());
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.37 * i + 0.1);
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    for (const auto& q : lock) x -= m_dot(p, q, x) * q;
    x /= std::sqrt(m_dot(p, x, x));
    lambda = x.dot(p.A * x);
    if (it > 2 && std::abs(lambda - prev) <= 1e-15 * std::max(1.0, std::abs(lambda))) {
      break;
    }
    prev = lambda;
    // the right-hand side must be materialized: solve() writes into x in place
    const Eigen::VectorXd rhs = p.M.cwiseProduct(x);
    x = f.solve(rhs);
    if (f.info() != Eigen::Success || !x.allFinite()) {
      throw NumericalError("inverse iteration solve failed");
    }
  }
  for (const auto& q : lock) x -= m_dot(p, q, x) * q;
  x /= std::sqrt(m_dot(p, x, x));
  lambda = x.dot(p.A * x);
  return x;
}

}  // namespace

int count_below(const GeneralizedProblem& p, double sigma) {
  Factor f;
  factor(f, p, sigma);
  const Eigen::VectorXd D = f.vectorD();
  int neg = 0;
  for (int i = 0; i < D.size(); ++i) {
    if (!std::isfinite(D[i])) throw NumericalError("non-finite pivot in LDL^T");
    if (D[i] < 0.0) ++neg;
  }
  return neg;
}

double spectrum_lower_bound(const GeneralizedProblem& p) {
  Eigen::VectorXd radius = Eigen::VectorXd::Zero(p.A.rows());
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(p.A.rows());
  for (int j = 0; j < p.A.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(p.A, j); it; ++it) {
      const double s = it.value() / std::sqrt(p.M[it.row()] * p.M[it.col()]);
      if (it.row() == it.col()) {
        diag[it.row()] += s;
      } else {
        radius[it.row()] += std::abs(s);
      }
    }
  }
  return (diag - radius).minCoeff();
}

Eigen::VectorXd shifted_solve(const GeneralizedProblem& p, double sigma,
                              const Eigen::VectorXd& b) {
  Factor f;
  factor(f, p, sigma);
  Eigen::VectorXd x = f.solve(b);
  if (f.info() != Eigen::Success || !x.allFinite()) {
    throw NumericalError("shifted solve failed");
  }
  return x;
}

EigenPairs lowest_eigenpairs(const GeneralizedProblem& p, int count, double upper) {
  EigenPairs out;
  const int available = count_below(p, upper);
  const int n = std::min(count, available);
  if (n <= 0) return out;

  const double floor = spectrum_lower_bound(p) - 1.0;
  double lo_start = floor;
  for (int i = 0; i < n; ++i) {
    // Bracket eigenvalue i: count(lo) <= i < count(hi).
    double lo = lo_start;
    double hi = upper;
    int c_lo = count_below(p, lo);
    int c_hi = available;
    double target = 1e-3;
    double lambda = 0.0;
    Eigen::VectorXd v;
    while (true) {
      const double scale = std::max(1.0, std::abs(hi));
      const bool isolated = (c_lo == i && c_hi == i + 1);
      const bool tiny = hi - lo < 1e-13 * scale;
      if ((isolated && hi - lo < target * scale) || tiny) {
        lambda = 0.5 * (lo + hi);
        // Lock earlier vectors only when they belong to the same cluster.
        std::vector<Eigen::VectorXd> lock;
        for (std::size_t j = 0; j < out.values.size(); ++j) {
          if (std::abs(out.values[j] - lambda) < 1e-6 * scale) {
            lock.push_back(out.vectors[j]);
          }
        }
        const double sigma = isolated ? lambda : lo - 1e-9 * scale;
        double rq = lambda;
        v = inverse_iteration(p, sigma, lock, rq);
        if (!isolated || tiny) break;
        if (rq >= lo && rq <= hi) {
          lambda = rq;
          break;
        }
        target *= 1e-3;
        continue;
      }
      const double mid = 0.5 * (lo + hi);
      const int c = count_below(p, mid);
      if (c > i) {
        hi = mid;
        c_hi = c;
      } else {
        lo = mid;
        c_lo = c;
      }
    }
    out.values.push_back(lambda);
    out.vectors.push_back(std::move(v));
    lo_start = lo;
  }
  return out;
}

}  // namespace tadpole
