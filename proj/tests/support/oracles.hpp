#pragma once

// Reference computations that share no code with the library: quadrature,
// explicit ODE integration, bisection written from scratch.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// K(k) = int_R e^s ds / sqrt((1 + e^{2s})(1 + k'^2 e^{2s})), from t = tan(theta)
// and t = e^s. The integrand is analytic in the strip |Im s| < pi/2 and
// decays exponentially, so the plain trapezoid rule converges geometrically.
inline double K_quadrature(double k) {
  const long double kc2 = 1.0L - static_cast<long double>(k) * k;
  const long double h = 0.02L;
  const long double hi = 45.0L - 0.5L * std::log(kc2);
  long double sum = 0.0L;
  for (long double s = -45.0L; s <= hi; s += h) {
    const long double e2 = std::exp(2 * s);
    sum += std::exp(s) / std::sqrt((1 + e2) * (1 + kc2 * e2));
  }
  return static_cast<double>(sum * h);
}

struct Triple {
  double sn, cn, dn;
};

// sn' = cn dn, cn' = -sn dn, dn' = -k^2 sn cn from (0, 1, 1), classical RK4
// in long double.
inline Triple jacobi_rk4(double u, double k, int steps = 20000) {
  const long double kk = static_cast<long double>(k) * k;
  long double y[3] = {0.0L, 1.0L, 1.0L};
  const long double h = static_cast<long double>(u) / steps;
  auto rhs = [kk](const long double* s, long double* d) {
    d[0] = s[1] * s[2];
    d[1] = -s[0] * s[2];
    d[2] = -kk * s[0] * s[1];
  };
  for (int i = 0; i < steps; ++i) {
    long double k1[3], k2[3], k3[3], k4[3], t[3];
    rhs(y, k1);
    for (int j = 0; j < 3; ++j) t[j] = y[j] + 0.5L * h * k1[j];
    rhs(t, k2);
    for (int j = 0; j < 3; ++j) t[j] = y[j] + 0.5L * h * k2[j];
    rhs(t, k3);
    for (int j = 0; j < 3; ++j) t[j] = y[j] + h * k3[j];
    rhs(t, k4);
    for (int j = 0; j < 3; ++j) y[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  }
  return {static_cast<double>(y[0]), static_cast<double>(y[1]), static_cast<double>(y[2])};
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-15) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Positive root of rho (2/c1 tanh(rho L/c1) + 1/c2) = Z.
inline double laplacian_root(double L, double c1, double c2, double Z) {
  auto G = [=](double r) { return r * (2.0 / c1 * std::tanh(r * L / c1) + 1.0 / c2) - Z; };
  double hi = 1.0;
  while (G(hi) < 0) hi *= 2;
  return bisect(G, 0.0, hi);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

inline double second_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
}

// Sign changes of f on a uniform grid, each refined by bisection.
inline std::vector<double> all_roots(const std::function<double(double)>& f, double lo,
                                     double hi, int n) {
  std::vector<double> r;
  double xp = lo, fp = f(lo);
  for (int i = 1; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double fx = f(x);
    if ((fx < 0) != (fp < 0)) r.push_back(bisect(f, xp, x, 1e-14));
    xp = x;
    fp = fx;
  }
  return r;
}

}  // namespace oracle
