#include "tadpole/existence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tadpole/errors.hpp"

namespace tadpole {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kShrink = 1e-9;
constexpr int kScanPoints = 2000;

std::vector<double> grid_points(double lo, double hi, int n) {
  std::vector<double> xs;
  const int half = std::max(2, n / 2);
  xs.reserve(2 * half);
  for (int i = 0; i < half; ++i) {
    xs.push_back(lo + (hi - lo) * i / (half - 1));
  }
  // Clustered towards hi: distances (hi - lo) * 10^{-t}, t in (0, 9].
  for (int i = 1; i <= half; ++i) {
    const double t = 9.0 * i / half;
    xs.push_back(hi - (hi - lo) * std::pow(10.0, -t));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double flo, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double grid_min(const std::function<double(double)>& f, Interval w) {
  double m = std::numeric_limits<double>::infinity();
  for (double k : grid_points(w.lo, w.hi, kScanPoints)) m = std::min(m, f(k));
  return m;
}

// Unique root of g(k) = k sn(L/c1; k) = rho on a window where g increases.
double g_crossing(const GraphParams& g, double rho, Interval w) {
  auto f = [&](double k) { return neumann_gluing_F(EllipticModulus(k), g) - rho; };
  const auto roots = scan_roots(f, w.lo, w.hi);
  if (roots.empty()) {
    throw NumericalError("no crossing of k sn(L/c1; k) with c1/(2 c2) in window");
  }
  return roots.front();
}

}  // namespace

std::string_view to_string(Regime r) {
  return r == Regime::LoopLong ? "loop-long" : "loop-short";
}

std::string_view to_string(SignZ s) {
  switch (s) {
    case SignZ::Pos:
      return "pos";
    case SignZ::Neg:
      return "neg";
    case SignZ::Zero:
      return "zero";
  }
  return "?";
}

double modulus_for_K(double target) {
  if (!(target > kPi / 2.0)) throw DomainError("modulus_for_K: target must exceed pi/2");
  double lo = 0.0;
  double hi = 1.0;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (complete_K(EllipticModulus(mid)) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::optional<double> modulus_threshold_k0(double L, double c1) {
  if (!(L > 0.0 && c1 > 0.0)) throw DomainError("modulus_threshold_k0: L, c1 > 0");
  const double r = L / c1;
  if (r <= kPi / 2.0) return std::nullopt;
  return modulus_for_K(r);
}

std::vector<double> neumann_F_zeros(const GraphParams& g) {
  const double r = g.L / g.c1;
  std::vector<double> zeros;
  // sn(r; k) = 0 exactly where r = 2 n K(k); the k = 0 limit is not a state
  for (int n = 1; r / (2.0 * n) > kPi / 2.0; ++n) zeros.push_back(modulus_for_K(r / (2.0 * n)));
  std::reverse(zeros.begin(), zeros.end());
  return zeros;
}

LobeBound lobe_bound_kl() {
  auto T = [](double th) { return th * std::cos(th) - std::sin(th); };
  double lo = kPi;
  double hi = 1.5 * kPi;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (T(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double th = 0.5 * (lo + hi);
  return {th, std::sqrt(0.5 * (1.0 + std::cos(th)))};
}

double shift_map_a(const EllipticModulus& k, const GraphParams& g, Branch branch) {
  g.validate();
  const double r = g.L / g.c1;
  if (branch == Branch::Center) {
    if (k.k() != 0.0) throw DomainError("center branch has k = 0");
    return 0.0;
  }
  const double K = complete_K(k);
  if (branch == Branch::AbovePi && !(K > r)) {
    throw DomainError("shift_map_a: above-pi branch needs K(k) > L/c1");
  }
  if (branch == Branch::Crossing && !(K < r)) {
    throw DomainError("shift_map_a: crossing branch needs K(k) < L/c1");
  }
  const JacobiTriple t = jacobi_sn_cn_dn(r, k);
  const double kk = k.k();
  const double kc = k.k_comp();
  // (dn + k cn)/k' = k'/(dn - k cn); use the form without cancellation.
  if (t.cn >= 0.0) return -g.c2 * std::log((t.dn + kk * t.cn) / kc);
  return g.c2 * std::log((t.dn - kk * t.cn) / kc);
}

double existence_function_H(const EllipticModulus& k, const GraphParams& g,
                            Branch branch) {
  const double rho = g.c1 / (2.0 * g.c2);
  if (branch == Branch::Center) {
    shift_map_a(k, g, branch);
    return 4.0 / (kPi * g.c1) * rho;
  }
  const double a = shift_map_a(k, g, branch);
  const JacobiTriple t = jacobi_sn_cn_dn(g.L / g.c1, k);
  const double sech = k.k_comp() / t.dn;
  return sech / (g.c1 * std::atan(std::exp(-a / g.c2))) * (rho - k.k() * t.sn);
}

double neumann_gluing_F(const EllipticModulus& k, const GraphParams& g) {
  return k.k() * jacobi_sn_cn_dn(g.L / g.c1, k).sn;
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double lo,
                               double hi, int n, double tol) {
  std::vector<double> roots;
  if (!(hi > lo)) return roots;
  const auto xs = grid_points(lo, hi, n);
  double xp = xs.front();
  double fp = f(xp);
  if (fp == 0.0) roots.push_back(xp);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double x = xs[i];
    const double fx = f(x);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (fp != 0.0 && ((fp < 0.0) != (fx < 0.0))) {
      roots.push_back(bisect(f, xp, x, fp, tol));
    }
    xp = x;
    fp = fx;
  }
  return roots;
}

Interval branch_window(const GraphParams& g, Branch branch) {
  const auto k0 = modulus_threshold_k0(g.L, g.c1);
  switch (branch) {
    case Branch::AbovePi:
      return k0 ? Interval{*k0 + kShrink, 1.0 - kShrink}
                : Interval{kShrink, 1.0 - kShrink};
    case Branch::Crossing:
      return k0 ? Interval{kShrink, *k0 - kShrink} : Interval{};
    case Branch::Center:
      return Interval{};
  }
  return Interval{};
}

ExistenceCase classify(const GraphParams& g, Branch branch) {
  g.validate();
  const double bound = g.strength_bound();
  const double r = g.L / g.c1;
  const double rho = g.c1 / (2.0 * g.c2);
  const double th = std::tanh(r);
  const auto k0 = modulus_threshold_k0(g.L, g.c1);

  ExistenceCase c;
  c.regime = k0 ? Regime::LoopLong : Regime::LoopShort;
  c.sign_Z = g.Z > 0.0 ? SignZ::Pos : (g.Z < 0.0 ? SignZ::Neg : SignZ::Zero);
  c.k_window = branch_window(g, branch);

  if (branch == Branch::Center) {
    c.case_id = "3profile";
    c.solvable = true;
    c.admissible_Z = Interval{bound, bound};
    c.z_admissible = std::abs(g.Z - bound) <= 1e-12 * std::max(1.0, bound);
    return c;
  }
  if (g.Z >= bound) {
    throw InadmissibleError("vertex strength Z must lie below 2/(pi c2)", "Z2");
  }

  auto H = [&](double k) {
    return existence_function_H(EllipticModulus(k), g, branch);
  };
  auto set = [&](const char* id, bool solvable, Interval z) {
    c.case_id = id;
    c.solvable = solvable;
    c.admissible_Z = solvable ? z : Interval{};
    c.z_admissible = solvable && (c.sign_Z == SignZ::Zero ? true : z.contains(g.Z));
  };
  const double edge = 4.0 / (kPi * g.c1) * (rho - (k0 ? *k0 : 0.0));

  if (branch == Branch::Crossing) {
    if (!k0) {
      set("exis2", false, {});
      c.k_window = Interval{};
      return c;
    }
    if (c.sign_Z == SignZ::Zero) {
      if (rho < *k0) {
        const auto zeros = neumann_F_zeros(g);
        const double rn = zeros.empty() ? c.k_window.lo : zeros.back();
        c.k_window = Interval{rn, c.k_window.hi};
        set("exis2", true, Interval{0.0, 0.0});
      } else {
        set("exis2", false, {});
      }
    } else if (c.sign_Z == SignZ::Neg && rho >= *k0) {
      set("exis2", false, {});
    } else {
      set("exis2-open", false, {});
    }
    return c;
  }

  if (k0) {
    switch (c.sign_Z) {
      case SignZ::Pos:
        if (rho <= *k0) {
          set("3(i)", false, {});
        } else if (rho >= th) {
          set("1(i)", true, Interval{0.0, std::min(edge, bound)});
        } else {
          c.k_window.hi = g_crossing(g, rho, c.k_window);
          set("1(ii)", true, Interval{0.0, std::min(edge, bound)});
        }
        break;
      case SignZ::Neg:
        if (rho >= th) {
          set("3(ii)", false, {});
        } else if (std::abs(rho - *k0) <= 1e-12) {
          set("1(iv)", true, Interval{grid_min(H, c.k_window), 0.0});
        } else if (rho < *k0) {
          set("1(iii)", true, Interval{edge, 0.0});
        } else {
          c.k_window.lo = g_crossing(g, rho, c.k_window);
          set("1(v)", true, Interval{grid_min(H, c.k_window), 0.0});
        }
        break;
      case SignZ::Zero:
        set("1(vi)", rho > *k0 && rho < th, Interval{0.0, 0.0});
        break;
    }
    return c;
  }

  switch (c.sign_Z) {
    case SignZ::Pos:
      if (rho < th) c.k_window.hi = g_crossing(g, rho, c.k_window);
      set("2(i)", true, Interval{0.0, bound});
      break;
    case SignZ::Neg:
      if (rho < th) {
        c.k_window.lo = g_crossing(g, rho, c.k_window);
        set("2(ii)", true, Interval{grid_min(H, c.k_window), 0.0});
      } else {
        set("4(i)", false, {});
      }
      break;
    case SignZ::Zero:
      if (rho < th) {
        set("2(iii)", true, Interval{0.0, 0.0});
      } else {
        set("4(ii)", false, {});
      }
      break;
  }
  return c;
}

StationaryState make_state(const GraphParams& g, double k, Branch branch) {
  if (branch == Branch::Center) return center_state(g);
  const EllipticModulus m(k);
  LibrationProfile p(m, g.c1, g.L, branch);
  return StationaryState(g, p, KinkTail{shift_map_a(m, g, branch), g.c2, g.L});
}

StationaryState SolvedGluing::state(const GraphParams& g) const {
  return make_state(g, k_Z.k(), branch);
}

bool is_single_lobe(const LibrationProfile& p, int samples) {
  if (p.branch() == Branch::Center) return true;
  for (int i = 1; i <= samples; ++i) {
    const double x = p.L() * i / samples;
    if (!(libration_derivative(p, x) < 0.0)) return false;
  }
  return true;
}

GluingOutcome solve_gluing(const GraphParams& g, Branch branch) {
  GluingOutcome out{classify(g, branch), std::nullopt, {}};
  const ExistenceCase& c = out.kase;

  if (branch == Branch::Center) {
    if (c.z_admissible) {
      const StationaryState s = center_state(g);
      out.solution = SolvedGluing{EllipticModulus(0.0), 0.0, s.flux_residual(), c,
                                  branch, {0.0}};
      out.roots = {0.0};
    }
    return out;
  }
  if (!c.solvable || c.k_window.empty()) return out;

  const double rho = g.c1 / (2.0 * g.c2);
  std::function<double(double)> f;
  if (g.Z == 0.0) {
    // Same zeros as H, without the prefactor.
    f = [&](double k) { return rho - neumann_gluing_F(EllipticModulus(k), g); };
  } else {
    f = [&](double k) {
      return existence_function_H(EllipticModulus(k), g, branch) - g.Z;
    };
  }
  // Scan the whole branch window so that every root is reported; the row's
  // k_window only narrows where the selected one can sit.
  const Interval w = branch_window(g, branch);
  out.roots = scan_roots(f, w.lo, w.hi);

  for (double k : out.roots) {
    if (!c.k_window.contains(k)) continue;
    try {
      const StationaryState s = make_state(g, k, branch);
      if (!is_single_lobe(s.loop)) continue;
      out.solution = SolvedGluing{EllipticModulus(k), s.tail.a, s.flux_residual(),
                                  c, branch, out.roots};
      break;
    } catch (const InvalidStateError&) {
    } catch (const DomainError&) {
    }
  }
  return out;
}

}  // namespace tadpole
