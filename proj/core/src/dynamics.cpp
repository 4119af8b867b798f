#include "tadpole/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>

#include "tadpole/errors.hpp"

namespace tadpole {

Dynamics::Dynamics(const GraphParams& g, const Discretization& d, double tail_end_value)
    : g_(g), d_(d), u_R_(tail_end_value) {
  GraphParams free = g;
  free.Z = 0.0;
  const GraphOperator op = assemble_laplacian(free, d);
  K_ = op.problem.A;
  M_ = op.problem.M;
  b_ = Eigen::VectorXd::Zero(M_.size());
  b_[d.tail_index(d.tail_cells() - 1)] = u_R_ / d.h_tail();
  end_mass_ = 0.5 * d.h_tail() / (g.c2 * g.c2);
}

double Dynamics::max_dt() const {
  return 0.9 * std::min(d_.h_loop(), d_.h_tail()) / std::max(g_.c1, g_.c2);
}

void Dynamics::check_dt(double dt) const {
  if (!(dt > 0.0) || dt > max_dt() * (1.0 + 1e-12)) {
    throw PreconditionError("time step violates the CFL bound dt <= 0.9 h / max(c)");
  }
}

Eigen::VectorXd Dynamics::acceleration(const Eigen::VectorXd& u) const {
  Eigen::VectorXd f = b_ - K_ * u;
  f[0] += g_.Z * u[0];
  return f.cwiseQuotient(M_) - u.array().sin().matrix();
}

double Dynamics::energy(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  const double kinetic = 0.5 * v.dot(M_.cwiseProduct(v));
  const double potential = M_.dot((1.0 - u.array().cos()).matrix()) +
                           end_mass_ * (1.0 - std::cos(u_R_));
  const double grad =
      0.5 * (u.dot(K_ * u) - 2.0 * b_.dot(u) + u_R_ * u_R_ / d_.h_tail());
  const double vertex = -0.5 * g_.Z * u[0] * u[0];
  return g_.c2 * g_.c2 * (kinetic + potential + grad + vertex);
}

double Dynamics::deviation(const Eigen::VectorXd& du, const Eigen::VectorXd& dv) const {
  return std::sqrt(du.dot(K_ * du) + du.dot(M_.cwiseProduct(du)) +
                   dv.dot(M_.cwiseProduct(dv)));
}

GeneralizedProblem Dynamics::linearization(const Eigen::VectorXd& u) const {
  GeneralizedProblem p{K_, M_};
  for (int i = 0; i < p.A.rows(); ++i) p.A.coeffRef(i, i) += M_[i] * std::cos(u[i]);
  p.A.coeffRef(0, 0) -= g_.Z;
  return p;
}

void Dynamics::kdk(Eigen::VectorXd& u, Eigen::VectorXd& v, Eigen::VectorXd& a,
                   double dt) const {
  v += 0.5 * dt * a;
  u += dt * v;
  a = acceleration(u);
  v += 0.5 * dt * a;
}

EvolutionState Dynamics::to_state(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                  double t) const {
  EvolutionState s;
  const GraphFunction fu = to_graph(d_, u);
  const GraphFunction fv = to_graph(d_, v);
  s.u_loop = fu.loop;
  s.v_loop = fv.loop;
  s.u_tail = fu.tail;
  s.v_tail = fv.tail;
  s.u_tail.back() = u_R_;
  s.t = t;
  return s;
}

void Dynamics::from_state(const EvolutionState& s, Eigen::VectorXd& u,
                          Eigen::VectorXd& v) const {
  auto check = [&](const std::vector<double>& loop, const std::vector<double>& tail) {
    if (static_cast<int>(loop.size()) != d_.N_loop() ||
        static_cast<int>(tail.size()) != d_.N_tail()) {
      throw DimensionError("evolution state does not match the grid");
    }
    const double scale = std::max(1.0, std::abs(tail.front()));
    if (std::abs(loop.front() - tail.front()) > 1e-12 * scale ||
        std::abs(loop.back() - tail.front()) > 1e-12 * scale) {
      throw DomainError("evolution state is discontinuous at the vertex");
    }
  };
  check(s.u_loop, s.u_tail);
  check(s.v_loop, s.v_tail);
  u = from_graph(d_, GraphFunction{s.u_loop, s.u_tail});
  v = from_graph(d_, GraphFunction{s.v_loop, s.v_tail});
}

EvolutionState step(const EvolutionState& state, const Dynamics& ctx, double dt) {
  ctx.check_dt(dt);
  Eigen::VectorXd u, v;
  ctx.from_state(state, u, v);
  Eigen::VectorXd a = ctx.acceleration(u);
  ctx.kdk(u, v, a, dt);
  return ctx.to_state(u, v, state.t + dt);
}

double energy(const EvolutionState& state, const Dynamics& ctx) {
  Eigen::VectorXd u, v;
  ctx.from_state(state, u, v);
  return ctx.energy(u, v);
}

Eigen::VectorXd state_vector(const StationaryState& s, const Discretization& d) {
  const SampledState smp = sample_state(s, d);
  return from_graph(d, GraphFunction{smp.loop_value, smp.tail_value});
}

Eigen::VectorXd discrete_equilibrium(const Dynamics& ctx, const StationaryState& s,
                                     double tol, int max_iter) {
  Eigen::VectorXd u = state_vector(s, ctx.grid());
  using Factor = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    // Residual of M a(u) = 0, i.e. -K u + b + Z e_v u_v - M sin u.
    const Eigen::VectorXd F = ctx.acceleration(u).cwiseProduct(ctx.mass());
    Factor f(ctx.linearization(u).A);
    if (f.info() != Eigen::Success) throw NumericalError("Newton factorization failed");
    const Eigen::VectorXd du = f.solve(F);
    if (!du.allFinite()) throw NumericalError("Newton step not finite");
    u += du;
    // The residual itself bottoms out at roundoff ~ eps |u| / h^2, so a step
    // that stops contracting below sqrt(tol) marks the rounding floor.
    const double step = du.lpNorm<Eigen::Infinity>();
    if (step < tol || (step > 0.5 * prev && step < std::sqrt(tol))) return u;
    prev = step;
  }
  throw NumericalError("discrete equilibrium: Newton did not converge");
}

GrowthFit fit_growth(const std::vector<double>& t, const std::vector<double>& dev,
                     double lo, double hi) {
  GrowthFit fit;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size() && i < dev.size(); ++i) {
    if (dev[i] >= lo && dev[i] <= hi) {
      xs.push_back(t[i]);
      ys.push_back(std::log(dev[i]));
    }
  }
  fit.points = static_cast<int>(xs.size());
  if (xs.size() < 3) return fit;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.rate = sxy / sxx;
  const double icpt = my - fit.rate * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (icpt + fit.rate * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.t0 = xs.front();
  fit.t1 = xs.back();
  return fit;
}

EvolutionTrace evolve(const Dynamics& ctx, const Eigen::VectorXd& u0,
                      const Eigen::VectorXd& v0, const Eigen::VectorXd& reference,
                      const EvolveOptions& opt) {
  if (!(opt.T > 0.0)) throw PreconditionError("evolve: T must be positive");
  const double dt = opt.dt > 0.0 ? opt.dt : ctx.max_dt();
  ctx.check_dt(dt);
  const int every = std::max(1, opt.record_every);
  const long steps = std::lround(std::ceil(opt.T / dt - 1e-9));

  EvolutionTrace tr;
  Eigen::VectorXd u = u0;
  Eigen::VectorXd v = v0;
  Eigen::VectorXd a = ctx.acceleration(u);
  auto record = [&](double t) {
    const double dev = ctx.deviation(u - reference, v);
    tr.times.push_back(t);
    tr.deviation_norms.push_back(dev);
    tr.energies.push_back(ctx.energy(u, v));
    tr.vertex_values.push_back(u[0]);
    // Loop ends and tail origin share one unknown; the defect is that of the
    // exported state.
    const EvolutionState s = ctx.to_state(u, v, t);
    tr.continuity_defects.push_back(std::max(std::abs(s.u_loop.front() - s.u_tail.front()),
                                             std::abs(s.u_loop.back() - s.u_tail.front())));
    return dev;
  };

  record(0.0);
  Eigen::VectorXd u_prev = u, v_prev = v;
  double t = 0.0;
  for (long n = 1; n <= steps; ++n) {
    u_prev = u;
    v_prev = v;
    ctx.kdk(u, v, a, dt);
    t = n * dt;
    if (!u.allFinite() || !v.allFinite()) {
      tr.aborted = true;
      u = u_prev;
      v = v_prev;
      t = (n - 1) * dt;
      break;
    }
    if (n % every == 0 || n == steps) {
      if (record(t) > opt.stop_deviation) break;
    }
  }
  tr.final_state = ctx.to_state(u, v, t);
  return tr;
}

InstabilityResult instability_experiment(const StationaryState& s, const SpectrumReport& spec,
                                         double amplitude, const Discretization& d) {
  if (spec.morse_index != 1) {
    throw PreconditionError("instability experiment needs a Morse index of 1");
  }
  if (static_cast<int>(spec.ground_mode.loop.size()) != d.N_loop() ||
      static_cast<int>(spec.ground_mode.tail.size()) != d.N_tail()) {
    throw DimensionError("ground mode was computed on a different grid");
  }
  const double uR = kink_value(s.tail, s.tail.origin + d.R());
  const Dynamics ctx(s.params, d, uR);
  const Eigen::VectorXd ueq = discrete_equilibrium(ctx, s);
  const Eigen::VectorXd mode = from_graph(d, spec.ground_mode);

  InstabilityResult r;
  r.amplitude = amplitude;
  r.predicted_growth = std::sqrt(-spec.eigenvalues.front());
  r.window_lo = 10.0 * amplitude;
  r.window_hi = std::max(1e-2, 100.0 * amplitude);

  EvolveOptions opt;
  opt.T = d.R() / (2.0 * s.params.c2);
  opt.dt = ctx.max_dt();
  opt.record_every = std::max(1, static_cast<int>(std::lround(0.02 / opt.dt)));
  opt.stop_deviation = amplitude > 0.0 ? 2.0 * r.window_hi
                                       : std::numeric_limits<double>::infinity();
  const Eigen::VectorXd u0 = ueq + amplitude * mode;
  const Eigen::VectorXd v0 = Eigen::VectorXd::Zero(u0.size());
  r.trace = evolve(ctx, u0, v0, ueq, opt);
  // with no seed the trace is rounding noise, which has no growth to fit
  if (amplitude > 0.0) {
    r.trace.fit = fit_growth(r.trace.times, r.trace.deviation_norms, r.window_lo, r.window_hi);
  }
  r.fitted_growth = r.trace.fit.rate;
  r.relative_mismatch = r.predicted_growth > 0.0
                            ? std::abs(r.fitted_growth - r.predicted_growth) / r.predicted_growth
                            : 0.0;
  return r;
}

}  // namespace tadpole
