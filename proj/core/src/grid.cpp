#include "tadpole/grid.hpp"

#include <algorithm>
#include <cmath>

#include "tadpole/errors.hpp"

namespace tadpole {

double Discretization::default_h(const GraphParams& g) {
  return 1e-3 * std::min(g.L, g.c2);
}

double Discretization::default_R(const GraphParams& g) { return 40.0 * g.c2; }

Discretization::Discretization(const GraphParams& g, double h, double R)
    : g_(g) {
  g.validate();
  h_ = h > 0.0 ? h : default_h(g);
  R_ = R > 0.0 ? R : default_R(g);
  L_ = g.L;
  n_loop_ = std::max(4, static_cast<int>(std::lround(2.0 * L_ / h_)));
  n_tail_ = std::max(4, static_cast<int>(std::lround(R_ / h_)));
  h_loop_ = 2.0 * L_ / n_loop_;
  h_tail_ = R_ / n_tail_;
}

Discretization Discretization::refined() const {
  Discretization d = *this;
  d.h_ = 0.5 * h_;
  d.n_loop_ = 2 * n_loop_;
  d.n_tail_ = 2 * n_tail_;
  d.h_loop_ = 0.5 * h_loop_;
  d.h_tail_ = 0.5 * h_tail_;
  return d;
}

}  // namespace tadpole
