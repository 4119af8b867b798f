#pragma once

#include <vector>

#include "tadpole/profiles.hpp"

namespace tadpole {

/// Uniform grids on the loop [-L, L] and the truncated half-line [0, R].
/// The loop endpoints and the tail origin are one vertex node.
class Discretization {
 public:
  /// h <= 0 selects the default 1e-3 * min(L, c2); R <= 0 selects 40 * c2.
  Discretization(const GraphParams& g, double h = 0.0, double R = 0.0);

  static double default_h(const GraphParams& g);
  static double default_R(const GraphParams& g);

  double h() const noexcept { return h_; }
  double h_loop() const noexcept { return h_loop_; }
  double h_tail() const noexcept { return h_tail_; }
  double L() const noexcept { return L_; }
  double R() const noexcept { return R_; }
  /// Loop points including both copies of the vertex.
  int N_loop() const noexcept { return n_loop_ + 1; }
  /// Tail points including the vertex and the truncation point.
  int N_tail() const noexcept { return n_tail_ + 1; }
  int loop_cells() const noexcept { return n_loop_; }
  int tail_cells() const noexcept { return n_tail_; }

  /// Unknowns: vertex, loop interior, tail interior (Dirichlet at R).
  int unknowns() const noexcept { return n_loop_ + n_tail_ - 1; }
  static constexpr int vertex() { return 0; }
  /// Unknown index of loop point i in [0, n_loop]; both ends map to the vertex.
  int loop_index(int i) const noexcept { return (i == 0 || i == n_loop_) ? 0 : i; }
  /// Unknown index of tail point j in [0, n_tail); the point j = n_tail is pinned.
  int tail_index(int j) const noexcept { return j == 0 ? 0 : n_loop_ - 1 + j; }

  double loop_x(int i) const noexcept { return -L_ + i * h_loop_; }
  double tail_y(int j) const noexcept { return j * h_tail_; }

  /// Same geometry at half the spacing.
  Discretization refined() const;

 private:
  double h_, h_loop_, h_tail_, L_, R_;
  int n_loop_, n_tail_;
  GraphParams g_;
};

}  // namespace tadpole
