#pragma once

// Brute-force reference implementations, test-only. Nothing here shares code
// paths with the sparse walk or the adjoint gradient.

#include <Eigen/Dense>

#include "trainer.hpp"
#include "walk.hpp"

namespace qwrng::oracle {

inline constexpr int kMaxDenseSteps = 10;

using DenseUnitary = Eigen::MatrixXcd;

/// Basis |x> (x) {L, R} for x in [-n, n]; index 2 (x + n) + c.
int basis_index(int steps, int x, int coin);

/// Block-diagonal coin for step t (identity on sites the schedule does not
/// cover) followed by the cyclic conditional shift, as one dense matrix.
DenseUnitary step_unitary(const CoinSchedule& schedule, int t);

/// Product of all step unitaries, last step leftmost.
DenseUnitary walk_unitary(const CoinSchedule& schedule);

/// Throws Size for n > 10.
Distribution dense_walk(const CoinSchedule& schedule, const CoinVector& initial);

/// Central differences of 1/2 sum (T - P)^2 using dense_walk. Entries within h
/// of 0 or 1 use the second-order one-sided stencil pointing into [0, 1].
GradientGrid fd_gradient(const CoinSchedule& schedule, const WalkState& initial,
                         const Distribution& target, double h);

}  // namespace qwrng::oracle
