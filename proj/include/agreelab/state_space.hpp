#pragma once

#include <span>
#include <vector>

#include "agreelab/linalg.hpp"
#include "agreelab/rational_tf.hpp"

namespace agreelab::lti {

using numerics::CMatrix;
using numerics::Matrix;

/// x' = A x + B u, y = C x + D u.
struct StateSpace {
  Matrix a, b, c, d;

  StateSpace() = default;
  StateSpace(Matrix a_, Matrix b_, Matrix c_, Matrix d_);

  Eigen::Index states() const { return a.rows(); }
  Eigen::Index inputs() const { return d.cols(); }
  Eigen::Index outputs() const { return d.rows(); }

  /// Transfer matrix C (sI - A)^-1 B + D.
  CMatrix evaluate(Complex s) const;
};

/// Controllable canonical realization of a proper SISO function. States are
/// x1, x1', ..., the last row of A holds the negated denominator, B = e_n.
StateSpace tf_to_ss(const RationalTF& g);

/// Single-input, multi-output realization of a column [g1; g2; ...] over a
/// common denominator (the least common multiple of the denominators, found
/// by root matching).
StateSpace tf_column_to_ss(std::span<const RationalTF> column);

StateSpace ss_block_diag(std::span<const StateSpace> systems);
/// Output of g1 feeds g2.
StateSpace ss_series(const StateSpace& g1, const StateSpace& g2);
/// Shared input, summed outputs.
StateSpace ss_sum(const StateSpace& g1, const StateSpace& g2);
/// Outputs premultiplied by t.
StateSpace ss_output_transform(const StateSpace& g, const Matrix& t);

/// Closes static wiring around a stacked open-loop system g with inputs w and
/// outputs z: w = M z + N e, output y = S z. External input e, returns the
/// system e -> y. Throws on an algebraic loop (I - D M singular).
StateSpace ss_interconnect(const StateSpace& g, const Matrix& wiring, const Matrix& external,
                           const Matrix& selection);

/// Squared H2 norm via the controllability gramian. Requires D = 0 and A
/// Hurwitz, otherwise throws "H2 undefined".
double h2_norm_sq(const StateSpace& g);
/// Cancels, then realizes; same preconditions.
double h2_norm_sq(const RationalTF& g);

}  // namespace agreelab::lti
