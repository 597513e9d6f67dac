#pragma once

#include <span>
#include <vector>

#include "agreelab/polynomial.hpp"
#include "agreelab/rational_tf.hpp"

namespace agreelab::design {

using lti::RationalTF;
using numerics::Polynomial;

/// Third-order network filter Fa = wn^2 / ((tau s + 1)(s^2 + 2 zeta wn s + wn^2)).
struct FilterParams {
  double omega_n = 0.0;
  double tau = 0.0;
  double zeta = 0.0;
};

/// Throws on a non-positive parameter.
RationalTF make_filter(const FilterParams& p);

/// tau s^3 + (2 zeta wn tau + 1) s^2 + (tau wn^2 + 2 zeta wn) s + wn^2 (1 - alpha)
Polynomial mode_denominator(const FilterParams& p, double alpha);

/// Routh-Hurwitz on every alpha < 1 - 1e-9, plus the alpha = 1 cubic having
/// one root at the origin and a Hurwitz quadratic remainder.
bool feasible(const FilterParams& p, std::span<const double> alphas);

/// alpha in {-1, 1}: the constant term falls with alpha while the other
/// coefficients do not depend on it, so -1 is the worst mode on [-1, 1).
bool feasible_worst_case(const FilterParams& p);

/// ||s T_1 Fa||_2^2 = wn^3 / ((2 wn tau + 4 zeta)(2 wn tau zeta + 1)), the
/// Lyapunov solution for the companion realization of drift_transfer.
/// Throws when the quadratic factor at alpha = 1 is not Hurwitz.
double h2_drift(const FilterParams& p);

/// s T_1(s) Fa(s) = wn^2 / (tau s^2 + (2 zeta wn tau + 1) s + tau wn^2 + 2 zeta wn).
RationalTF drift_transfer(const FilterParams& p);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct DesignBounds {
  Interval omega_n, tau, zeta;
};

struct DesignResult {
  FilterParams params;
  double h2 = 0.0;
};

/// Log-spaced grid (grid_points per axis, endpoints included) filtered by
/// feasibility, then a Nelder-Mead search in log coordinates from the best
/// grid point, clamped to the box. alphas empty means the worst case over
/// [-1, 1). Throws InfeasibleError if no grid point is feasible.
DesignResult design_filter(const DesignBounds& bounds, std::span<const double> alphas, int grid_points = 24);

}  // namespace agreelab::design
