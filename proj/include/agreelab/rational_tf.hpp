#pragma once

#include <complex>
#include <vector>

#include "agreelab/polynomial.hpp"

namespace agreelab::lti {

using numerics::Complex;
using numerics::Polynomial;

/// SISO rational function num(s)/den(s).
///
/// The denominator is normalized to leading coefficient +1. Improper values
/// (deg num > deg den) are legal; they only fail at realization.
class RationalTF {
 public:
  RationalTF() : num_(Polynomial::constant(0.0)), den_(Polynomial::constant(1.0)) {}
  RationalTF(Polynomial num, Polynomial den);

  static RationalTF constant(double c) {
    return RationalTF(Polynomial::constant(c), Polynomial::constant(1.0));
  }
  /// Ascending coefficient lists, the format used by config files.
  static RationalTF from_coeffs(std::vector<double> num, std::vector<double> den) {
    return RationalTF(Polynomial(std::move(num)), Polynomial(std::move(den)));
  }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  /// deg den - deg num; the zero function counts as infinitely proper.
  int relative_degree() const;
  bool is_proper() const { return is_zero() || relative_degree() >= 0; }
  bool is_strictly_proper() const { return is_zero() || relative_degree() >= 1; }

  Complex operator()(Complex s) const { return num_(s) / den_(s); }
  double dc_gain() const { return num_(0.0) / den_(0.0); }

 private:
  Polynomial num_;
  Polynomial den_;
};

RationalTF tf_series(const RationalTF& g1, const RationalTF& g2);
RationalTF tf_parallel(const RationalTF& g1, const RationalTF& g2);
RationalTF tf_scale(const RationalTF& g, double c);
/// 1/g. Throws when g is identically zero.
RationalTF tf_inverse(const RationalTF& g);

inline constexpr double kCancelTolerance = 1e-7;

/// Removes numerator/denominator root pairs within `tol` of each other.
RationalTF tf_cancel(const RationalTF& g, double tol = kCancelTolerance);

/// Local loop with positive-feedback controller f around plant p.
struct LoopTransfers {
  RationalTF sensitivity;  // S = 1 / (1 - p f)
  RationalTF disturbance;  // Td = S p
};
/// Built directly from cleared polynomials, so the shared denominator of p*f
/// never appears. Throws on an algebraic loop (1 - p f == 0).
LoopTransfers tf_feedback(const RationalTF& p, const RationalTF& f);

std::vector<Complex> tf_poles(const RationalTF& g);
std::vector<Complex> tf_zeros(const RationalTF& g);

inline constexpr double kHurwitzMargin = 1e-9;
inline constexpr double kRootClusterTolerance = 1e-6;

/// All poles (after cancellation) with real part < -1e-9.
bool tf_is_hurwitz(const RationalTF& g);

/// Closed left half-plane test: real parts <= +1e-9 and every imaginary-axis
/// pole simple. Reports the imaginary-axis poles and whether any repeat.
struct MarginalPoles {
  bool in_closed_lhp = false;
  bool repeated_axis_pole = false;
  std::vector<Complex> axis_poles;
};
MarginalPoles tf_marginal_poles(const RationalTF& g);

}  // namespace agreelab::lti
