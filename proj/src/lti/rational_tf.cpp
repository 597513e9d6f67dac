#include "agreelab/rational_tf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agreelab/error.hpp"

namespace agreelab::lti {

RationalTF::RationalTF(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error("rational function with zero denominator");
  const double lead = den_.leading();
  if (lead != 1.0) {
    num_ *= 1.0 / lead;
    den_ *= 1.0 / lead;
  }
}

int RationalTF::relative_degree() const {
  if (num_.is_zero()) return std::numeric_limits<int>::max();
  return den_.degree() - num_.degree();
}

RationalTF tf_series(const RationalTF& g1, const RationalTF& g2) {
  return RationalTF(g1.num() * g2.num(), g1.den() * g2.den());
}

RationalTF tf_parallel(const RationalTF& g1, const RationalTF& g2) {
  return RationalTF(g1.num() * g2.den() + g2.num() * g1.den(), g1.den() * g2.den());
}

RationalTF tf_scale(const RationalTF& g, double c) { return RationalTF(g.num() * c, g.den()); }

RationalTF tf_inverse(const RationalTF& g) {
  if (g.num().is_zero()) throw Error("tf_inverse: zero numerator");
  return RationalTF(g.den(), g.num());
}

RationalTF tf_cancel(const RationalTF& g, double tol) {
  if (g.num().is_zero()) return RationalTF();
  if (g.num().degree() == 0 || g.den().degree() == 0) return g;

  const auto zs = numerics::poly_roots(g.num());
  const auto ps = numerics::poly_roots(g.den());
  std::vector<bool> used(ps.size(), false);
  std::vector<Complex> common;
  for (const Complex& z : zs) {
    std::size_t best = ps.size();
    double best_dist = tol;
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(z - ps[j]);
      if (dist <= best_dist) {
        best = j;
        best_dist = dist;
      }
    }
    if (best < ps.size()) {
      used[best] = true;
      common.push_back(ps[best]);
    }
  }
  if (common.empty()) return g;
  const Polynomial factor = Polynomial::from_roots(common);
  return RationalTF(numerics::poly_divmod(g.num(), factor).quotient,
                    numerics::poly_divmod(g.den(), factor).quotient);
}

LoopTransfers tf_feedback(const RationalTF& p, const RationalTF& f) {
  const Polynomial closed = p.den() * f.den() - p.num() * f.num();
  if (closed.is_zero()) throw Error("tf_feedback: algebraic loop, 1 - p f vanishes identically");
  return {RationalTF(p.den() * f.den(), closed), RationalTF(p.num() * f.den(), closed)};
}

std::vector<Complex> tf_poles(const RationalTF& g) {
  const RationalTF r = tf_cancel(g);
  if (r.den().degree() == 0) return {};
  return numerics::poly_roots(r.den());
}

std::vector<Complex> tf_zeros(const RationalTF& g) {
  const RationalTF r = tf_cancel(g);
  if (r.num().is_zero() || r.num().degree() == 0) return {};
  return numerics::poly_roots(r.num());
}

bool tf_is_hurwitz(const RationalTF& g) {
  const auto poles = tf_poles(g);
  return std::all_of(poles.begin(), poles.end(), [](Complex p) { return p.real() < -kHurwitzMargin; });
}

MarginalPoles tf_marginal_poles(const RationalTF& g) {
  MarginalPoles out;
  bool lhp = true;
  for (const Complex& p : tf_poles(g)) {
    if (p.real() > kHurwitzMargin) lhp = false;
    if (std::abs(p.real()) <= kHurwitzMargin) out.axis_poles.push_back(p);
  }
  for (std::size_t i = 0; i < out.axis_poles.size(); ++i)
    for (std::size_t j = i + 1; j < out.axis_poles.size(); ++j)
      if (std::abs(out.axis_poles[i] - out.axis_poles[j]) <= kRootClusterTolerance)
        out.repeated_axis_pole = true;
  out.in_closed_lhp = lhp && !out.repeated_axis_pole;
  return out;
}

}  // namespace agreelab::lti
