#include "agreelab/state_space.hpp"

#include <cmath>

#include "agreelab/error.hpp"

namespace agreelab::lti {

StateSpace::StateSpace(Matrix a_, Matrix b_, Matrix c_, Matrix d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n || c.cols() != n || d.rows() != c.rows() || d.cols() != b.cols())
    throw Error("state-space dimensions are inconsistent");
}

CMatrix StateSpace::evaluate(Complex s) const {
  const Eigen::Index n = states();
  CMatrix out = d.cast<Complex>();
  if (n == 0) return out;
  CMatrix resolvent = -a.cast<Complex>();
  resolvent.diagonal().array() += s;
  out += c.cast<Complex>() * resolvent.partialPivLu().solve(b.cast<Complex>());
  return out;
}

namespace {

// Shared-denominator realization: den monic of degree n, numerators of
// degree <= n.
StateSpace realize_common(const Polynomial& den, const std::vector<Polynomial>& nums) {
  const int n = den.degree();
  const Eigen::Index p = static_cast<Eigen::Index>(nums.size());
  Matrix a = Matrix::Zero(n, n), b = Matrix::Zero(n, 1), c = Matrix::Zero(p, n), d = Matrix::Zero(p, 1);
  if (n > 0) {
    a = numerics::companion(den.coeffs());
    b(n - 1, 0) = 1.0;
  }
  for (Eigen::Index k = 0; k < p; ++k) {
    const Polynomial& num = nums[static_cast<std::size_t>(k)];
    const double feed = num[n] / den.leading();
    d(k, 0) = feed;
    const Polynomial rest = num - den * feed;
    for (int i = 0; i < n; ++i) c(k, i) = rest[i];
  }
  return StateSpace(std::move(a), std::move(b), std::move(c), std::move(d));
}

}  // namespace

StateSpace tf_to_ss(const RationalTF& g) {
  if (!g.is_proper()) throw Error("unrealizable: relative degree negative");
  return realize_common(g.den(), {g.num()});
}

StateSpace tf_column_to_ss(std::span<const RationalTF> column) {
  if (column.empty()) throw Error("tf_column_to_ss: empty column");
  for (const RationalTF& g : column)
    if (!g.is_proper()) throw Error("unrealizable: relative degree negative");

  Polynomial lcm = column.front().den();
  for (std::size_t k = 1; k < column.size(); ++k) {
    const Polynomial& den = column[k].den();
    if (den.degree() == 0) continue;
    std::vector<Complex> have = lcm.degree() > 0 ? numerics::poly_roots(lcm) : std::vector<Complex>{};
    std::vector<bool> used(have.size(), false);
    std::vector<Complex> missing;
    for (const Complex& r : numerics::poly_roots(den)) {
      bool matched = false;
      for (std::size_t j = 0; j < have.size() && !matched; ++j) {
        if (!used[j] && std::abs(have[j] - r) <= kCancelTolerance) {
          used[j] = true;
          matched = true;
        }
      }
      if (!matched) missing.push_back(r);
    }
    if (!missing.empty()) lcm = lcm * Polynomial::from_roots(missing);
  }

  std::vector<Polynomial> nums;
  for (const RationalTF& g : column) {
    const Polynomial scale = numerics::poly_divmod(lcm, g.den()).quotient;
    nums.push_back(g.num() * scale);
  }
  return realize_common(lcm, nums);
}

StateSpace ss_block_diag(std::span<const StateSpace> systems) {
  Eigen::Index n = 0, m = 0, p = 0;
  for (const auto& g : systems) {
    n += g.states();
    m += g.inputs();
    p += g.outputs();
  }
  Matrix a = Matrix::Zero(n, n), b = Matrix::Zero(n, m), c = Matrix::Zero(p, n), d = Matrix::Zero(p, m);
  Eigen::Index on = 0, om = 0, op = 0;
  for (const auto& g : systems) {
    const Eigen::Index gn = g.states(), gm = g.inputs(), gp = g.outputs();
    a.block(on, on, gn, gn) = g.a;
    b.block(on, om, gn, gm) = g.b;
    c.block(op, on, gp, gn) = g.c;
    d.block(op, om, gp, gm) = g.d;
    on += gn;
    om += gm;
    op += gp;
  }
  return StateSpace(std::move(a), std::move(b), std::move(c), std::move(d));
}

StateSpace ss_series(const StateSpace& g1, const StateSpace& g2) {
  if (g1.outputs() != g2.inputs()) throw Error("ss_series: dimension mismatch");
  const Eigen::Index n1 = g1.states(), n2 = g2.states();
  Matrix a = Matrix::Zero(n1 + n2, n1 + n2);
  a.topLeftCorner(n1, n1) = g1.a;
  a.bottomLeftCorner(n2, n1) = g2.b * g1.c;
  a.bottomRightCorner(n2, n2) = g2.a;
  Matrix b(n1 + n2, g1.inputs());
  b << g1.b, g2.b * g1.d;
  Matrix c(g2.outputs(), n1 + n2);
  c << g2.d * g1.c, g2.c;
  return StateSpace(std::move(a), std::move(b), std::move(c), g2.d * g1.d);
}

StateSpace ss_sum(const StateSpace& g1, const StateSpace& g2) {
  if (g1.inputs() != g2.inputs() || g1.outputs() != g2.outputs()) throw Error("ss_sum: dimension mismatch");
  const Eigen::Index n1 = g1.states(), n2 = g2.states();
  Matrix a = Matrix::Zero(n1 + n2, n1 + n2);
  a.topLeftCorner(n1, n1) = g1.a;
  a.bottomRightCorner(n2, n2) = g2.a;
  Matrix b(n1 + n2, g1.inputs());
  b << g1.b, g2.b;
  Matrix c(g1.outputs(), n1 + n2);
  c << g1.c, g2.c;
  return StateSpace(std::move(a), std::move(b), std::move(c), g1.d + g2.d);
}

StateSpace ss_output_transform(const StateSpace& g, const Matrix& t) {
  if (t.cols() != g.outputs()) throw Error("ss_output_transform: dimension mismatch");
  return StateSpace(g.a, g.b, t * g.c, t * g.d);
}

StateSpace ss_interconnect(const StateSpace& g, const Matrix& wiring, const Matrix& external,
                           const Matrix& selection) {
  const Eigen::Index nw = g.inputs(), nz = g.outputs();
  if (wiring.rows() != nw || wiring.cols() != nz || external.rows() != nw || selection.cols() != nz)
    throw Error("ss_interconnect: dimension mismatch");
  const Matrix loop = Matrix::Identity(nz, nz) - g.d * wiring;
  Eigen::FullPivLU<Matrix> lu(loop);
  if (!lu.isInvertible()) throw Error("ss_interconnect: algebraic loop is singular");
  const Matrix k = lu.inverse();
  const Matrix kc = k * g.c;
  const Matrix kdn = k * g.d * external;
  return StateSpace(g.a + g.b * wiring * kc, g.b * (wiring * kdn + external), selection * kc,
                    selection * kdn);
}

double h2_norm_sq(const StateSpace& g) {
  if (g.d.size() > 0 && g.d.cwiseAbs().maxCoeff() != 0.0) throw Error("H2 undefined: direct feedthrough");
  if (g.states() == 0) return 0.0;
  if (numerics::spectral_abscissa(g.a) >= -kHurwitzMargin) throw Error("H2 undefined: system not Hurwitz");
  const Matrix x = numerics::lyapunov_solve(g.a, g.b * g.b.transpose());
  return (g.c * x * g.c.transpose()).trace();
}

double h2_norm_sq(const RationalTF& g) {
  const RationalTF r = tf_cancel(g);
  if (!r.is_strictly_proper()) throw Error("H2 undefined: not strictly proper");
  if (r.is_zero()) return 0.0;
  if (!tf_is_hurwitz(r)) throw Error("H2 undefined: marginal or unstable pole");
  return h2_norm_sq(tf_to_ss(r));
}

}  // namespace agreelab::lti
