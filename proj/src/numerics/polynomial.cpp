#include "agreelab/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "agreelab/error.hpp"
#include "agreelab/linalg.hpp"

namespace agreelab::numerics {

Polynomial::Polynomial(std::initializer_list<double> ascending) : coeffs_(ascending) {
  normalize();
}

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
  normalize();
}

void Polynomial::normalize() {
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Polynomial Polynomial::monomial(int k, double c) {
  std::vector<double> v(static_cast<std::size_t>(k) + 1, 0.0);
  v.back() = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots, double lead) {
  std::vector<Complex> acc{Complex(lead, 0.0)};
  for (const Complex& r : roots) {
    std::vector<Complex> next(acc.size() + 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i + 1] += acc[i];
      next[i] -= r * acc[i];
    }
    acc = std::move(next);
  }
  std::vector<double> re(acc.size());
  std::transform(acc.begin(), acc.end(), re.begin(), [](Complex c) { return c.real(); });
  return Polynomial(std::move(re));
}

double Polynomial::operator[](int i) const {
  if (i < 0 || i > degree()) return 0.0;
  return coeffs_[static_cast<std::size_t>(i)];
}

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Complex Polynomial::operator()(Complex s) const {
  Complex acc(0.0, 0.0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (degree() == 0) return Polynomial();
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return Polynomial(std::move(d));
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (double& c : r.coeffs_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  normalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) { return *this += -rhs; }

Polynomial& Polynomial::operator*=(double c) {
  for (double& x : coeffs_) x *= c;
  normalize();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(out));
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) { return a * b; }

PolyDivision poly_divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw Error("polynomial division by zero");
  const int n = a.degree();
  const int m = b.degree();
  if (a.is_zero() || n < m) return {Polynomial(), a};
  std::vector<double> rem = a.coeffs();
  std::vector<double> quot(static_cast<std::size_t>(n - m) + 1, 0.0);
  const double lead = b.leading();
  for (int k = n - m; k >= 0; --k) {
    const double q = rem[static_cast<std::size_t>(k + m)] / lead;
    quot[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= m; ++j) rem[static_cast<std::size_t>(k + j)] -= q * b[j];
    rem[static_cast<std::size_t>(k + m)] = 0.0;
  }
  rem.resize(static_cast<std::size_t>(std::max(m, 1)));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

bool approx_equal(const Polynomial& a, const Polynomial& b, double rel_tol) {
  const int n = std::max(a.degree(), b.degree());
  const double scale = std::max({a.max_abs_coeff(), b.max_abs_coeff(), 1e-300});
  for (int i = 0; i <= n; ++i)
    if (std::abs(a[i] - b[i]) > rel_tol * scale) return false;
  return true;
}

namespace {

// Parlett-Reinsch style diagonal balancing; improves companion-matrix
// eigenvalue accuracy when coefficients span many orders of magnitude.
void balance(Matrix& m) {
  const Eigen::Index n = m.rows();
  bool changed = true;
  for (int pass = 0; changed && pass < 100; ++pass) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double row = m.row(i).lpNorm<1>() - std::abs(m(i, i));
      const double col = m.col(i).lpNorm<1>() - std::abs(m(i, i));
      if (row == 0.0 || col == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double f = std::ldexp(1.0, exponent);
      if (col * f + row / f < 0.95 * (col + row)) {
        m.col(i) *= f;
        m.row(i) /= f;
        changed = true;
      }
    }
  }
}

Complex polish(const Polynomial& p, const Polynomial& dp, Complex z) {
  Complex best = z;
  double best_res = std::abs(p(z));
  for (int it = 0; it < 4 && best_res > 0.0; ++it) {
    const Complex d = dp(best);
    if (d == Complex(0.0, 0.0)) break;
    const Complex next = best - p(best) / d;
    const double res = std::abs(p(next));
    if (!(res < best_res)) break;
    best = next;
    best_res = res;
  }
  return best;
}

}  // namespace

std::vector<Complex> poly_roots(const Polynomial& p) {
  if (p.is_zero()) throw Error("undefined roots: zero polynomial");
  std::vector<Complex> roots;

  int zeros = 0;
  while (zeros < p.degree() && p[zeros] == 0.0) ++zeros;
  roots.assign(static_cast<std::size_t>(zeros), Complex(0.0, 0.0));

  std::vector<double> rest(p.coeffs().begin() + zeros, p.coeffs().end());
  const Polynomial q(rest);
  const int m = q.degree();
  if (m == 0) return roots;

  std::vector<Complex> reps;  // real roots and upper-half-plane roots
  if (m == 1) {
    reps.emplace_back(-q[0] / q[1], 0.0);
  } else {
    Matrix c = companion(q.coeffs());
    balance(c);
    Eigen::EigenSolver<Matrix> es(c, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw Error("poly_roots: eigenvalue iteration failed");
    const auto ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev[i].imag() >= 0.0) reps.push_back(ev[i]);
    std::size_t expanded = 0;
    for (const Complex& z : reps) expanded += z.imag() == 0.0 ? 1 : 2;
    if (expanded != static_cast<std::size_t>(m))
      throw Error("poly_roots: companion spectrum is not conjugate-closed");
    const Polynomial dq = q.derivative();
    for (Complex& z : reps) {
      if (z.imag() == 0.0) {
        z = polish(q, dq, z);
        z = Complex(z.real(), 0.0);
      } else {
        z = polish(q, dq, z);
        if (z.imag() < 0.0) z = std::conj(z);
      }
    }
  }
  std::stable_sort(reps.begin(), reps.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() < b.imag();
  });
  for (const Complex& z : reps) {
    roots.push_back(z);
    if (z.imag() != 0.0) roots.push_back(std::conj(z));
  }
  return roots;
}

}  // namespace agreelab::numerics
