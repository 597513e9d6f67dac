#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace agreelab::numerics {

using Complex = std::complex<double>;

/// Real polynomial stored with ascending-degree coefficients.
///
/// Trailing (highest-degree) exact zeros are stripped on construction, so
/// `degree()` is `coeffs().size() - 1`. The zero polynomial is the single
/// coefficient 0 and reports degree 0; use `is_zero()` to tell it apart from
/// a nonzero constant.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  Polynomial(std::initializer_list<double> ascending);
  explicit Polynomial(std::vector<double> ascending);

  static Polynomial constant(double c) { return Polynomial({c}); }
  /// c * s^k
  static Polynomial monomial(int k, double c = 1.0);
  /// lead * prod (s - r). Roots must be closed under conjugation.
  static Polynomial from_roots(std::span<const Complex> roots, double lead = 1.0);

  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
  double leading() const { return coeffs_.back(); }
  /// Coefficient of s^i, zero past the degree.
  double operator[](int i) const;

  double operator()(double s) const;
  Complex operator()(Complex s) const;

  Polynomial derivative() const;
  double max_abs_coeff() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(double c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double c) { return a *= c; }
  friend Polynomial operator*(double c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void normalize();
  std::vector<double> coeffs_;
};

Polynomial poly_mul(const Polynomial& a, const Polynomial& b);

struct PolyDivision {
  Polynomial quotient;
  Polynomial remainder;
};
/// Long division a = q*b + r with deg r < deg b. Throws on b == 0.
PolyDivision poly_divmod(const Polynomial& a, const Polynomial& b);

/// Coefficient-wise comparison after padding, relative to the larger
/// coefficient magnitude of the two.
bool approx_equal(const Polynomial& a, const Polynomial& b, double rel_tol = 1e-9);

/// All roots, as eigenvalues of the companion matrix followed by Newton
/// polishing. Exact zeros at the origin are split off first. Complex roots
/// come out as adjacent conjugate pairs (positive imaginary part first).
/// Throws for the zero polynomial.
std::vector<Complex> poly_roots(const Polynomial& p);

/// First column of the Routh array. A zero pivot is replaced with a small
/// positive epsilon and the table is continued; `epsilon_used` reports that.
/// A row that vanishes identically stops the table (`zero_row` set).
struct RouthTable {
  std::vector<double> first_column;
  bool epsilon_used = false;
  bool zero_row = false;
  int sign_changes = 0;
};
RouthTable routh_table(const Polynomial& p);

/// True iff every root lies strictly in the open left half-plane.
bool routh_hurwitz_stable(const Polynomial& p);

}  // namespace agreelab::numerics
