#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "agreelab/error.hpp"
#include "agreelab/linalg.hpp"
#include "agreelab/polynomial.hpp"
#include "properties.hpp"

using namespace agreelab;
using numerics::Complex;
using numerics::Matrix;
using numerics::Polynomial;
using Catch::Approx;

namespace {

// Roots sorted by (real, imag) for order-free comparison.
std::vector<Complex> sorted(std::vector<Complex> r) {
  std::sort(r.begin(), r.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return r;
}

}  // namespace

TEST_CASE("polynomial normalization strips trailing zeros") {
  Polynomial p{1.0, 2.0, 0.0, 0.0};
  CHECK(p.degree() == 1);
  CHECK(Polynomial{0.0, 0.0}.is_zero());
  CHECK(Polynomial{0.0}.degree() == 0);
  CHECK_FALSE(Polynomial{3.0}.is_zero());
}

TEST_CASE("poly_mul examples") {
  CHECK(numerics::poly_mul(Polynomial{1.0, 1.0}, Polynomial{-1.0, 1.0}) == Polynomial{-1.0, 0.0, 1.0});
  CHECK(numerics::poly_mul(Polynomial{2.0, 1.0}, Polynomial{0.0, 0.0, 1.0}) == Polynomial{0.0, 0.0, 2.0, 1.0});
  // (5s+1)(s^2+12s+9) = 5s^3 + 61s^2 + 57s + 9
  CHECK(numerics::poly_mul(Polynomial{1.0, 5.0}, Polynomial{9.0, 12.0, 1.0}) == Polynomial{9.0, 57.0, 61.0, 5.0});
}

TEST_CASE("poly_mul degree adds for nonzero factors") {
  testing::Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const auto a = testing::random_root_poly(rng, 1 + k % 4, -2.0, 2.0);
    const auto b = testing::random_root_poly(rng, 1 + k % 3, -2.0, 2.0);
    CHECK(numerics::poly_mul(a, b).degree() == a.degree() + b.degree());
  }
}

TEST_CASE("poly_divmod reconstructs the dividend") {
  const Polynomial a{1.0, -3.0, 0.0, 2.0, 7.0};
  const Polynomial b{2.0, 1.0, 1.0};
  const auto qr = numerics::poly_divmod(a, b);
  CHECK(qr.remainder.degree() < b.degree());
  CHECK(numerics::approx_equal(qr.quotient * b + qr.remainder, a));
  CHECK_THROWS_AS(numerics::poly_divmod(a, Polynomial{0.0}), Error);
}

TEST_CASE("poly_roots examples") {
  auto r = sorted(numerics::poly_roots(Polynomial{2.0, 3.0, 1.0}));
  REQUIRE(r.size() == 2);
  CHECK(r[0].real() == Approx(-2.0).margin(1e-12));
  CHECK(r[1].real() == Approx(-1.0).margin(1e-12));

  auto z = numerics::poly_roots(Polynomial{0.0, 0.0, 0.0, 1.0});
  REQUIRE(z.size() == 3);
  for (auto v : z) CHECK(std::abs(v) == 0.0);

  auto q = sorted(numerics::poly_roots(Polynomial{9.0, 12.0, 1.0}));
  CHECK(q[0].real() == Approx(-6.0 - 3.0 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK(q[1].real() == Approx(-6.0 + 3.0 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK(q[0].real() == Approx(-11.1962).margin(1e-4));
  CHECK(q[1].real() == Approx(-0.8038).margin(1e-4));
}

TEST_CASE("poly_roots residuals and conjugate pairing") {
  testing::Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const auto p = testing::random_root_poly(rng, 1 + k % 6, -3.0, 1.0);
    const auto roots = numerics::poly_roots(p);
    REQUIRE(static_cast<int>(roots.size()) == p.degree());
    for (std::size_t i = 0; i < roots.size(); ++i) {
      CHECK(std::abs(p(roots[i])) <= 1e-8 * p.max_abs_coeff());
      if (roots[i].imag() > 0.0) {
        REQUIRE(i + 1 < roots.size());
        CHECK(roots[i + 1] == std::conj(roots[i]));
      }
    }
  }
}

TEST_CASE("poly_roots rejects the zero polynomial") {
  CHECK_THROWS_WITH(numerics::poly_roots(Polynomial{0.0}), Catch::Matchers::ContainsSubstring("undefined roots"));
}

TEST_CASE("routh_hurwitz_stable examples") {
  CHECK(numerics::routh_hurwitz_stable(Polynomial{1.0, 1.0, 1.0}));
  CHECK_FALSE(numerics::routh_hurwitz_stable(Polynomial{3.0, 2.0, 1.0, 1.0}));
  CHECK(numerics::routh_hurwitz_stable(Polynomial{18.0, 57.0, 61.0, 5.0}));
}

TEST_CASE("routh table edge cases") {
  // Negative leading coefficient is sign-normalized.
  CHECK(numerics::routh_hurwitz_stable(Polynomial{-1.0, -1.0, -1.0}));
  // s^2 + 1: imaginary-axis pair, zero row.
  const auto t = numerics::routh_table(Polynomial{1.0, 0.0, 1.0});
  CHECK(t.zero_row);
  CHECK_FALSE(numerics::routh_hurwitz_stable(Polynomial{1.0, 0.0, 1.0}));
  // s^3 + s^2 + s + 1 = (s+1)(s^2+1): zero row.
  CHECK_FALSE(numerics::routh_hurwitz_stable(Polynomial{1.0, 1.0, 1.0, 1.0}));
  // s^4 + s^3 + 2s^2 + 2s + 3: zero pivot, epsilon rule, two right-half-plane roots.
  const auto e = numerics::routh_table(Polynomial{3.0, 2.0, 2.0, 1.0, 1.0});
  CHECK(e.epsilon_used);
  CHECK(e.sign_changes == 2);
  CHECK_FALSE(numerics::routh_hurwitz_stable(Polynomial{3.0, 2.0, 2.0, 1.0, 1.0}));
  // Root at the origin.
  CHECK_FALSE(numerics::routh_hurwitz_stable(Polynomial{0.0, 57.0, 61.0, 5.0}));
}

TEST_CASE("sym_eig examples") {
  auto e = numerics::sym_eig(Matrix::Identity(3, 3));
  CHECK(e.values == std::vector<double>{1.0, 1.0, 1.0});

  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  e = numerics::sym_eig(swap);
  CHECK(e.values[0] == Approx(1.0));
  CHECK(e.values[1] == Approx(-1.0));

  Matrix bad(2, 2);
  bad << 0, 1, 2, 0;
  CHECK_THROWS_AS(numerics::sym_eig(bad), Error);
}

TEST_CASE("sym_eig agrees with an independent eigensolver") {
  testing::Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 10;
    Matrix m = Matrix::Random(n, n);
    m = 0.5 * (m + m.transpose()).eval();
    const auto e = numerics::sym_eig(m);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(m);
    for (int i = 0; i < n; ++i)
      CHECK(e.values[static_cast<std::size_t>(i)] == Approx(ref.eigenvalues()[n - 1 - i]).margin(1e-10));
  }
}

TEST_CASE("eig_general examples") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = -1;
  d(1, 1) = -2;
  auto ev = sorted(numerics::eig_general(d));
  CHECK(ev[0].real() == Approx(-2.0));
  CHECK(ev[1].real() == Approx(-1.0));

  Matrix rot(2, 2);
  rot << 0, 1, -1, 0;
  ev = sorted(numerics::eig_general(rot));
  CHECK(ev[0].imag() == Approx(-1.0));
  CHECK(ev[1].imag() == Approx(1.0));

  const auto comp = sorted(numerics::eig_general(numerics::companion({9.0, 12.0, 1.0})));
  const auto roots = sorted(numerics::poly_roots(Polynomial{9.0, 12.0, 1.0}));
  CHECK(comp[0].real() == Approx(roots[0].real()).epsilon(1e-10));
  CHECK(comp[1].real() == Approx(roots[1].real()).epsilon(1e-10));

  CHECK_THROWS_AS(numerics::eig_general(Matrix::Zero(2, 3)), Error);
}

TEST_CASE("lyapunov_solve examples") {
  auto x = numerics::lyapunov_solve(Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 1.0));
  CHECK(x(0, 0) == Approx(0.5));
  x = numerics::lyapunov_solve(-Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  CHECK((x - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-14);

  // Companion of 5s^2 + 61s + 57 with B = e2, C = (9/5, 0): H2^2 = 27/2318.
  Matrix a(2, 2);
  a << 0, 1, -57.0 / 5.0, -61.0 / 5.0;
  Matrix b(2, 1);
  b << 0, 1;
  Matrix c(1, 2);
  c << 9.0 / 5.0, 0;
  x = numerics::lyapunov_solve(a, b * b.transpose());
  CHECK((c * x * c.transpose())(0, 0) == Approx(27.0 / 2318.0).epsilon(1e-12));

  CHECK_THROWS_WITH(numerics::lyapunov_solve(Matrix::Zero(1, 1), Matrix::Identity(1, 1)),
                    Catch::Matchers::ContainsSubstring("unstable Lyapunov operator"));
}

TEST_CASE("numerics property: Routh-Hurwitz agrees with roots on 1000 samples") {
  const auto r = testing::routh_matches_roots(101, 1000);
  INFO(r.first_failure);
  CHECK(r.ok());
}

TEST_CASE("numerics property: sym_eig reconstruction up to 20x20") {
  const auto r = testing::sym_eig_reconstruction(102);
  INFO(r.first_failure);
  CHECK(r.ok());
}

TEST_CASE("numerics property: Lyapunov residual and semidefiniteness") {
  const auto r = testing::lyapunov_residuals(103);
  INFO(r.first_failure);
  CHECK(r.ok());
}

TEST_CASE("numerics property: roots from polynomial round-trip") {
  const auto r = testing::poly_roots_roundtrip(104);
  INFO(r.first_failure);
  CHECK(r.ok());
}
