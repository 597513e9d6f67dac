#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "agreelab/linalg.hpp"
#include "agreelab/sim.hpp"
#include "agreelab/state_space.hpp"

namespace agreelab::testing {

using lti::Complex;
using lti::RationalTF;
using numerics::Matrix;
using numerics::Polynomial;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double log_uniform(Rng& rng, double lo, double hi) { return std::exp(uniform(rng, std::log(lo), std::log(hi))); }

graph::Graph random_connected_graph(Rng& rng, int n) {
  std::bernoulli_distribution coin(0.5);
  for (;;) {
    std::vector<graph::Graph::Edge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(rng)) edges.emplace_back(i, j);
    graph::Graph g(n, std::move(edges));
    if (graph::is_connected(g)) return g;
  }
}

Polynomial random_root_poly(Rng& rng, int degree, double re_lo, double re_hi) {
  std::vector<Complex> roots;
  while (static_cast<int>(roots.size()) < degree) {
    const double re = uniform(rng, re_lo, re_hi);
    if (degree - static_cast<int>(roots.size()) >= 2 && uniform(rng, 0.0, 1.0) < 0.5) {
      const double im = uniform(rng, 0.2, 3.0);
      roots.emplace_back(re, im);
      roots.emplace_back(re, -im);
    } else {
      roots.emplace_back(re, 0.0);
    }
  }
  return Polynomial::from_roots(roots);
}

RationalTF random_stable_tf(Rng& rng, int degree, bool strict) {
  const Polynomial den = random_root_poly(rng, degree, -3.0, -0.3);
  const int num_deg = strict ? degree - 1 : degree;
  std::vector<double> num;
  for (int k = 0; k <= num_deg; ++k) num.push_back(uniform(rng, -2.0, 2.0));
  if (num_deg >= 0 && std::abs(num.back()) < 0.1) num.back() = 1.0;
  if (num.empty()) num.push_back(0.0);
  return RationalTF(Polynomial(num), den);
}

double h2_quadrature(const RationalTF& g) {
  auto f = [&](double w) { return std::norm(g(Complex(0.0, w))); };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-13, &err);
  return v / std::numbers::pi;
}

protocol::AgentModel random_first_order_agent(Rng& rng) {
  const double p = uniform(rng, 0.5, 1.5), b = uniform(rng, 2.0, 4.0), c = uniform(rng, 3.0, 6.0);
  return {RationalTF::from_coeffs({1.0}, {0.0, 1.0}), RationalTF::from_coeffs({-c, -b}, {p, 1.0})};
}

FilterPool network_filter_pool() {
  FilterPool pool;
  auto add = [&](RationalTF f, std::string name) {
    pool.filters.push_back(std::move(f));
    pool.names.push_back(std::move(name));
  };
  add(RationalTF::from_coeffs({2.0}, {2.0, 1.0}), "2/(s+2)");
  add(RationalTF::from_coeffs({5.0}, {5.0, 1.0}), "5/(s+5)");
  add(RationalTF::from_coeffs({9.0}, {9.0, 4.2, 1.0}), "9/(s^2+4.2s+9)");
  pool.feasible_count = pool.filters.size();
  add(RationalTF::from_coeffs({2.0}, {1.0, 1.0}), "2/(s+1)");
  add(RationalTF::from_coeffs({3.0}, {2.0, 1.0}), "3/(s+2)");
  // (1 s + 1)(s^2 + 0.12 s + 9): modes with alpha < -0.1349 are unstable.
  add(RationalTF(Polynomial{9.0}, numerics::poly_mul(Polynomial{1.0, 1.0}, Polynomial{9.0, 0.12, 1.0})),
      "9/((s+1)(s^2+0.12s+9))");
  return pool;
}

double rel_diff(const numerics::CMatrix& a, const numerics::CMatrix& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

namespace {

struct Tally {
  PropertyResult r;
  explicit Tally(std::string name) { r.name = std::move(name); }
  void check(bool ok, const std::string& what) {
    ++r.cases;
    if (!ok) {
      if (r.failures == 0) r.first_failure = what;
      ++r.failures;
    }
  }
};

std::string describe(const Polynomial& p) {
  std::ostringstream os;
  os.precision(17);
  for (double c : p.coeffs()) os << c << ' ';
  return os.str();
}

}  // namespace

PropertyResult routh_matches_roots(std::uint64_t seed, int samples) {
  Tally t("routh-hurwitz agrees with root real parts");
  Rng rng(seed);
  while (t.r.cases < samples) {
    const int degree = 1 + static_cast<int>(rng() % 6);
    Polynomial p;
    if (rng() % 2) {
      p = random_root_poly(rng, degree, -3.0, 0.8) * uniform(rng, 0.2, 5.0);
    } else {
      std::vector<double> c;
      for (int k = 0; k <= degree; ++k) c.push_back(uniform(rng, 0.05, 5.0));
      p = Polynomial(c);
    }
    double max_re = -std::numeric_limits<double>::infinity();
    for (Complex r : numerics::poly_roots(p)) max_re = std::max(max_re, r.real());
    if (std::abs(max_re) < 1e-6) continue;  // boundary case, sign ambiguous
    t.check(numerics::routh_hurwitz_stable(p) == (max_re < 0.0), describe(p));
  }
  return t.r;
}

PropertyResult poly_roots_roundtrip(std::uint64_t seed, int samples) {
  Tally t("poly_roots recovers well-separated roots");
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const int degree = 1 + static_cast<int>(rng() % 6);
    std::vector<Complex> roots;
    // Separated grid: real parts on distinct slots, jittered.
    std::vector<int> slots{0, 1, 2, 3, 4, 5};
    std::shuffle(slots.begin(), slots.end(), rng);
    int k = 0;
    while (static_cast<int>(roots.size()) < degree) {
      const double re = -3.0 + slots[static_cast<std::size_t>(k++)] + uniform(rng, -0.2, 0.2);
      if (degree - static_cast<int>(roots.size()) >= 2 && rng() % 2) {
        const double im = uniform(rng, 0.5, 2.0);
        roots.emplace_back(re, im);
        roots.emplace_back(re, -im);
      } else {
        roots.emplace_back(re, 0.0);
      }
    }
    const auto found = numerics::poly_roots(Polynomial::from_roots(roots));
    bool ok = found.size() == roots.size();
    std::vector<bool> used(found.size(), false);
    for (Complex r : roots) {
      bool hit = false;
      for (std::size_t j = 0; j < found.size() && !hit; ++j)
        if (!used[j] && std::abs(found[j] - r) <= 1e-7) used[j] = hit = true;
      ok = ok && hit;
    }
    t.check(ok, "degree " + std::to_string(degree));
  }
  return t.r;
}

PropertyResult sym_eig_reconstruction(std::uint64_t seed, int samples) {
  Tally t("sym_eig reconstruction and orthogonality");
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const int n = 1 + static_cast<int>(rng() % 20);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = uniform(rng, -1.0, 1.0);
    const Matrix sym = 0.5 * (m + m.transpose());
    const auto e = numerics::sym_eig(sym);
    Matrix lambda = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) lambda(i, i) = e.values[static_cast<std::size_t>(i)];
    const double recon = (e.vectors.transpose() * sym * e.vectors - lambda).norm();
    const double orth = (e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).norm();
    const bool sorted = std::is_sorted(e.values.rbegin(), e.values.rend());
    t.check(recon <= 1e-9 && orth <= 1e-10 && sorted, "n=" + std::to_string(n));
  }
  return t.r;
}

PropertyResult lyapunov_residuals(std::uint64_t seed, int samples) {
  Tally t("lyapunov residual, symmetry, semidefiniteness");
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const int n = 1 + static_cast<int>(rng() % 12);
    Matrix a(n, n), m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        a(i, j) = uniform(rng, -1.0, 1.0);
        m(i, j) = uniform(rng, -1.0, 1.0);
      }
    a -= (numerics::spectral_abscissa(a) + uniform(rng, 0.1, 1.0)) * Matrix::Identity(n, n);
    const Matrix q = m * m.transpose();
    const Matrix x = numerics::lyapunov_solve(a, q);
    const double resid = (a * x + x * a.transpose() + q).norm();
    const double asym = (x - x.transpose()).norm();
    const auto eig = numerics::sym_eig(0.5 * (x + x.transpose()));
    bool ok = resid <= 1e-9 * q.norm() && asym <= 1e-9 * x.norm() && eig.values.back() >= -1e-9 * x.norm();
    if (n <= 6) ok = ok && (x - numerics::lyapunov_solve_kronecker(a, q)).norm() <= 1e-8 * x.norm();
    t.check(ok, "n=" + std::to_string(n));
  }
  return t.r;
}

PropertyResult realization_roundtrip(std::uint64_t seed, int samples) {
  Tally t("tf_to_ss reproduces the transfer function");
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const int degree = 1 + static_cast<int>(rng() % 6);
    const RationalTF g = random_stable_tf(rng, degree, rng() % 2 == 0);
    const auto ss = lti::tf_to_ss(g);
    bool ok = true;
    for (int k = 0; k < 10; ++k) {
      const Complex s_pt(0.0, log_uniform(rng, 1e-2, 1e2));
      const Complex want = g(s_pt);
      const Complex got = ss.evaluate(s_pt)(0, 0);
      ok = ok && std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want));
    }
    t.check(ok, "degree " + std::to_string(degree));
  }
  return t.r;
}

PropertyResult feedback_identity(std::uint64_t seed, int samples) {
  Tally t("(1 - p f) S == 1");
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const RationalTF p = random_stable_tf(rng, 1 + static_cast<int>(rng() % 3), true);
    const RationalTF f = random_stable_tf(rng, 1 + static_cast<int>(rng() % 3), false);
    const auto loop = lti::tf_feedback(p, f);
    // (1 - p f) S = (dp df - np nf) S.num / (dp df S.den)
    const Polynomial lhs = (p.den() * f.den() - p.num() * f.num()) * loop.sensitivity.num();
    const Polynomial rhs = p.den() * f.den() * loop.sensitivity.den();
    const Polynomial td = loop.disturbance.num() * loop.sensitivity.den();
    const Polynomial sp = loop.sensitivity.num() * p.num() * loop.disturbance.den();
    t.check(numerics::approx_equal(lhs, rhs) &&
                numerics::approx_equal(td * p.den(), sp),
            "feedback identity");
  }
  return t.r;
}

PropertyResult h2_matches_quadrature(std::uint64_t seed, int samples) {
  Tally t("h2_norm_sq matches frequency quadrature");
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const RationalTF g = random_stable_tf(rng, 1 + static_cast<int>(rng() % 5), true);
    const double lyap = lti::h2_norm_sq(g);
    const double quad = h2_quadrature(g);
    t.check(lyap >= 0.0 && std::abs(lyap - quad) <= 1e-6 * std::max(quad, 1e-12), "sample " + std::to_string(s));
  }
  return t.r;
}

PropertyResult integrator_order(double* slope_out) {
  Tally t("fourth-order convergence on y' = -y");
  protocol::ClosedLoop loop;
  loop.agents = 1;
  loop.dynamics = lti::StateSpace(Matrix::Constant(1, 1, -1.0), Matrix::Zero(1, 2), Matrix::Constant(1, 1, 1.0),
                                  Matrix::Zero(1, 2));
  loop.initial_state_map = Matrix::Constant(1, 1, 1.0);
  const double dts[] = {1e-2, 5e-3, 2.5e-3};
  std::vector<double> lx, ly;
  for (double dt : dts) {
    const auto tr = sim::integrate(loop, {}, {}, numerics::Vector::Constant(1, 1.0), {dt, 1.0, 1});
    lx.push_back(std::log(dt));
    ly.push_back(std::log(std::abs(tr.outputs(tr.samples() - 1, 0) - std::exp(-1.0))));
  }
  const double mx = (lx[0] + lx[1] + lx[2]) / 3.0, my = (ly[0] + ly[1] + ly[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int k = 0; k < 3; ++k) {
    sxy += (lx[static_cast<std::size_t>(k)] - mx) * (ly[static_cast<std::size_t>(k)] - my);
    sxx += (lx[static_cast<std::size_t>(k)] - mx) * (lx[static_cast<std::size_t>(k)] - mx);
  }
  const double slope = sxy / sxx;
  if (slope_out) *slope_out = slope;
  t.check(std::abs(slope - 4.0) <= 0.3, "slope " + std::to_string(slope));
  return t.r;
}

std::vector<PropertyResult> numerics_suite(std::uint64_t seed) {
  return {routh_matches_roots(seed),          poly_roots_roundtrip(seed + 1), sym_eig_reconstruction(seed + 2),
          lyapunov_residuals(seed + 3),       realization_roundtrip(seed + 4), feedback_identity(seed + 5),
          h2_matches_quadrature(seed + 6),    integrator_order()};
}

}  // namespace agreelab::testing
