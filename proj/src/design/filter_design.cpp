#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "agreelab/design.hpp"
#include "agreelab/error.hpp"

namespace agreelab::design {

namespace {

void check_params(const FilterParams& p) {
  if (!(p.omega_n > 0.0) || !(p.tau > 0.0) || !(p.zeta > 0.0))
    throw Error("filter parameters must be strictly positive");
}

Polynomial drift_quadratic(const FilterParams& p) {
  const double w = p.omega_n;
  return Polynomial{p.tau * w * w + 2.0 * p.zeta * w, 2.0 * p.zeta * w * p.tau + 1.0, p.tau};
}

bool agreement_mode_ok(const FilterParams& p) {
  const Polynomial cubic = mode_denominator(p, 1.0);
  if (cubic[0] != 0.0) return false;
  return numerics::routh_hurwitz_stable(drift_quadratic(p));
}

}  // namespace

RationalTF make_filter(const FilterParams& p) {
  check_params(p);
  const double w = p.omega_n;
  const Polynomial den = numerics::poly_mul(Polynomial{1.0, p.tau}, Polynomial{w * w, 2.0 * p.zeta * w, 1.0});
  return RationalTF(Polynomial{w * w}, den);
}

Polynomial mode_denominator(const FilterParams& p, double alpha) {
  check_params(p);
  const double w = p.omega_n;
  return Polynomial{w * w * (1.0 - alpha), p.tau * w * w + 2.0 * p.zeta * w, 2.0 * p.zeta * w * p.tau + 1.0, p.tau};
}

bool feasible(const FilterParams& p, std::span<const double> alphas) {
  check_params(p);
  for (double a : alphas)
    if (a < 1.0 - 1e-9 && !numerics::routh_hurwitz_stable(mode_denominator(p, a))) return false;
  return agreement_mode_ok(p);
}

bool feasible_worst_case(const FilterParams& p) {
  constexpr std::array<double, 1> worst{-1.0};
  return feasible(p, worst);
}

RationalTF drift_transfer(const FilterParams& p) {
  check_params(p);
  return RationalTF(Polynomial{p.omega_n * p.omega_n}, drift_quadratic(p));
}

double h2_drift(const FilterParams& p) {
  check_params(p);
  if (!agreement_mode_ok(p)) throw Error("H2 undefined: agreement-mode quadratic is not Hurwitz");
  const double w = p.omega_n;
  return w * w * w / ((2.0 * w * p.tau + 4.0 * p.zeta) * (2.0 * w * p.tau * p.zeta + 1.0));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Problem {
  std::array<double, 3> lo, hi;  // log coordinates
  std::span<const double> alphas;

  FilterParams at(const std::array<double, 3>& x) const {
    return {std::exp(x[0]), std::exp(x[1]), std::exp(x[2])};
  }
  std::array<double, 3> clamp(std::array<double, 3> x) const {
    for (int k = 0; k < 3; ++k) x[k] = std::clamp(x[k], lo[k], hi[k]);
    return x;
  }
  double cost(const std::array<double, 3>& x) const {
    const FilterParams p = at(x);
    const bool ok = alphas.empty() ? feasible_worst_case(p) : feasible(p, alphas);
    return ok ? h2_drift(p) : kInf;
  }
};

std::vector<double> axis(double lo, double hi, int points) {
  if (lo == hi) return {std::log(lo)};
  std::vector<double> out;
  for (int k = 0; k < points; ++k) {
    const double f = static_cast<double>(k) / (points - 1);
    out.push_back(k == points - 1 ? std::log(hi) : std::log(lo) + f * (std::log(hi) - std::log(lo)));
  }
  return out;
}

using Point = std::array<double, 3>;

Point nelder_mead(const Problem& prob, Point start, double& best_cost) {
  std::array<Point, 4> s;
  std::array<double, 4> f;
  s[0] = start;
  for (int k = 0; k < 3; ++k) {
    Point v = start;
    const double range = prob.hi[k] - prob.lo[k];
    const double step = 0.05 * range;
    v[k] = v[k] + step <= prob.hi[k] ? v[k] + step : v[k] - step;
    s[static_cast<std::size_t>(k + 1)] = prob.clamp(v);
  }
  for (std::size_t k = 0; k < 4; ++k) f[k] = prob.cost(s[k]);

  auto combine = [&](const Point& a, const Point& b, double t) {
    Point out;
    for (int k = 0; k < 3; ++k) out[k] = a[k] + t * (b[k] - a[k]);
    return prob.clamp(out);
  };

  for (int iter = 0; iter < 600; ++iter) {
    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    std::array<Point, 4> s2;
    std::array<double, 4> f2;
    for (std::size_t k = 0; k < 4; ++k) {
      s2[k] = s[order[k]];
      f2[k] = f[order[k]];
    }
    s = s2;
    f = f2;

    double size = 0.0;
    for (std::size_t k = 1; k < 4; ++k)
      for (int j = 0; j < 3; ++j) size = std::max(size, std::abs(s[k][j] - s[0][j]));
    if (size < 1e-10) break;

    Point centroid{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) centroid[j] += s[k][j] / 3.0;

    const Point xr = combine(centroid, s[3], -1.0);
    const double fr = prob.cost(xr);
    if (fr < f[0]) {
      const Point xe = combine(centroid, s[3], -2.0);
      const double fe = prob.cost(xe);
      if (fe < fr) {
        s[3] = xe;
        f[3] = fe;
      } else {
        s[3] = xr;
        f[3] = fr;
      }
    } else if (fr < f[2]) {
      s[3] = xr;
      f[3] = fr;
    } else {
      const bool outside = fr < f[3];
      const Point xc = combine(centroid, outside ? xr : s[3], 0.5);
      const double fc = prob.cost(xc);
      if (fc < (outside ? fr : f[3])) {
        s[3] = xc;
        f[3] = fc;
      } else {
        for (std::size_t k = 1; k < 4; ++k) {
          s[k] = combine(s[0], s[k], 0.5);
          f[k] = prob.cost(s[k]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < 4; ++k)
    if (f[k] < f[best]) best = k;
  best_cost = f[best];
  return s[best];
}

}  // namespace

DesignResult design_filter(const DesignBounds& bounds, std::span<const double> alphas, int grid_points) {
  const std::array<Interval, 3> box{bounds.omega_n, bounds.tau, bounds.zeta};
  for (const auto& iv : box)
    if (!(iv.lo > 0.0) || !(iv.hi >= iv.lo)) throw Error("design bounds must satisfy 0 < lo <= hi");
  if (grid_points < 2) throw Error("design grid needs at least two points per axis");

  Problem prob;
  for (int k = 0; k < 3; ++k) {
    prob.lo[k] = std::log(box[static_cast<std::size_t>(k)].lo);
    prob.hi[k] = std::log(box[static_cast<std::size_t>(k)].hi);
  }
  prob.alphas = alphas;

  // Grid scan in lexicographic order; strict improvement keeps the first of
  // any tie.
  const auto g0 = axis(box[0].lo, box[0].hi, grid_points);
  const auto g1 = axis(box[1].lo, box[1].hi, grid_points);
  const auto g2 = axis(box[2].lo, box[2].hi, grid_points);
  Point best{};
  double best_cost = kInf;
  for (double a : g0)
    for (double b : g1)
      for (double c : g2) {
        const Point x{a, b, c};
        const double f = prob.cost(x);
        if (f < best_cost) {
          best_cost = f;
          best = x;
        }
      }
  if (best_cost == kInf) throw InfeasibleError("no feasible filter parameters inside the design bounds");

  double refined_cost = kInf;
  const Point refined = nelder_mead(prob, best, refined_cost);
  if (refined_cost < best_cost) {
    best = refined;
    best_cost = refined_cost;
  }
  // Points on a face of the box come back exactly as given.
  std::array<double, 3> v;
  for (std::size_t k = 0; k < 3; ++k) {
    v[k] = std::exp(best[k]);
    if (best[k] == prob.lo[k]) v[k] = box[k].lo;
    if (best[k] == prob.hi[k]) v[k] = box[k].hi;
  }
  const FilterParams p{v[0], v[1], v[2]};
  return {p, h2_drift(p)};
}

}  // namespace agreelab::design
