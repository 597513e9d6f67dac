#include <algorithm>
#include <cmath>

#include "agreelab/error.hpp"
#include "agreelab/polynomial.hpp"

namespace agreelab::numerics {

namespace {

double row_scale(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (double x : a) s = std::max(s, std::abs(x));
  for (double x : b) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

RouthTable routh_table(const Polynomial& p) {
  if (p.is_zero() || p.degree() < 1) throw Error("routh_table: degree must be at least 1");
  const int n = p.degree();
  const double sign = p.leading() < 0.0 ? -1.0 : 1.0;
  const std::size_t width = static_cast<std::size_t>(n / 2 + 1);

  // Rows are stored with trailing zero padding; entry j of row r corresponds
  // to the coefficient of s^(n - r - 2j).
  std::vector<double> prev(width, 0.0), cur(width, 0.0);
  for (int j = 0; 2 * j <= n; ++j) prev[static_cast<std::size_t>(j)] = sign * p[n - 2 * j];
  for (int j = 0; 2 * j + 1 <= n; ++j) cur[static_cast<std::size_t>(j)] = sign * p[n - 2 * j - 1];

  RouthTable out;
  out.first_column.push_back(prev[0]);
  const double coeff_scale = p.max_abs_coeff();

  for (int r = 1; r <= n; ++r) {
    const double scale = std::max(row_scale(prev, cur), coeff_scale * 1e-300);
    const double zero_tol = 1e-13 * scale;
    const bool all_zero =
        std::all_of(cur.begin(), cur.end(), [&](double x) { return std::abs(x) <= zero_tol; });
    if (all_zero) {
      out.zero_row = true;
      break;
    }
    if (std::abs(cur[0]) <= zero_tol) {
      cur[0] = 1e-10 * scale;
      out.epsilon_used = true;
    }
    out.first_column.push_back(cur[0]);
    if (r == n) break;

    std::vector<double> next(width, 0.0);
    for (std::size_t j = 0; j + 1 < width; ++j)
      next[j] = (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0];
    prev = std::move(cur);
    cur = std::move(next);
  }

  for (std::size_t i = 1; i < out.first_column.size(); ++i)
    if ((out.first_column[i] > 0.0) != (out.first_column[i - 1] > 0.0)) ++out.sign_changes;
  return out;
}

bool routh_hurwitz_stable(const Polynomial& p) {
  const RouthTable t = routh_table(p);
  if (t.zero_row || t.epsilon_used) return false;
  return std::all_of(t.first_column.begin(), t.first_column.end(), [](double x) { return x > 0.0; });
}

}  // namespace agreelab::numerics
