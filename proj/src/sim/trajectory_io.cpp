#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "agreelab/error.hpp"
#include "agreelab/sim.hpp"

namespace agreelab::sim {

void write_csv(std::ostream& out, const Trajectory& traj) {
  out << 't';
  for (Eigen::Index i = 0; i < traj.channels(); ++i) out << ",y" << i + 1;
  out << '\n' << std::setprecision(17);
  for (Eigen::Index k = 0; k < traj.samples(); ++k) {
    out << traj.times[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < traj.channels(); ++i) out << ',' << traj.outputs(k, i);
    out << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

double parse_number(const std::string& s, int lineno) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw Error("csv line " + std::to_string(lineno) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

Trajectory read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("csv: missing header");
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "t") throw Error("csv: header must be t,y1,...,yN");
  for (std::size_t i = 1; i < header.size(); ++i)
    if (header[i] != "y" + std::to_string(i)) throw Error("csv: header must be t,y1,...,yN");
  const Eigen::Index nu = static_cast<Eigen::Index>(header.size() - 1);

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (static_cast<Eigen::Index>(cells.size()) != nu + 1)
      throw Error("csv line " + std::to_string(lineno) + ": wrong column count");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number(c, lineno));
    rows.push_back(std::move(row));
  }

  Trajectory out;
  out.outputs.resize(static_cast<Eigen::Index>(rows.size()), nu);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.times.push_back(rows[k][0]);
    for (Eigen::Index i = 0; i < nu; ++i) out.outputs(static_cast<Eigen::Index>(k), i) = rows[k][static_cast<std::size_t>(i + 1)];
  }
  if (rows.size() >= 2) {
    out.dt = out.times[1] - out.times[0];
    for (std::size_t k = 1; k < out.times.size(); ++k)
      if (std::abs(out.times[k] - out.times[0] - static_cast<double>(k) * out.dt) > 1e-9 * std::max(1.0, out.times[k]))
        throw Error("csv: time grid is not uniform");
  }
  return out;
}

}  // namespace agreelab::sim
