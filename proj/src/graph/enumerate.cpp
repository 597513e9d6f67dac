#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <thread>

#include "agreelab/error.hpp"
#include "agreelab/graph.hpp"

namespace agreelab::graph {

namespace {

struct Pair {
  int i, j;
};

bool mask_connected(int n, const std::vector<std::uint32_t>& nb) {
  std::uint32_t seen = 1u, frontier = 1u;
  while (frontier) {
    std::uint32_t next = 0;
    for (int v = 0; v < n; ++v)
      if (frontier & (1u << v)) next |= nb[static_cast<std::size_t>(v)];
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == (1u << n) - 1u;
}

using Found = std::map<std::vector<bool>, Graph>;

Found scan(int n, const std::vector<Pair>& pairs, const std::vector<double>& target, double tol,
           std::uint64_t begin, std::uint64_t end) {
  double target_sq = 0.0;
  for (double a : target) target_sq += a * a;
  // |sum a^2 - sum b^2| <= sum |a-b||a+b| <= 2 n tol for spectra in [-1,1]
  const double sq_slack = 2.0 * n * tol + 1e-12;

  Found found;
  std::vector<int> deg(static_cast<std::size_t>(n));
  std::vector<std::uint32_t> nb(static_cast<std::size_t>(n));
  for (std::uint64_t mask = begin; mask < end; ++mask) {
    std::fill(deg.begin(), deg.end(), 0);
    std::fill(nb.begin(), nb.end(), 0u);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (!(mask >> k & 1u)) continue;
      const auto [i, j] = pairs[k];
      ++deg[static_cast<std::size_t>(i)];
      ++deg[static_cast<std::size_t>(j)];
      nb[static_cast<std::size_t>(i)] |= 1u << j;
      nb[static_cast<std::size_t>(j)] |= 1u << i;
    }
    if (std::find(deg.begin(), deg.end(), 0) != deg.end()) continue;

    // trace(Adjn^2) = sum over edges of 2 / (d_i d_j)
    double trace_sq = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (mask >> k & 1u)
        trace_sq += 2.0 / (deg[static_cast<std::size_t>(pairs[k].i)] * deg[static_cast<std::size_t>(pairs[k].j)]);
    if (std::abs(trace_sq - target_sq) > sq_slack) continue;
    if (!mask_connected(n, nb)) continue;

    std::vector<Graph::Edge> edges;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (mask >> k & 1u) edges.emplace_back(pairs[k].i, pairs[k].j);
    Graph g(n, std::move(edges));
    const auto spec = normalized_spectrum(g);
    bool match = true;
    for (int k = 0; k < n && match; ++k)
      match = std::abs(spec[static_cast<std::size_t>(k)] - target[static_cast<std::size_t>(k)]) <= tol;
    if (!match) continue;
    auto key = canonical_form(g);
    if (!found.count(key)) found.emplace(std::move(key), relabel_by_degree(g));
  }
  return found;
}

}  // namespace

std::vector<Graph> find_graphs_by_spectrum(int n, std::vector<double> target, double tol) {
  if (n < 1 || n > 8) throw Error("find_graphs_by_spectrum: n must be in 1..8");
  if (static_cast<int>(target.size()) != n) return {};
  std::sort(target.begin(), target.end(), std::greater<>());
  if (n == 1) return {};  // a lone node has no normalized adjacency

  std::vector<Pair> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  const std::uint64_t total = std::uint64_t{1} << pairs.size();

  const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
  std::vector<std::future<Found>> parts;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = total * w / workers, hi = total * (w + 1) / workers;
    parts.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, scan, n,
                               std::cref(pairs), std::cref(target), tol, lo, hi));
  }
  // Shards cover increasing mask ranges, so keeping the first hit per class
  // gives the same representative for any worker count.
  Found merged;
  for (auto& part : parts)
    for (auto& [key, g] : part.get()) merged.emplace(key, std::move(g));

  std::vector<Graph> out;
  for (auto& [key, g] : merged) out.push_back(std::move(g));
  return out;
}

}  // namespace agreelab::graph
