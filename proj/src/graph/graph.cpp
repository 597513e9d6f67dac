#include "agreelab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "agreelab/error.hpp"

namespace agreelab::graph {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 1) throw Error("graph must have at least one node");
  std::set<Edge> seen;
  for (const auto& [i, j] : edges_) {
    if (i < 0 || j < 0 || i >= n || j >= n) throw Error("graph edge references a node out of range");
    if (i == j) throw Error("graph edge is a self-loop");
    if (!seen.insert({std::min(i, j), std::max(i, j)}).second) throw Error("graph has a duplicate edge");
  }
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(static_cast<std::size_t>(n_), 0);
  for (const auto& [i, j] : edges_) {
    ++d[static_cast<std::size_t>(i)];
    ++d[static_cast<std::size_t>(j)];
  }
  return d;
}

std::vector<std::vector<int>> Graph::neighbours() const {
  std::vector<std::vector<int>> nb(static_cast<std::size_t>(n_));
  for (const auto& [i, j] : edges_) {
    nb[static_cast<std::size_t>(i)].push_back(j);
    nb[static_cast<std::size_t>(j)].push_back(i);
  }
  for (auto& v : nb) std::sort(v.begin(), v.end());
  return nb;
}

bool Graph::same_edges(const Graph& other) const {
  if (n_ != other.n_) return false;
  auto canon = [](const std::vector<Edge>& es) {
    std::set<Edge> s;
    for (const auto& [i, j] : es) s.insert({std::min(i, j), std::max(i, j)});
    return s;
  };
  return canon(edges_) == canon(other.edges_);
}

Matrix adjacency(const Graph& g) {
  Matrix a = Matrix::Zero(g.nodes(), g.nodes());
  for (const auto& [i, j] : g.edges()) a(i, j) = a(j, i) = 1.0;
  return a;
}

Matrix degree_matrix(const Graph& g) {
  Matrix d = Matrix::Zero(g.nodes(), g.nodes());
  const auto deg = g.degrees();
  for (int i = 0; i < g.nodes(); ++i) d(i, i) = deg[static_cast<std::size_t>(i)];
  return d;
}

Matrix laplacian(const Graph& g) { return degree_matrix(g) - adjacency(g); }

Matrix normalized_adjacency(const Graph& g) {
  const auto deg = g.degrees();
  Matrix a = adjacency(g);
  for (int i = 0; i < g.nodes(); ++i) {
    if (deg[static_cast<std::size_t>(i)] == 0)
      throw Error("normalized adjacency undefined: node " + std::to_string(i + 1) + " is isolated");
    a.row(i) /= deg[static_cast<std::size_t>(i)];
  }
  return a;
}

bool is_connected(const Graph& g) {
  const auto nb = g.neighbours();
  std::vector<bool> seen(static_cast<std::size_t>(g.nodes()), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : nb[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        ++count;
        q.push(w);
      }
    }
  }
  return count == g.nodes();
}

bool is_bipartite(const Graph& g) {
  const auto nb = g.neighbours();
  std::vector<int> colour(static_cast<std::size_t>(g.nodes()), -1);
  for (int s = 0; s < g.nodes(); ++s) {
    if (colour[static_cast<std::size_t>(s)] >= 0) continue;
    colour[static_cast<std::size_t>(s)] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : nb[static_cast<std::size_t>(v)]) {
        auto& cw = colour[static_cast<std::size_t>(w)];
        if (cw < 0) {
          cw = 1 - colour[static_cast<std::size_t>(v)];
          q.push(w);
        } else if (cw == colour[static_cast<std::size_t>(v)]) {
          return false;
        }
      }
    }
  }
  return true;
}

namespace {

Matrix symmetric_normalized(const Graph& g) {
  const auto deg = g.degrees();
  Matrix s = adjacency(g);
  for (int i = 0; i < g.nodes(); ++i)
    for (int j = 0; j < g.nodes(); ++j)
      if (s(i, j) != 0.0)
        s(i, j) /= std::sqrt(static_cast<double>(deg[static_cast<std::size_t>(i)]) *
                             deg[static_cast<std::size_t>(j)]);
  return s;
}

}  // namespace

std::vector<double> normalized_spectrum(const Graph& g) {
  normalized_adjacency(g);  // rejects isolated nodes
  return numerics::sym_eig(symmetric_normalized(g)).values;
}

ModalData modal_transform(const Graph& g) {
  if (g.nodes() < 2 || !is_connected(g)) throw Error("modal_transform: graph is not connected");
  const int n = g.nodes();
  const auto deg = g.degrees();
  const double trace = std::accumulate(deg.begin(), deg.end(), 0.0);

  auto eig = numerics::sym_eig(symmetric_normalized(g));
  if (std::abs(eig.values[0] - 1.0) > 1e-9 || eig.values[1] > 1.0 - 1e-9)
    throw Error("modal_transform: eigenvalue 1 is not simple");

  Vector sqrt_d(n);
  for (int i = 0; i < n; ++i) sqrt_d[i] = std::sqrt(static_cast<double>(deg[static_cast<std::size_t>(i)]));

  ModalData out;
  out.alphas = eig.values;
  out.alphas[0] = 1.0;
  Matrix v = eig.vectors;
  v.col(0) = sqrt_d / std::sqrt(trace);

  out.u = v.transpose() * sqrt_d.asDiagonal();
  out.u_inv = sqrt_d.cwiseInverse().asDiagonal() * v;
  for (int i = 0; i < n; ++i) {
    out.u(0, i) = deg[static_cast<std::size_t>(i)] / trace;
    out.u_inv(i, 0) = 1.0;
  }
  out.gamma = sqrt_d.cwiseProduct(sqrt_d) / std::sqrt(trace);
  return out;
}

Graph relabel_by_degree(const Graph& g) {
  const auto deg = g.degrees();
  std::vector<int> order(static_cast<std::size_t>(g.nodes()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return deg[static_cast<std::size_t>(a)] > deg[static_cast<std::size_t>(b)];
  });
  std::vector<int> new_index(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_index[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
  std::vector<Graph::Edge> edges;
  for (const auto& [i, j] : g.edges()) {
    const int a = new_index[static_cast<std::size_t>(i)], b = new_index[static_cast<std::size_t>(j)];
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges.begin(), edges.end());
  return Graph(g.nodes(), std::move(edges));
}

std::vector<bool> canonical_form(const Graph& g) {
  const int n = g.nodes();
  const Matrix a = adjacency(g);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<bool> best;
  do {
    std::vector<bool> bits;
    bits.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        bits.push_back(a(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) != 0.0);
    if (best.empty() || bits < best) best = std::move(bits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Graph read_graph(std::istream& in) {
  std::string line;
  int n = -1;
  std::vector<Graph::Edge> edges;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    const std::string where = "graph line " + std::to_string(lineno);
    if (tag == "n") {
      if (n >= 0) throw Error(where + ": duplicate node count");
      if (!(ls >> n) || n < 1) throw Error(where + ": bad node count");
    } else if (tag == "e") {
      if (n < 0) throw Error(where + ": edge before node count");
      int i = 0, j = 0;
      if (!(ls >> i >> j)) throw Error(where + ": malformed edge");
      edges.emplace_back(i - 1, j - 1);
    } else {
      throw Error(where + ": unknown record '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) throw Error(where + ": trailing text");
  }
  if (n < 0) throw Error("graph: missing node count");
  return Graph(n, std::move(edges));
}

Graph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read graph file " + path.string());
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << "n " << g.nodes() << '\n';
  for (const auto& [i, j] : g.edges()) out << "e " << i + 1 << ' ' << j + 1 << '\n';
}

std::string to_text(const Graph& g) {
  std::ostringstream os;
  write_graph(os, g);
  return os.str();
}

}  // namespace agreelab::graph
