#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "agreelab/linalg.hpp"

namespace agreelab::graph {

using numerics::Matrix;
using numerics::Vector;

/// Simple undirected graph. Nodes are 0-based in memory and 1-based in the
/// text format. Edge order and orientation are kept as given so the text
/// form round-trips exactly.
class Graph {
 public:
  using Edge = std::pair<int, int>;

  Graph() = default;
  /// Throws on self-loops, duplicate edges, or out-of-range nodes.
  Graph(int n, std::vector<Edge> edges);

  int nodes() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<int> degrees() const;
  std::vector<std::vector<int>> neighbours() const;

  /// Same node count and edge set, order and orientation ignored.
  bool same_edges(const Graph& other) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

Matrix adjacency(const Graph& g);
Matrix degree_matrix(const Graph& g);
Matrix laplacian(const Graph& g);
/// D^-1 A. Throws if any node is isolated.
Matrix normalized_adjacency(const Graph& g);

bool is_connected(const Graph& g);
bool is_bipartite(const Graph& g);

/// Spectral data of the normalized adjacency.
///
/// alphas[0] == 1 exactly; the rest descend. U Adjn U^-1 = diag(alphas) with
/// the first row of U equal to 1'D / trace(D), so U^-1 e1 is the all-ones
/// vector. Remaining rows are V' D^(1/2) for the orthonormal eigenvectors V of
/// D^-1/2 A D^-1/2 (first nonzero entry positive). gamma = 1'D / sqrt(trace D).
struct ModalData {
  std::vector<double> alphas;
  Matrix u;
  Matrix u_inv;
  Vector gamma;
};
/// Throws on a disconnected graph.
ModalData modal_transform(const Graph& g);

/// Sorted (descending) spectrum of D^-1 A.
std::vector<double> normalized_spectrum(const Graph& g);

/// Relabels nodes by descending degree (stable in the original index).
Graph relabel_by_degree(const Graph& g);

/// Lexicographically smallest upper-triangle adjacency bit string over all
/// node permutations; equal iff isomorphic. Intended for n <= 8.
std::vector<bool> canonical_form(const Graph& g);

/// Every connected graph on n nodes (one per isomorphism class) whose
/// normalized-adjacency spectrum matches `target` within `tol` per sorted
/// eigenvalue. Exhaustive over edge subsets; requires n <= 8. Representatives
/// are relabelled by descending degree.
std::vector<Graph> find_graphs_by_spectrum(int n, std::vector<double> target, double tol);

/// "n <count>" then one "e <i> <j>" line per edge, 1-indexed.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::filesystem::path& path);
void write_graph(std::ostream& out, const Graph& g);
std::string to_text(const Graph& g);

}  // namespace agreelab::graph
