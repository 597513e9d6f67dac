#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "agreelab/error.hpp"
#include "agreelab/graph.hpp"
#include "agreelab/linalg.hpp"
#include "properties.hpp"

using namespace agreelab;
using graph::Graph;
using numerics::Matrix;
using Catch::Approx;

namespace {

Graph dart() { return Graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}}); }
Graph triangle() { return Graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

// Characteristic roots of D^-1 A for the dart, from
// det(lambda I - Adjn) = lambda (lambda - 1)(lambda + 1/2)(lambda^2 + lambda/2 - 1/6).
std::vector<double> dart_spectrum() {
  const double r = std::sqrt(0.25 + 4.0 / 6.0);
  return {1.0, -0.25 + r / 2.0, 0.0, -0.5, -0.25 - r / 2.0};
}

void check_modal_invariants(const Graph& g) {
  const auto m = graph::modal_transform(g);
  const int n = g.nodes();
  const Matrix adjn = graph::normalized_adjacency(g);
  Matrix diag = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) diag(i, i) = m.alphas[static_cast<std::size_t>(i)];
  CHECK((m.u * adjn * m.u_inv - diag).norm() < 1e-10);
  CHECK((m.u * m.u_inv - Matrix::Identity(n, n)).norm() < 1e-10);
  CHECK(m.alphas[0] == 1.0);
  for (int i = 0; i < n; ++i) CHECK(m.u_inv(i, 0) == Approx(1.0).margin(1e-12));

  const auto d = g.degrees();
  double tr = 0.0;
  for (int v : d) tr += v;
  for (int j = 0; j < n; ++j) CHECK(m.u(0, j) == Approx(d[static_cast<std::size_t>(j)] / tr).margin(1e-12));

  // diag(sqrt(tr D), 1, ..., 1) U D^-1/2 is orthogonal.
  Matrix scaled = m.u;
  scaled.row(0) *= std::sqrt(tr);
  for (int j = 0; j < n; ++j) scaled.col(j) /= std::sqrt(static_cast<double>(d[static_cast<std::size_t>(j)]));
  CHECK((scaled * scaled.transpose() - Matrix::Identity(n, n)).norm() < 1e-10);

  for (int j = 0; j < n; ++j) CHECK(m.gamma(j) == Approx(d[static_cast<std::size_t>(j)] / std::sqrt(tr)).margin(1e-12));
}

}  // namespace

TEST_CASE("graph construction rejects malformed edge lists") {
  CHECK_THROWS_AS(Graph(0, {}), Error);
  CHECK_THROWS_WITH(Graph(3, {{0, 3}}), Catch::Matchers::ContainsSubstring("out of range"));
  CHECK_THROWS_WITH(Graph(3, {{1, 1}}), Catch::Matchers::ContainsSubstring("self-loop"));
  CHECK_THROWS_WITH(Graph(3, {{0, 1}, {1, 0}}), Catch::Matchers::ContainsSubstring("duplicate"));
}

TEST_CASE("matrices of the triangle") {
  const Graph g = triangle();
  const Matrix a = graph::adjacency(g);
  CHECK(a == (Matrix::Ones(3, 3) - Matrix::Identity(3, 3)));
  CHECK(graph::degree_matrix(g) == 2.0 * Matrix::Identity(3, 3));
  CHECK(graph::laplacian(g) == (3.0 * Matrix::Identity(3, 3) - Matrix::Ones(3, 3)));
  const auto spec = graph::normalized_spectrum(g);
  CHECK(spec[0] == Approx(1.0));
  CHECK(spec[1] == Approx(-0.5));
  CHECK(spec[2] == Approx(-0.5));
}

TEST_CASE("normalized adjacency needs every node to have a neighbour") {
  CHECK_THROWS_WITH(graph::normalized_adjacency(Graph(3, {{0, 1}})), Catch::Matchers::ContainsSubstring("isolated"));
}

TEST_CASE("connectivity and bipartiteness") {
  CHECK(graph::is_connected(dart()));
  CHECK_FALSE(graph::is_connected(Graph(4, {{0, 1}, {2, 3}})));
  CHECK(graph::is_connected(Graph(1, {})));
  CHECK_FALSE(graph::is_bipartite(triangle()));
  CHECK(graph::is_bipartite(Graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})));
  CHECK_THROWS_WITH(graph::modal_transform(Graph(4, {{0, 1}, {2, 3}})),
                    Catch::Matchers::ContainsSubstring("not connected"));
}

TEST_CASE("dart spectrum") {
  const auto spec = graph::normalized_spectrum(dart());
  const auto expected = dart_spectrum();
  REQUIRE(spec.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(spec[i] == Approx(expected[i]).margin(1e-12));
  CHECK(spec[1] == Approx(0.2287).margin(1e-4));
  CHECK(spec[4] == Approx(-0.7287).margin(1e-4));
}

TEST_CASE("modal transform invariants") {
  check_modal_invariants(dart());
  check_modal_invariants(triangle());
  check_modal_invariants(Graph(2, {{0, 1}}));
  testing::Rng rng(31);
  for (int k = 0; k < 30; ++k) check_modal_invariants(testing::random_connected_graph(rng, 2 + k % 7));
}

TEST_CASE("relabel by degree and canonical form") {
  // A star with the hub last.
  const Graph star(4, {{3, 0}, {3, 1}, {3, 2}});
  const Graph r = graph::relabel_by_degree(star);
  CHECK(r.degrees() == std::vector<int>{3, 1, 1, 1});
  CHECK(graph::canonical_form(r) == graph::canonical_form(star));
  CHECK(graph::canonical_form(star) != graph::canonical_form(Graph(4, {{0, 1}, {1, 2}, {2, 3}})));
  CHECK(graph::relabel_by_degree(dart()).same_edges(dart()));
}

TEST_CASE("spectrum search recovers the triangle") {
  const auto found = graph::find_graphs_by_spectrum(3, {1.0, -0.5, -0.5}, 1e-9);
  REQUIRE(found.size() == 1);
  CHECK(found[0].same_edges(triangle()));
}

TEST_CASE("spectrum search recovers the dart as the unique class") {
  const auto found = graph::find_graphs_by_spectrum(5, dart_spectrum(), 1e-8);
  REQUIRE(found.size() == 1);
  CHECK(found[0].same_edges(dart()));
  CHECK(graph::find_graphs_by_spectrum(5, {1.0, 0.9, 0.0, -0.5, -1.0}, 1e-8).empty());
  CHECK_THROWS_AS(graph::find_graphs_by_spectrum(9, std::vector<double>(9, 0.0), 1e-8), Error);
}

TEST_CASE("graph text format round-trips") {
  std::istringstream in("# dart\nn 5\ne 1 2\ne 1 3\ne 1 4\ne 1 5\ne 2 3\ne 2 4\n");
  const Graph g = graph::read_graph(in);
  CHECK(g.same_edges(dart()));
  std::istringstream again(graph::to_text(g));
  CHECK(graph::read_graph(again).same_edges(g));

  std::istringstream bad1("e 1 2\n");
  CHECK_THROWS_WITH(graph::read_graph(bad1), Catch::Matchers::ContainsSubstring("edge before node count"));
  std::istringstream bad2("n 3\nx 1 2\n");
  CHECK_THROWS_WITH(graph::read_graph(bad2), Catch::Matchers::ContainsSubstring("unknown record"));
  std::istringstream bad3("n 3\ne 1 4\n");
  CHECK_THROWS_AS(graph::read_graph(bad3), Error);
  CHECK_THROWS_AS(graph::read_graph_file("/nonexistent/graph"), Error);
}

TEST_CASE("graph property: bipartite iff -1 is in the spectrum") {
  testing::Rng rng(32);
  int bipartite = 0;
  for (int k = 0; k < 300; ++k) {
    const Graph g = testing::random_connected_graph(rng, 2 + k % 7);
    const auto spec = graph::normalized_spectrum(g);
    const bool has_minus_one = std::abs(spec.back() + 1.0) < 1e-9;
    CHECK(graph::is_bipartite(g) == has_minus_one);
    if (graph::is_bipartite(g)) {
      ++bipartite;
      for (std::size_t i = 0; i < spec.size(); ++i) CHECK(spec[i] == Approx(-spec[spec.size() - 1 - i]).margin(1e-9));
    }
    for (double v : spec) CHECK(std::abs(v) <= 1.0 + 1e-12);
  }
  CHECK(bipartite > 0);
}
