#include <string>

#include "agreelab/error.hpp"
#include "agreelab/protocol.hpp"
#include "checks.hpp"

namespace agreelab::protocol {

namespace detail {

void check_network(const Graph& g, std::span<const AgentModel> agents) {
  if (!graph::is_connected(g) || g.nodes() < 2) throw Error("network graph must be connected with at least two nodes");
  if (static_cast<int>(agents.size()) != g.nodes())
    throw Error("expected " + std::to_string(g.nodes()) + " agents, got " + std::to_string(agents.size()));
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (!agents[i].plant.is_proper()) throw Error("agent " + std::to_string(i + 1) + ": plant is improper");
}

void check_2dof(const Graph& g, std::span<const AgentModel> agents, const TwoDofConfig& cfg) {
  check_network(g, agents);
  const RationalTF& fa = cfg.network_filter;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string who = "agent " + std::to_string(i + 1);
    const RationalTF& p = agents[i].plant;
    const RationalTF& fd = agents[i].local_controller;
    if (p.is_zero()) throw Error(who + ": plant is identically zero");
    if (!fd.is_proper()) throw Error(who + ": local controller is improper");

    const RationalTF kff = lti::tf_cancel(lti::tf_series(lti::tf_parallel(lti::tf_inverse(p), lti::tf_scale(fd, -1.0)), fa));
    if (!kff.is_proper()) throw Error(who + ": consistency condition unrealizable, (P^-1 - Fd) Fa is improper");

    const numerics::Polynomial chi = p.den() * fd.den() - p.num() * fd.num();
    if (chi.is_zero()) throw Error(who + ": local loop has an algebraic loop");
    if (chi.degree() > 0 && !numerics::routh_hurwitz_stable(chi)) throw Error(who + ": local loop unstable");
  }
}

}  // namespace detail

namespace {

// Plant-state rows of the initial-state map: C_p' y0 / (C_p C_p').
void seed_plant(Matrix& map, Eigen::Index offset, const StateSpace& plant, int agent) {
  if (plant.states() == 0) throw Error("agent " + std::to_string(agent + 1) + ": static plant cannot carry an initial output");
  const Eigen::RowVectorXd c = plant.c.row(0);
  map.block(offset, agent, plant.states(), 1) = c.transpose() / c.squaredNorm();
}

ClosedLoop assemble(const std::vector<StateSpace>& comps, const Matrix& wiring, const Matrix& external,
                    const Matrix& selection, const std::vector<std::size_t>& plant_comp, int nu) {
  ClosedLoop out;
  out.agents = nu;
  out.dynamics = lti::ss_interconnect(lti::ss_block_diag(comps), wiring, external, selection);

  std::vector<Eigen::Index> offset(comps.size() + 1, 0);
  for (std::size_t k = 0; k < comps.size(); ++k) offset[k + 1] = offset[k] + comps[k].states();
  out.initial_state_map = Matrix::Zero(out.dynamics.states(), nu);
  for (int i = 0; i < nu; ++i) {
    const std::size_t k = plant_comp[static_cast<std::size_t>(i)];
    seed_plant(out.initial_state_map, offset[k], comps[k], i);
  }
  return out;
}

}  // namespace

ClosedLoop build_classic(const Graph& g, std::span<const AgentModel> agents, const ClassicConfig& cfg) {
  detail::check_network(g, agents);
  const int nu = g.nodes();
  if (static_cast<int>(cfg.gains.size()) != nu) throw Error("classic protocol needs one gain per agent");
  for (double k : cfg.gains)
    if (!(k > 0.0)) throw Error("classic protocol gains must be positive");
  if (!cfg.filter.is_proper()) throw Error("classic protocol filter is improper");

  const Matrix adj = graph::adjacency(g);
  const auto deg = g.degrees();

  // Per agent: plant (input u + d, output y), filter k F (input e, output u).
  std::vector<StateSpace> comps;
  std::vector<std::size_t> plant_comp;
  for (int i = 0; i < nu; ++i) {
    plant_comp.push_back(comps.size());
    comps.push_back(lti::tf_to_ss(agents[static_cast<std::size_t>(i)].plant));
    comps.push_back(lti::tf_to_ss(lti::tf_scale(cfg.filter, cfg.gains[static_cast<std::size_t>(i)])));
  }
  Matrix m = Matrix::Zero(2 * nu, 2 * nu), n = Matrix::Zero(2 * nu, 2 * nu), s = Matrix::Zero(nu, 2 * nu);
  for (int i = 0; i < nu; ++i) {
    const int p = 2 * i, f = 2 * i + 1;
    const double di = deg[static_cast<std::size_t>(i)];
    m(p, f) = 1.0;
    n(p, i) = 1.0;
    for (int j = 0; j < nu; ++j) m(f, 2 * j) = adj(i, j);
    m(f, p) = -di;
    n(f, nu + i) = di;
    s(i, p) = 1.0;
  }
  return assemble(comps, m, n, s, plant_comp, nu);
}

ClosedLoop build_2dof(const Graph& g, std::span<const AgentModel> agents, const TwoDofConfig& cfg) {
  detail::check_2dof(g, agents, cfg);
  const int nu = g.nodes();
  const RationalTF& fa = cfg.network_filter;
  const Matrix adjn = graph::normalized_adjacency(g);

  // Per agent: plant, Fd (input y - y_ref), and the reference generator
  // r -> (y_ref, u_req) = (Fa, P^-1 Fa) r on a shared denominator.
  // Inputs per agent: [plant, Fd, generator]; outputs: [y, Fd, y_ref, u_req].
  std::vector<StateSpace> comps;
  std::vector<std::size_t> plant_comp;
  for (int i = 0; i < nu; ++i) {
    const AgentModel& a = agents[static_cast<std::size_t>(i)];
    plant_comp.push_back(comps.size());
    comps.push_back(lti::tf_to_ss(a.plant));
    comps.push_back(lti::tf_to_ss(a.local_controller));
    const RationalTF column[] = {fa, lti::tf_cancel(lti::tf_series(lti::tf_inverse(a.plant), fa))};
    comps.push_back(lti::tf_column_to_ss(column));
  }
  Matrix m = Matrix::Zero(3 * nu, 4 * nu), n = Matrix::Zero(3 * nu, 2 * nu), s = Matrix::Zero(nu, 4 * nu);
  for (int i = 0; i < nu; ++i) {
    const int wp = 3 * i, wf = 3 * i + 1, wr = 3 * i + 2;
    const int y = 4 * i, fd = 4 * i + 1, yref = 4 * i + 2, ureq = 4 * i + 3;
    m(wp, fd) = 1.0;
    m(wp, ureq) = 1.0;
    n(wp, i) = 1.0;
    m(wf, y) = 1.0;
    m(wf, yref) = -1.0;
    for (int j = 0; j < nu; ++j) m(wr, 4 * j) = adjn(i, j);
    n(wr, nu + i) = 1.0;
    s(i, y) = 1.0;
  }
  return assemble(comps, m, n, s, plant_comp, nu);
}

}  // namespace agreelab::protocol
