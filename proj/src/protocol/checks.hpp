#pragma once

#include <span>

#include "agreelab/protocol.hpp"

namespace agreelab::protocol::detail {

// Connected graph and one agent per node.
void check_network(const Graph& g, std::span<const AgentModel> agents);

// Realizability of the feed-forward path and internal stability of every
// local loop.
void check_2dof(const Graph& g, std::span<const AgentModel> agents, const TwoDofConfig& cfg);

}  // namespace agreelab::protocol::detail
