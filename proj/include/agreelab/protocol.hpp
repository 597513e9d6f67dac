#pragma once

#include <span>
#include <string>
#include <vector>

#include "agreelab/graph.hpp"
#include "agreelab/rational_tf.hpp"
#include "agreelab/state_space.hpp"

namespace agreelab::protocol {

using graph::Graph;
using lti::Complex;
using lti::RationalTF;
using lti::StateSpace;
using numerics::CMatrix;
using numerics::Matrix;

struct AgentModel {
  RationalTF plant;             // P_i
  RationalTF local_controller;  // Fd_i, two-degree-of-freedom protocol only
};

struct ClassicConfig {
  std::vector<double> gains;  // k_i, one per agent
  RationalTF filter = RationalTF::constant(1.0);
};

struct TwoDofConfig {
  RationalTF network_filter;  // Fa, shared by all agents
};

/// Simulable network. Inputs are [d (nu); n (nu)] with d added to each plant
/// input and n the per-agent aggregated measurement noise; outputs are y.
/// Initial outputs y0 enter through plant states: x(0) = initial_state_map * y0,
/// with every controller state at zero.
struct ClosedLoop {
  StateSpace dynamics;
  Matrix initial_state_map;
  int agents = 0;

  Matrix disturbance_input() const { return dynamics.b.leftCols(agents); }
  Matrix noise_input() const { return dynamics.b.rightCols(agents); }
};

/// u_i = k_i F (sum_j A_ij (y_j - y_i) + d_i n_i), fed into P_i with d_i.
/// Throws on a disconnected graph, an agent-count mismatch, a non-positive
/// gain, or an improper plant or filter.
ClosedLoop build_classic(const Graph& g, std::span<const AgentModel> agents, const ClassicConfig& cfg);

/// Each agent runs u_i = Fd_i (y_i - Fa r_i) + P_i^-1 Fa r_i with
/// r_i = (Adjn y)_i + n_i, which equals Fd_i y_i + (P_i^-1 - Fd_i) Fa r_i.
/// Throws "consistency condition unrealizable" if (P_i^-1 - Fd_i) Fa is
/// improper and "local loop unstable" if Fd_i does not stabilize P_i.
ClosedLoop build_2dof(const Graph& g, std::span<const AgentModel> agents, const TwoDofConfig& cfg);

/// Per-mode and per-agent transfers of the two-degree-of-freedom network.
struct ModalAnalysis {
  std::vector<double> alphas;
  std::vector<RationalTF> modes;          // T_i = 1 / (1 - alpha_i Fa)
  std::vector<RationalTF> sensitivities;  // S_i = 1 / (1 - P_i Fd_i)
  std::vector<RationalTF> disturbances;   // Td_i = S_i P_i
  std::vector<Complex> agreement_poles;   // imaginary-axis poles of T_1
};
ModalAnalysis modal_analysis(const Graph& g, std::span<const AgentModel> agents, const TwoDofConfig& cfg);

/// 1 / (1 - alpha Fa) built from cleared polynomials.
RationalTF mode_transfer(const RationalTF& fa, double alpha);

enum class ModeReason {
  kStable,             // T_i in H-infinity (alpha_i != 1)
  kMarginal,           // T_1 with simple imaginary-axis poles only
  kNotStable,          // alpha_i != 1 and T_i has a pole with Re >= 0
  kUnstableAgreement,  // T_1 has a pole in the open right half-plane
  kRepeatedAxisPole,   // T_1 has a repeated imaginary-axis pole
};
std::string to_string(ModeReason r);

struct ModeVerdict {
  double alpha = 0.0;
  bool pass = false;
  ModeReason reason = ModeReason::kStable;
  std::vector<Complex> poles;
};

struct AgreementCertificate {
  bool pass = false;
  std::vector<ModeVerdict> modes;
  std::vector<Complex> agreement_poles;
  /// Agreement pole at the origin: the common trajectory is constant.
  bool consensus() const;
};

/// Agreement iff every T_i with alpha_i != 1 is stable and T_1 has all poles
/// in the closed left half-plane with simple imaginary-axis poles. alpha
/// within 1e-9 of 1 is the agreement mode.
AgreementCertificate check_agreement(const RationalTF& fa, std::span<const double> alphas);

enum class CancellationVerdict { kNecessaryConditionHolds, kCancellationExcluded };
std::string to_string(CancellationVerdict v);

struct CancellationReport {
  CancellationVerdict verdict = CancellationVerdict::kCancellationExcluded;
  std::vector<bool> vanishes;  // per loop transfer
};

inline constexpr double kAxisTolerance = 1e-6;

/// Necessary condition for a network pole p to cancel: every loop transfer
/// vanishes at p (a numerator root within 1e-6 after cancellation). Throws if
/// p is off the imaginary axis.
CancellationReport check_cancellation(Complex p, std::span<const RationalTF> loop_tfs);

/// U^-1 diag(T_i(s)) U Fa(s), the noise-to-output transfer of the network
/// in modal form.
CMatrix modal_noise_transfer(const Graph& g, const RationalTF& fa, Complex s);

}  // namespace agreelab::protocol
