#include <algorithm>
#include <cmath>

#include "agreelab/error.hpp"
#include "agreelab/protocol.hpp"
#include "checks.hpp"

namespace agreelab::protocol {

RationalTF mode_transfer(const RationalTF& fa, double alpha) {
  return RationalTF(fa.den(), fa.den() - fa.num() * alpha);
}

ModalAnalysis modal_analysis(const Graph& g, std::span<const AgentModel> agents, const TwoDofConfig& cfg) {
  detail::check_2dof(g, agents, cfg);
  ModalAnalysis out;
  out.alphas = graph::modal_transform(g).alphas;
  for (double a : out.alphas) out.modes.push_back(mode_transfer(cfg.network_filter, a));
  for (const AgentModel& ag : agents) {
    auto loop = lti::tf_feedback(ag.plant, ag.local_controller);
    out.sensitivities.push_back(lti::tf_cancel(loop.sensitivity));
    out.disturbances.push_back(lti::tf_cancel(loop.disturbance));
  }
  out.agreement_poles = lti::tf_marginal_poles(out.modes.front()).axis_poles;
  return out;
}

std::string to_string(ModeReason r) {
  switch (r) {
    case ModeReason::kStable: return "stable";
    case ModeReason::kMarginal: return "marginal";
    case ModeReason::kNotStable: return "not-stable";
    case ModeReason::kUnstableAgreement: return "unstable-agreement-mode";
    case ModeReason::kRepeatedAxisPole: return "repeated-axis-pole";
  }
  return "unknown";
}

bool AgreementCertificate::consensus() const {
  return std::any_of(agreement_poles.begin(), agreement_poles.end(),
                     [](Complex p) { return std::abs(p) <= lti::kRootClusterTolerance; });
}

AgreementCertificate check_agreement(const RationalTF& fa, std::span<const double> alphas) {
  AgreementCertificate cert;
  cert.pass = true;
  for (double alpha : alphas) {
    ModeVerdict v;
    v.alpha = alpha;
    const RationalTF t = mode_transfer(fa, alpha);
    v.poles = lti::tf_poles(t);
    if (std::abs(alpha - 1.0) <= 1e-9) {
      const auto mp = lti::tf_marginal_poles(t);
      const bool rhp = std::any_of(v.poles.begin(), v.poles.end(),
                                   [](Complex p) { return p.real() > lti::kHurwitzMargin; });
      if (rhp) {
        v.reason = ModeReason::kUnstableAgreement;
      } else if (mp.repeated_axis_pole) {
        v.reason = ModeReason::kRepeatedAxisPole;
      } else {
        v.pass = true;
        v.reason = mp.axis_poles.empty() ? ModeReason::kStable : ModeReason::kMarginal;
        cert.agreement_poles.insert(cert.agreement_poles.end(), mp.axis_poles.begin(), mp.axis_poles.end());
      }
    } else {
      v.pass = lti::tf_is_hurwitz(t);
      v.reason = v.pass ? ModeReason::kStable : ModeReason::kNotStable;
    }
    cert.pass = cert.pass && v.pass;
    cert.modes.push_back(std::move(v));
  }
  if (!cert.pass) cert.agreement_poles.clear();
  return cert;
}

std::string to_string(CancellationVerdict v) {
  return v == CancellationVerdict::kNecessaryConditionHolds ? "NECESSARY-CONDITION-HOLDS" : "CANCELLATION-EXCLUDED";
}

CancellationReport check_cancellation(Complex p, std::span<const RationalTF> loop_tfs) {
  if (std::abs(p.real()) > kAxisTolerance) throw Error("check_cancellation: p is not on the imaginary axis");
  CancellationReport out;
  bool all = !loop_tfs.empty();
  for (const RationalTF& g : loop_tfs) {
    const RationalTF r = lti::tf_cancel(g);
    bool zero = r.is_zero();
    if (!zero && r.num().degree() > 0) {
      const auto zs = numerics::poly_roots(r.num());
      zero = std::any_of(zs.begin(), zs.end(), [&](Complex z) { return std::abs(z - p) <= kAxisTolerance; });
    }
    out.vanishes.push_back(zero);
    all = all && zero;
  }
  out.verdict = all ? CancellationVerdict::kNecessaryConditionHolds : CancellationVerdict::kCancellationExcluded;
  return out;
}

CMatrix modal_noise_transfer(const Graph& g, const RationalTF& fa, Complex s) {
  const auto md = graph::modal_transform(g);
  const Complex f = fa(s);
  numerics::CVector t(static_cast<Eigen::Index>(md.alphas.size()));
  for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = 1.0 / (1.0 - md.alphas[static_cast<std::size_t>(i)] * f);
  return md.u_inv.cast<Complex>() * t.asDiagonal() * md.u.cast<Complex>() * f;
}

}  // namespace agreelab::protocol
