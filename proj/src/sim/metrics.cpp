#include <algorithm>
#include <cmath>

#include "agreelab/error.hpp"
#include "agreelab/sim.hpp"

namespace agreelab::sim {

double settling_time(const Trajectory& traj, double band) {
  if (traj.samples() == 0) throw Error("settling_time: empty trajectory");
  const Eigen::Index last = traj.samples() - 1;
  const double y_inf = traj.outputs.row(last).mean();
  const double threshold = band * (traj.outputs.row(0).array() - y_inf).abs().maxCoeff();
  Eigen::Index outside = -1;
  for (Eigen::Index k = last; k >= 0; --k) {
    if ((traj.outputs.row(k).array() - y_inf).abs().maxCoeff() > threshold) {
      outside = k;
      break;
    }
  }
  if (outside == last) throw Error("unsettled: trajectory leaves the band at the final sample");
  return outside < 0 ? traj.times.front() : traj.times[static_cast<std::size_t>(outside + 1)];
}

double disagreement_norm(const Trajectory& traj, double t, double reference) {
  return (traj.outputs.row(traj.index_of(t)).array() - reference).matrix().norm();
}

double final_spread(const Trajectory& traj) {
  const auto row = traj.outputs.row(traj.samples() - 1);
  return row.maxCoeff() - row.minCoeff();
}

double drift_slope(const std::vector<Trajectory>& ensemble, const Vector& projection) {
  if (ensemble.size() < 30) throw Error("drift_slope needs at least 30 realizations");
  const Trajectory& ref = ensemble.front();
  const Eigen::Index samples = ref.samples();
  for (const auto& tr : ensemble)
    if (tr.samples() != samples || tr.channels() != projection.size())
      throw Error("drift_slope: realizations differ in shape");

  const double t_end = ref.times.back();
  const double r = static_cast<double>(ensemble.size());
  std::vector<double> ts, vs;
  for (Eigen::Index k = 0; k < samples; ++k) {
    const double t = ref.times[static_cast<std::size_t>(k)];
    if (t < t_end / 2.0) continue;
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& tr : ensemble) {
      const double v = tr.outputs.row(k).dot(projection);
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / r;
    ts.push_back(t);
    vs.push_back((sum_sq - r * mean * mean) / (r - 1.0));
  }
  if (ts.size() < 2) throw Error("drift_slope: window holds fewer than two samples");
  const double n = static_cast<double>(ts.size());
  double mt = 0.0, mv = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    mt += ts[k] / n;
    mv += vs[k] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    sxy += (ts[k] - mt) * (vs[k] - mv);
    sxx += (ts[k] - mt) * (ts[k] - mt);
  }
  return sxy / sxx;
}

Matrix noise_covariance(const ChannelSignals& n, int channels) {
  Matrix w = Matrix::Zero(channels, channels);
  for (std::size_t i = 0; i < n.size() && static_cast<int>(i) < channels; ++i)
    if (n[i].kind == SignalSpec::Kind::kWhiteNoise) w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = n[i].intensity;
  return w;
}

namespace {

struct ZeroMode {
  Vector right;  // A v = 0
  Vector left;   // w' A = 0
};

ZeroMode zero_mode(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Eigen::Index n = sv.size();
  const double scale = std::max(1.0, sv[0]);
  if (n < 2 || sv[n - 1] > 1e-8 * scale || sv[n - 2] <= 1e-8 * scale)
    throw Error("closed loop must have exactly one eigenvalue at the origin");
  return {svd.matrixV().col(n - 1), svd.matrixU().col(n - 1)};
}

}  // namespace

double stationary_disagreement_variance(const ClosedLoop& loop, const Matrix& w) {
  const auto& sys = loop.dynamics;
  const Eigen::Index n = sys.states();
  const ZeroMode z = zero_mode(sys.a);
  const Matrix pi = z.right * z.left.transpose() / z.left.dot(z.right);
  const Matrix keep = Matrix::Identity(n, n) - pi;
  // Shifting the zero eigenvalue to -1 leaves the other modes untouched and
  // makes the Lyapunov operator invertible; the projected forcing never
  // excites the shifted mode.
  const Matrix shifted = sys.a - pi;
  const Matrix bn = loop.noise_input();
  const Matrix x = numerics::lyapunov_solve(shifted, keep * bn * w * bn.transpose() * keep.transpose());
  const int nu = loop.agents;
  const Matrix centre = Matrix::Identity(nu, nu) - Matrix::Constant(nu, nu, 1.0 / nu);
  return (centre * sys.c * x * sys.c.transpose() * centre.transpose()).trace() / nu;
}

double predicted_drift_slope(const ClosedLoop& loop, const Matrix& w, const Vector& projection) {
  const auto& sys = loop.dynamics;
  const ZeroMode z = zero_mode(sys.a);
  const Matrix bn = loop.noise_input();
  const double gain = projection.dot(sys.c * z.right);
  const double rate = (z.left.transpose() * bn * w * bn.transpose() * z.left).value();
  const double norm = z.left.dot(z.right);
  return gain * gain * rate / (norm * norm);
}

}  // namespace agreelab::sim
