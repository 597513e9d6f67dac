#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "agreelab/linalg.hpp"
#include "agreelab/protocol.hpp"

namespace agreelab::sim {

using numerics::Matrix;
using numerics::Vector;
using protocol::ClosedLoop;

/// Input on one channel. Steps switch on at the grid point nearest to
/// `onset`; white noise has two-sided intensity sigma^2 (increment variance
/// sigma^2 dt) and is zero before `onset`.
struct SignalSpec {
  enum class Kind { kZero, kStep, kWhiteNoise };
  Kind kind = Kind::kZero;
  double amplitude = 0.0;
  double intensity = 0.0;
  double onset = 0.0;

  static SignalSpec zero() { return {}; }
  static SignalSpec step(double amplitude, double onset) { return {Kind::kStep, amplitude, 0.0, onset}; }
  static SignalSpec white_noise(double intensity, double onset) {
    return {Kind::kWhiteNoise, 0.0, intensity, onset};
  }
};
/// One entry per agent; an empty list means every channel is zero.
using ChannelSignals = std::vector<SignalSpec>;

struct SimOptions {
  double dt = 1e-3;
  double t_final = 10.0;
  int record_stride = 1;  // keep every k-th grid point
};

inline constexpr double kDivergenceLimit = 1e9;

/// Samples on a uniform grid; outputs has one row per sample.
struct Trajectory {
  double dt = 0.0;  // spacing of the recorded samples
  std::vector<double> times;
  Matrix outputs;

  Eigen::Index samples() const { return outputs.rows(); }
  Eigen::Index channels() const { return outputs.cols(); }
  /// Row index of grid time t; throws if t is not a recorded sample.
  Eigen::Index index_of(double t) const;
};

/// Fixed-step classic fourth-order Runge-Kutta. Inputs are held constant
/// over each step, which is exact for grid-aligned steps. Throws
/// DivergenceError when an output leaves [-1e9, 1e9].
Trajectory integrate(const ClosedLoop& loop, const ChannelSignals& d, const ChannelSignals& n, const Vector& y0,
                     const SimOptions& opt);

/// Same deterministic part plus Euler-Maruyama increments on the white-noise
/// channels of n. Bit-reproducible for a given seed.
Trajectory integrate_stochastic(const ClosedLoop& loop, const ChannelSignals& d, const ChannelSignals& n,
                                const Vector& y0, const SimOptions& opt, std::uint64_t seed);

/// Seed of realization `index` under a master seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// R stochastic realizations spread over worker threads; realization k uses
/// derive_seed(master, k), so the result does not depend on the thread count.
std::vector<Trajectory> run_ensemble(const ClosedLoop& loop, const ChannelSignals& d, const ChannelSignals& n,
                                     const Vector& y0, const SimOptions& opt, std::uint64_t master_seed,
                                     int realizations);

/// Smallest grid time after which max_i |y_i - y_inf| stays within
/// band * max_i |y_i(0) - y_inf|, y_inf the mean of the final sample.
/// Throws "unsettled" if the last sample is still outside.
double settling_time(const Trajectory& traj, double band = 0.02);

/// || y(t) - reference 1 ||_2
double disagreement_norm(const Trajectory& traj, double t, double reference);

/// Largest pairwise output gap at the final sample.
double final_spread(const Trajectory& traj);

/// Least-squares slope of the ensemble variance of projection' y(t) over
/// [T/2, T]. Needs at least 30 realizations.
double drift_slope(const std::vector<Trajectory>& ensemble, const Vector& projection);

/// Per-channel white-noise intensities as a covariance-rate matrix.
Matrix noise_covariance(const ChannelSignals& n, int channels);

/// Stationary mean per-agent variance of y - mean(y) 1 for a loop with one
/// simple agreement eigenvalue at 0, driven by white noise of covariance
/// rate W on the noise channels.
double stationary_disagreement_variance(const ClosedLoop& loop, const Matrix& w);

/// Asymptotic growth rate of Var(projection' y) from the zero mode.
double predicted_drift_slope(const ClosedLoop& loop, const Matrix& w, const Vector& projection);

/// Header "t,y1,...,yN", one row per sample, 17 significant digits.
void write_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_csv(std::istream& in);

}  // namespace agreelab::sim
