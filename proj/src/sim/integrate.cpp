#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "agreelab/error.hpp"
#include "agreelab/sim.hpp"

namespace agreelab::sim {

namespace {

long long grid_index(double t, double dt) { return std::llround(t / dt); }

void check_signals(const ChannelSignals& s, int nu, const char* name) {
  if (!s.empty() && static_cast<int>(s.size()) != nu)
    throw Error(std::string(name) + " signals: expected one entry per agent");
  for (const auto& c : s) {
    if (c.onset < 0.0) throw Error(std::string(name) + " signals: negative onset");
    if (c.intensity < 0.0) throw Error(std::string(name) + " signals: negative noise intensity");
  }
}

// Deterministic input value on step k.
void fill_inputs(Vector& u, const ChannelSignals& d, const ChannelSignals& n, int nu, long long k, double dt) {
  u.setZero();
  auto put = [&](const ChannelSignals& s, int base) {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i].kind == SignalSpec::Kind::kStep && k >= grid_index(s[i].onset, dt))
        u[base + static_cast<Eigen::Index>(i)] = s[i].amplitude;
  };
  put(d, 0);
  put(n, nu);
}

struct Stepper {
  Matrix phi;    // RK4 state propagator
  Matrix gamma;  // RK4 response to an input held over the step
};

// Classic RK4 applied to x' = A x + B u with u constant over the step, written
// as matrices: phi = sum_{j<=4} (hA)^j / j!, gamma = sum_{j=1..4} h^j A^(j-1) B / j!.
Stepper make_stepper(const Matrix& a, const Matrix& b, double h) {
  const Eigen::Index n = a.rows();
  Stepper s;
  s.phi = Matrix::Identity(n, n);
  s.gamma = Matrix::Zero(n, b.cols());
  Matrix term = Matrix::Identity(n, n);
  double fact = 1.0;
  for (int j = 1; j <= 4; ++j) {
    fact *= j;
    s.gamma += std::pow(h, j) / fact * term * b;
    term = term * a;
    s.phi += std::pow(h, j) / fact * term;
  }
  return s;
}

Trajectory run(const ClosedLoop& loop, const ChannelSignals& d, const ChannelSignals& n, const Vector& y0,
               const SimOptions& opt, std::mt19937_64* rng) {
  const int nu = loop.agents;
  if (!(opt.dt > 0.0) || !(opt.t_final >= 0.0)) throw Error("simulation needs dt > 0 and T >= 0");
  if (opt.record_stride < 1) throw Error("record_stride must be at least 1");
  if (y0.size() != nu) throw Error("y0 must have one entry per agent");
  check_signals(d, nu, "disturbance");
  check_signals(n, nu, "noise");
  for (const auto& c : d)
    if (c.kind == SignalSpec::Kind::kWhiteNoise) throw Error("white noise is only supported on the noise channels");
  const bool noisy = std::any_of(n.begin(), n.end(), [](const SignalSpec& c) {
    return c.kind == SignalSpec::Kind::kWhiteNoise && c.intensity > 0.0;
  });
  if (noisy && !rng) throw Error("white noise requires the stochastic integrator");

  const auto& sys = loop.dynamics;
  const Stepper st = make_stepper(sys.a, sys.b, opt.dt);
  const long long steps = grid_index(opt.t_final, opt.dt);

  // Noise increments enter through the noise columns of B.
  const Matrix bn = loop.noise_input();
  std::vector<double> scale(static_cast<std::size_t>(nu), 0.0);
  std::vector<long long> noise_start(static_cast<std::size_t>(nu), 0);
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i].kind != SignalSpec::Kind::kWhiteNoise) continue;
    scale[i] = std::sqrt(n[i].intensity * opt.dt);
    noise_start[i] = grid_index(n[i].onset, opt.dt);
  }
  std::normal_distribution<double> normal(0.0, 1.0);

  Trajectory out;
  out.dt = opt.dt * opt.record_stride;
  const long long kept = steps / opt.record_stride + 1;
  out.outputs.resize(kept, nu);
  out.times.reserve(static_cast<std::size_t>(kept));

  Vector x = loop.initial_state_map * y0;
  Vector u(2 * nu), y(nu), w(nu), xn(x.size());
  long long row = 0;
  for (long long k = 0;; ++k) {
    fill_inputs(u, d, n, nu, k, opt.dt);
    y.noalias() = sys.c * x;
    y.noalias() += sys.d * u;
    const double t = k * opt.dt;
    if (!y.allFinite() || y.cwiseAbs().maxCoeff() > kDivergenceLimit) {
      std::ostringstream msg;
      msg << "simulation diverged at t=" << t;
      throw DivergenceError(t, msg.str());
    }
    if (k % opt.record_stride == 0) {
      out.outputs.row(row++) = y.transpose();
      out.times.push_back(t);
    }
    if (k == steps) break;
    xn.noalias() = st.phi * x;
    xn.noalias() += st.gamma * u;
    if (noisy) {
      for (int i = 0; i < nu; ++i) {
        const double r = normal(*rng);  // drawn every step so the stream is onset-independent
        w[i] = k >= noise_start[static_cast<std::size_t>(i)] ? scale[static_cast<std::size_t>(i)] * r : 0.0;
      }
      xn.noalias() += bn * w;
    }
    x.swap(xn);
  }
  return out;
}

}  // namespace

Eigen::Index Trajectory::index_of(double t) const {
  if (times.empty() || dt <= 0.0) throw Error("empty trajectory");
  const long long k = std::llround((t - times.front()) / dt);
  if (k < 0 || k >= static_cast<long long>(times.size()) ||
      std::abs(times[static_cast<std::size_t>(k)] - t) > 1e-9 * std::max(1.0, std::abs(t)))
    throw Error("time is not on the trajectory grid");
  return static_cast<Eigen::Index>(k);
}

Trajectory integrate(const ClosedLoop& loop, const ChannelSignals& d, const ChannelSignals& n, const Vector& y0,
                     const SimOptions& opt) {
  return run(loop, d, n, y0, opt, nullptr);
}

Trajectory integrate_stochastic(const ClosedLoop& loop, const ChannelSignals& d, const ChannelSignals& n,
                                const Vector& y0, const SimOptions& opt, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return run(loop, d, n, y0, opt, &rng);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master) ^ index);
}

std::vector<Trajectory> run_ensemble(const ClosedLoop& loop, const ChannelSignals& d, const ChannelSignals& n,
                                     const Vector& y0, const SimOptions& opt, std::uint64_t master_seed,
                                     int realizations) {
  if (realizations < 1) throw Error("ensemble needs at least one realization");
  std::vector<Trajectory> out(static_cast<std::size_t>(realizations));
  std::vector<std::exception_ptr> errors(out.size());
  const unsigned workers =
      std::max(1u, std::min(std::thread::hardware_concurrency(), static_cast<unsigned>(realizations)));
  auto work = [&](unsigned w) {
    for (std::size_t k = w; k < out.size(); k += workers) {
      try {
        out[k] = integrate_stochastic(loop, d, n, y0, opt, derive_seed(master_seed, k));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace agreelab::sim
