#include "agreelab/commands.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace agreelab::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::filesystem::path data_dir() { return fs::path(AGREELAB_DATA_DIR); }

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

// Shared error-to-exit-code mapping for every command.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt(lti::Complex z) {
  if (z.imag() == 0.0) return fmt(z.real());
  std::ostringstream os;
  os << std::setprecision(17) << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

// Time label for metric keys: 60 -> "60", 2.5 -> "2.5".
std::string time_key(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

std::string csv_text(const sim::Trajectory& tr) {
  std::ostringstream os;
  sim::write_csv(os, tr);
  return os.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Least-squares slope of mean(y) over the second half of the run.
double output_drift_rate(const sim::Trajectory& tr) {
  const double t_end = tr.times.back();
  double st = 0, sv = 0, stt = 0, stv = 0, n = 0;
  for (Eigen::Index k = 0; k < tr.samples(); ++k) {
    const double t = tr.times[static_cast<std::size_t>(k)];
    if (t < t_end / 2.0) continue;
    const double v = tr.outputs.row(k).mean();
    st += t;
    sv += v;
    stt += t * t;
    stv += t * v;
    n += 1;
  }
  return (n * stv - st * sv) / (n * stt - st * st);
}

// Largest |y_i| over [a, b].
double sup_norm(const sim::Trajectory& tr, double a, double b) {
  double m = 0.0;
  for (Eigen::Index k = 0; k < tr.samples(); ++k) {
    const double t = tr.times[static_cast<std::size_t>(k)];
    if (t >= a - 1e-12 && t <= b + 1e-12) m = std::max(m, tr.outputs.row(k).cwiseAbs().maxCoeff());
  }
  return m;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json run_experiment(const ExperimentConfig& cfg, const std::string& protocol, const fs::path& dir) {
  const auto loop = build_loop(cfg, protocol);
  const auto d = disturbance_signals(cfg);
  const auto n = noise_signals(cfg);
  const sim::Vector y0 = Eigen::Map<const sim::Vector>(cfg.sim.y0.data(), static_cast<Eigen::Index>(cfg.sim.y0.size()));
  const auto opt = sim_options(cfg);
  const bool noisy = !n.empty();

  json m = json::object();
  m["protocol"] = protocol;
  m["seed"] = cfg.sim.seed;
  m["dt"] = cfg.sim.dt;
  m["T"] = cfg.sim.t_final;
  m["realizations"] = noisy ? cfg.sim.realizations : 0;
  m["noise_model"] = cfg.noise ? json(to_string(cfg.noise->model)) : json(nullptr);

  auto fail = [&](const DivergenceError& e) {
    m["diverged"] = true;
    m["divergence_time_s"] = e.time();
    write_file_atomic(dir / "metrics.json", m.dump(2) + "\n");
  };

  sim::Trajectory nominal;
  try {
    nominal = sim::integrate(loop, d, {}, y0, opt);
  } catch (const DivergenceError& e) {
    fail(e);
    throw;
  }
  write_file_atomic(dir / "nominal.csv", csv_text(nominal));
  m["diverged"] = false;

  const double consensus = nominal.outputs.row(nominal.samples() - 1).mean();
  m["final_consensus"] = consensus;
  m["final_spread"] = sim::final_spread(nominal);
  try {
    m["settling_time_s"] = sim::settling_time(nominal, cfg.sim.band);
  } catch (const Error&) {
    m["settling_time_s"] = nullptr;
  }
  m["output_drift_rate"] = output_drift_rate(nominal);
  const double t_end = nominal.times.back();
  m["sup_norm_mid"] = sup_norm(nominal, t_end / 3.0, 2.0 * t_end / 3.0);
  m["sup_norm_late"] = sup_norm(nominal, 2.0 * t_end / 3.0, t_end);

  if (!noisy) {
    for (double t : cfg.sim.disagreement_times)
      m["disagreement_norm_at_" + time_key(t)] = sim::disagreement_norm(nominal, t, consensus);
    m["drift_slope"] = nullptr;
    return m;
  }

  std::vector<sim::Trajectory> runs;
  try {
    runs = sim::run_ensemble(loop, d, n, y0, opt, cfg.sim.seed, cfg.sim.realizations);
  } catch (const DivergenceError& e) {
    fail(e);
    throw;
  }
  if (runs.size() <= 10)
    for (std::size_t k = 0; k < runs.size(); ++k)
      write_file_atomic(dir / ("realization_" + std::to_string(k + 1) + ".csv"), csv_text(runs[k]));

  for (double t : cfg.sim.disagreement_times) {
    std::vector<double> norms;
    for (const auto& r : runs) norms.push_back(sim::disagreement_norm(r, t, consensus));
    m["disagreement_norm_at_" + time_key(t)] = median(norms);
  }

  const sim::Vector projection = graph::modal_transform(*cfg.graph).u.row(0).transpose();
  m["drift_slope"] = runs.size() >= 30 ? json(sim::drift_slope(runs, projection)) : json(nullptr);
  const sim::Matrix w = sim::noise_covariance(n, loop.agents);
  try {
    m["predicted_drift_slope"] = finite_or_null(sim::predicted_drift_slope(loop, w, projection));
    m["stationary_disagreement_variance"] = finite_or_null(sim::stationary_disagreement_variance(loop, w));
  } catch (const Error&) {
    m["predicted_drift_slope"] = nullptr;
    m["stationary_disagreement_variance"] = nullptr;
  }
  return m;
}

int cmd_spectrum(const fs::path& graph_file, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto g = graph::read_graph_file(graph_file);
    const bool connected = graph::is_connected(g);
    out << "nodes " << g.nodes() << "\n";
    out << "edges " << g.edges().size() << "\n";
    out << "connected " << (connected ? "yes" : "no") << "\n";
    if (!connected) err << "warning: graph is disconnected\n";
    out << "spectrum";
    for (double a : graph::normalized_spectrum(g)) out << ' ' << fmt(a);
    out << "\n";
    if (connected) {
      out << "gamma";
      const auto md = graph::modal_transform(g);
      for (Eigen::Index i = 0; i < md.gamma.size(); ++i) out << ' ' << fmt(md.gamma[i]);
      out << "\n";
    }
    return kExitOk;
  });
}

int cmd_check(const fs::path& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = load_config(config);
    if (cfg.protocol == "classic" || !cfg.twodof) throw ConfigError("protocol: check applies to twodof");
    if (!cfg.graph) throw ConfigError("graph: missing");
    const auto agents = agent_models(cfg);
    for (std::size_t k = 0; k < cfg.agents.size(); ++k)
      if (!cfg.agents[k].controller) throw ConfigError("agents[" + std::to_string(k) + "].controller: missing for twodof");
    const protocol::TwoDofConfig tc{cfg.twodof->tf()};
    const auto ma = protocol::modal_analysis(*cfg.graph, agents, tc);
    const auto cert = protocol::check_agreement(tc.network_filter, ma.alphas);

    out << "agreement " << (cert.pass ? "PASS" : "FAIL") << "\n";
    for (const auto& mv : cert.modes) {
      out << "mode alpha=" << fmt(mv.alpha) << ' ' << (mv.pass ? "pass" : "fail") << ' '
          << protocol::to_string(mv.reason) << "\n";
    }
    out << "agreement_poles";
    for (auto p : cert.agreement_poles) out << ' ' << fmt(p);
    out << "\n";
    if (cert.pass) out << "trajectory " << (cert.consensus() ? "consensus (constant)" : "non-constant agreement") << "\n";
    for (auto p : cert.agreement_poles) {
      const auto y0_path = protocol::check_cancellation(p, ma.sensitivities);
      const auto d_path = protocol::check_cancellation(p, ma.disturbances);
      out << "cancellation p=" << fmt(p) << " initial-condition path (S_i): " << protocol::to_string(y0_path.verdict) << "\n";
      out << "cancellation p=" << fmt(p) << " disturbance path (Td_i): " << protocol::to_string(d_path.verdict) << "\n";
    }
    return kExitOk;
  });
}

int cmd_simulate(const fs::path& config, const SimulateOverrides& overrides, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto cfg = load_config(config);
    if (overrides.seed) cfg.sim.seed = *overrides.seed;
    if (overrides.realizations) {
      if (*overrides.realizations < 1) throw ConfigError("--realizations: must be at least 1");
      cfg.sim.realizations = *overrides.realizations;
    }
    if (cfg.protocol.empty()) throw ConfigError("protocol: missing");
    fs::path dir = overrides.out_dir ? *overrides.out_dir
                   : cfg.output_dir  ? fs::path(*cfg.output_dir)
                                     : fs::path("agreelab-out");
    if (!overrides.out_dir && dir.is_relative() && cfg.output_dir) dir = cfg.base_dir / dir;
    const json m = run_experiment(cfg, cfg.protocol, dir);
    write_file_atomic(dir / "metrics.json", m.dump(2) + "\n");
    out << m.dump(2) << "\n";
    return kExitOk;
  });
}

int cmd_design(const fs::path& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = load_config(config);
    if (!cfg.design) throw ConfigError("design: missing section");
    std::vector<double> alphas;
    if (!cfg.design->worst_case) alphas = graph::modal_transform(*cfg.graph).alphas;
    const auto res = design::design_filter(cfg.design->bounds, alphas, cfg.design->grid_points);
    out << "omega_n " << fmt(res.params.omega_n) << "\n";
    out << "tau " << fmt(res.params.tau) << "\n";
    out << "zeta " << fmt(res.params.zeta) << "\n";
    out << "h2_drift " << fmt(res.h2) << "\n";
    const std::vector<double> check = alphas.empty() ? std::vector<double>{-1.0, 1.0} : alphas;
    for (double a : check) {
      const bool ok = a < 1.0 - 1e-9 ? numerics::routh_hurwitz_stable(design::mode_denominator(res.params, a))
                                     : design::feasible(res.params, {});
      out << "feasible alpha=" << fmt(a) << ' ' << (ok ? "yes" : "no") << "\n";
    }
    return kExitOk;
  });
}

int cmd_reproduce(const std::string& scenario, const std::optional<fs::path>& out_dir, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    static const std::vector<std::string> known{"nominal", "noise", "dist", "dist-pi"};
    if (std::find(known.begin(), known.end(), scenario) == known.end())
      throw ConfigError("unknown scenario '" + scenario + "' (expected nominal, noise, dist or dist-pi)");
    const auto cfg = load_config(data_dir() / "scenarios" / (scenario + ".json"));
    const fs::path root = (out_dir ? *out_dir : fs::path("agreelab-out")) / scenario;

    json cmp = json::object();
    cmp["scenario"] = scenario;
    std::map<std::string, json> per;
    for (const std::string proto : {"classic", "twodof"}) {
      const json m = run_experiment(cfg, proto, root / proto);
      write_file_atomic(root / proto / "metrics.json", m.dump(2) + "\n");
      for (const auto& [k, v] : m.items())
        if (k != "protocol") cmp[proto + "_" + k] = v;
      per[proto] = m;
    }
    auto ratio = [&](const std::string& key) -> json {
      const json& a = per["twodof"][key];
      const json& b = per["classic"][key];
      if (!a.is_number() || !b.is_number() || b.get<double>() == 0.0) return nullptr;
      return a.get<double>() / b.get<double>();
    };
    cmp["drift_ratio"] = ratio("drift_slope");
    cmp["output_drift_ratio"] = ratio("output_drift_rate");
    for (double t : cfg.sim.disagreement_times) {
      const std::string key = "disagreement_norm_at_" + time_key(t);
      cmp["disagreement_ratio_at_" + time_key(t)] = ratio(key);
    }
    write_file_atomic(root / "metrics.json", cmp.dump(2) + "\n");
    out << cmp.dump(2) << "\n";
    return kExitOk;
  });
}

}  // namespace agreelab::cli
