#include "agreelab/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>

namespace agreelab::cli {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw ConfigError((path.empty() ? key : path + "." + key) + ": unknown key");
}

std::string sub(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) throw ConfigError(path + ": must be positive");
  return v;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

const json& need(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ConfigError(sub(path, key) + ": missing");
  return j.at(key);
}

TfSpec parse_tf(const json& j, const std::string& path) {
  only_keys(j, path, {"num", "den"});
  TfSpec t{numbers(need(j, path, "num"), sub(path, "num")), numbers(need(j, path, "den"), sub(path, "den"))};
  if (t.num.empty() || t.den.empty()) throw ConfigError(path + ": empty coefficient list");
  if (std::all_of(t.den.begin(), t.den.end(), [](double c) { return c == 0.0; }))
    throw ConfigError(path + ".den: denominator is zero");
  return t;
}

json tf_json(const TfSpec& t) { return json{{"num", t.num}, {"den", t.den}}; }

AgentSpec parse_agent(const json& j, const std::string& path) {
  only_keys(j, path, {"plant", "controller"});
  AgentSpec a;
  a.plant = parse_tf(need(j, path, "plant"), sub(path, "plant"));
  if (j.contains("controller")) a.controller = parse_tf(j.at("controller"), sub(path, "controller"));
  return a;
}

graph::Graph parse_inline_graph(const json& j, const std::string& path) {
  const int n = integer(need(j, path, "n"), sub(path, "n"));
  const json& es = need(j, path, "edges");
  if (!es.is_array()) throw ConfigError(path + ".edges: expected an array of pairs");
  std::vector<graph::Graph::Edge> edges;
  for (std::size_t k = 0; k < es.size(); ++k) {
    const std::string ep = path + ".edges[" + std::to_string(k) + "]";
    if (!es[k].is_array() || es[k].size() != 2) throw ConfigError(ep + ": expected [i, j]");
    edges.emplace_back(integer(es[k][0], ep) - 1, integer(es[k][1], ep) - 1);
  }
  try {
    return graph::Graph(n, std::move(edges));
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

design::Interval parse_interval(const json& j, const std::string& path) {
  const auto v = numbers(j, path);
  if (v.size() != 2 || !(v[0] > 0.0) || !(v[1] >= v[0])) throw ConfigError(path + ": expected [lo, hi] with 0 < lo <= hi");
  return {v[0], v[1]};
}

}  // namespace

lti::RationalTF NetworkFilterSpec::tf() const {
  return params ? design::make_filter(*params) : coeffs->tf();
}

std::string to_string(NoiseModel m) { return m == NoiseModel::kPerLink ? "per_link" : "per_agent"; }

ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  only_keys(j, "", {"graph", "agents", "protocol", "classic", "twodof", "signals", "sim", "outputs", "design"});
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;

  if (j.contains("graph")) {
    const json& g = j.at("graph");
    only_keys(g, "graph", {"file", "n", "edges"});
    if (g.contains("file")) {
      if (g.contains("n") || g.contains("edges")) throw ConfigError("graph: give either file or n/edges");
      if (!g.at("file").is_string()) throw ConfigError("graph.file: expected a path");
      cfg.graph_file = g.at("file").get<std::string>();
      std::filesystem::path p(*cfg.graph_file);
      if (p.is_relative()) p = base_dir / p;
      try {
        cfg.graph = graph::read_graph_file(p);
      } catch (const Error& e) {
        throw ConfigError(std::string("graph.file: ") + e.what());
      }
    } else {
      cfg.graph = parse_inline_graph(g, "graph");
    }
  }

  if (j.contains("agents")) {
    const json& a = j.at("agents");
    if (a.is_array()) {
      for (std::size_t k = 0; k < a.size(); ++k) cfg.agents.push_back(parse_agent(a[k], "agents[" + std::to_string(k) + "]"));
    } else {
      only_keys(a, "agents", {"default", "overrides"});
      if (!cfg.graph) throw ConfigError("agents.default: needs a graph to know the agent count");
      const AgentSpec def = parse_agent(need(a, "agents", "default"), "agents.default");
      cfg.agents.assign(static_cast<std::size_t>(cfg.graph->nodes()), def);
      if (a.contains("overrides")) {
        const json& o = a.at("overrides");
        if (!o.is_object()) throw ConfigError("agents.overrides: expected an object keyed by agent number");
        for (const auto& [key, value] : o.items()) {
          const std::string p = "agents.overrides." + key;
          int idx = 0;
          try {
            std::size_t used = 0;
            idx = std::stoi(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
          } catch (const std::exception&) {
            throw ConfigError(p + ": key must be an agent number");
          }
          if (idx < 1 || idx > cfg.graph->nodes()) throw ConfigError(p + ": agent out of range");
          cfg.agents[static_cast<std::size_t>(idx - 1)] = parse_agent(value, p);
        }
      }
    }
    if (cfg.graph && static_cast<int>(cfg.agents.size()) != cfg.graph->nodes())
      throw ConfigError("agents: expected " + std::to_string(cfg.graph->nodes()) + " entries");
  }

  if (j.contains("protocol")) {
    if (!j.at("protocol").is_string()) throw ConfigError("protocol: expected \"classic\" or \"twodof\"");
    cfg.protocol = j.at("protocol").get<std::string>();
    if (cfg.protocol != "classic" && cfg.protocol != "twodof") throw ConfigError("protocol: expected \"classic\" or \"twodof\"");
  }

  if (j.contains("classic")) {
    const json& c = j.at("classic");
    only_keys(c, "classic", {"gain", "gains", "filter"});
    ClassicSpec cs;
    if (c.contains("gain") == c.contains("gains")) throw ConfigError("classic: give exactly one of gain, gains");
    if (c.contains("gain")) {
      if (!cfg.graph) throw ConfigError("classic.gain: needs a graph to know the agent count");
      cs.gains.assign(static_cast<std::size_t>(cfg.graph->nodes()), positive(c.at("gain"), "classic.gain"));
    } else {
      cs.gains = numbers(c.at("gains"), "classic.gains");
      for (std::size_t k = 0; k < cs.gains.size(); ++k)
        if (!(cs.gains[k] > 0.0)) throw ConfigError("classic.gains[" + std::to_string(k) + "]: must be positive");
      if (cfg.graph && static_cast<int>(cs.gains.size()) != cfg.graph->nodes())
        throw ConfigError("classic.gains: expected one gain per agent");
    }
    if (c.contains("filter")) cs.filter = parse_tf(c.at("filter"), "classic.filter");
    cfg.classic = cs;
  }

  if (j.contains("twodof")) {
    const json& t = j.at("twodof");
    only_keys(t, "twodof", {"network_filter"});
    const json& f = need(t, "twodof", "network_filter");
    NetworkFilterSpec nf;
    if (f.is_object() && f.contains("num")) {
      nf.coeffs = parse_tf(f, "twodof.network_filter");
    } else {
      only_keys(f, "twodof.network_filter", {"omega_n", "tau", "zeta"});
      const std::string p = "twodof.network_filter";
      nf.params = design::FilterParams{positive(need(f, p, "omega_n"), p + ".omega_n"),
                                       positive(need(f, p, "tau"), p + ".tau"),
                                       positive(need(f, p, "zeta"), p + ".zeta")};
    }
    cfg.twodof = nf;
  }

  if (j.contains("signals")) {
    const json& s = j.at("signals");
    only_keys(s, "signals", {"disturbance", "noise"});
    if (s.contains("disturbance")) {
      const json& d = s.at("disturbance");
      if (!d.is_array()) throw ConfigError("signals.disturbance: expected an array");
      for (std::size_t k = 0; k < d.size(); ++k) {
        const std::string p = "signals.disturbance[" + std::to_string(k) + "]";
        only_keys(d[k], p, {"agent", "amplitude", "onset"});
        DisturbanceSpec ds;
        ds.agent = integer(need(d[k], p, "agent"), p + ".agent");
        if (cfg.graph && (ds.agent < 1 || ds.agent > cfg.graph->nodes())) throw ConfigError(p + ".agent: out of range");
        if (d[k].contains("amplitude")) ds.amplitude = number(d[k].at("amplitude"), p + ".amplitude");
        if (d[k].contains("onset")) ds.onset = number(d[k].at("onset"), p + ".onset");
        if (ds.onset < 0.0) throw ConfigError(p + ".onset: must be non-negative");
        cfg.disturbances.push_back(ds);
      }
    }
    if (s.contains("noise")) {
      const json& n = s.at("noise");
      only_keys(n, "signals.noise", {"intensity", "onset", "model"});
      NoiseSpec ns;
      if (n.contains("intensity")) ns.intensity = number(n.at("intensity"), "signals.noise.intensity");
      if (ns.intensity < 0.0) throw ConfigError("signals.noise.intensity: must be non-negative");
      if (n.contains("onset")) ns.onset = number(n.at("onset"), "signals.noise.onset");
      if (ns.onset < 0.0) throw ConfigError("signals.noise.onset: must be non-negative");
      if (n.contains("model")) {
        const json& m = n.at("model");
        if (m == "per_link") ns.model = NoiseModel::kPerLink;
        else if (m == "per_agent") ns.model = NoiseModel::kPerAgent;
        else throw ConfigError("signals.noise.model: expected \"per_link\" or \"per_agent\"");
      }
      cfg.noise = ns;
    }
  }

  if (j.contains("sim")) {
    const json& s = j.at("sim");
    only_keys(s, "sim", {"dt", "T", "y0", "seed", "realizations", "record_stride", "band", "disagreement_times"});
    SimSpec& sp = cfg.sim;
    if (s.contains("dt")) sp.dt = positive(s.at("dt"), "sim.dt");
    if (s.contains("T")) sp.t_final = positive(s.at("T"), "sim.T");
    if (s.contains("y0")) sp.y0 = numbers(s.at("y0"), "sim.y0");
    if (s.contains("seed")) {
      if (!s.at("seed").is_number_unsigned()) throw ConfigError("sim.seed: expected a non-negative integer");
      sp.seed = s.at("seed").get<std::uint64_t>();
    }
    if (s.contains("realizations")) sp.realizations = integer(s.at("realizations"), "sim.realizations");
    if (sp.realizations < 1) throw ConfigError("sim.realizations: must be at least 1");
    if (s.contains("record_stride")) sp.record_stride = integer(s.at("record_stride"), "sim.record_stride");
    if (sp.record_stride < 1) throw ConfigError("sim.record_stride: must be at least 1");
    if (s.contains("band")) sp.band = positive(s.at("band"), "sim.band");
    if (s.contains("disagreement_times")) sp.disagreement_times = numbers(s.at("disagreement_times"), "sim.disagreement_times");
  }
  if (cfg.graph) {
    if (cfg.sim.y0.empty()) cfg.sim.y0.assign(static_cast<std::size_t>(cfg.graph->nodes()), 0.0);
    if (static_cast<int>(cfg.sim.y0.size()) != cfg.graph->nodes()) throw ConfigError("sim.y0: expected one value per agent");
  }

  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    only_keys(o, "outputs", {"directory"});
    if (!need(o, "outputs", "directory").is_string()) throw ConfigError("outputs.directory: expected a path");
    cfg.output_dir = o.at("directory").get<std::string>();
  }

  if (j.contains("design")) {
    const json& d = j.at("design");
    only_keys(d, "design", {"bounds", "worst_case", "grid_points"});
    DesignSpec ds;
    const json& b = need(d, "design", "bounds");
    only_keys(b, "design.bounds", {"omega_n", "tau", "zeta"});
    ds.bounds.omega_n = parse_interval(need(b, "design.bounds", "omega_n"), "design.bounds.omega_n");
    ds.bounds.tau = parse_interval(need(b, "design.bounds", "tau"), "design.bounds.tau");
    ds.bounds.zeta = parse_interval(need(b, "design.bounds", "zeta"), "design.bounds.zeta");
    if (d.contains("worst_case")) {
      if (!d.at("worst_case").is_boolean()) throw ConfigError("design.worst_case: expected true or false");
      ds.worst_case = d.at("worst_case").get<bool>();
    }
    if (!ds.worst_case && !cfg.graph) throw ConfigError("design.worst_case: false needs a graph");
    if (d.contains("grid_points")) ds.grid_points = integer(d.at("grid_points"), "design.grid_points");
    if (ds.grid_points < 20) throw ConfigError("design.grid_points: must be at least 20");
    cfg.design = ds;
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

json to_json(const ExperimentConfig& cfg) {
  json j = json::object();
  if (cfg.graph_file) {
    j["graph"] = {{"file", *cfg.graph_file}};
  } else if (cfg.graph) {
    json edges = json::array();
    for (const auto& [a, b] : cfg.graph->edges()) edges.push_back({a + 1, b + 1});
    j["graph"] = {{"n", cfg.graph->nodes()}, {"edges", edges}};
  }
  if (!cfg.agents.empty()) {
    json agents = json::array();
    for (const auto& a : cfg.agents) {
      json aj = {{"plant", tf_json(a.plant)}};
      if (a.controller) aj["controller"] = tf_json(*a.controller);
      agents.push_back(aj);
    }
    j["agents"] = agents;
  }
  if (!cfg.protocol.empty()) j["protocol"] = cfg.protocol;
  if (cfg.classic) j["classic"] = {{"gains", cfg.classic->gains}, {"filter", tf_json(cfg.classic->filter)}};
  if (cfg.twodof) {
    const auto& nf = *cfg.twodof;
    j["twodof"]["network_filter"] =
        nf.params ? json{{"omega_n", nf.params->omega_n}, {"tau", nf.params->tau}, {"zeta", nf.params->zeta}}
                  : tf_json(*nf.coeffs);
  }
  if (!cfg.disturbances.empty() || cfg.noise) {
    json s = json::object();
    if (!cfg.disturbances.empty()) {
      s["disturbance"] = json::array();
      for (const auto& d : cfg.disturbances)
        s["disturbance"].push_back({{"agent", d.agent}, {"amplitude", d.amplitude}, {"onset", d.onset}});
    }
    if (cfg.noise)
      s["noise"] = {{"intensity", cfg.noise->intensity}, {"onset", cfg.noise->onset}, {"model", to_string(cfg.noise->model)}};
    j["signals"] = s;
  }
  const SimSpec& sp = cfg.sim;
  j["sim"] = {{"dt", sp.dt},         {"T", sp.t_final},
              {"y0", sp.y0},         {"seed", sp.seed},
              {"realizations", sp.realizations}, {"record_stride", sp.record_stride},
              {"band", sp.band},     {"disagreement_times", sp.disagreement_times}};
  if (cfg.output_dir) j["outputs"] = {{"directory", *cfg.output_dir}};
  if (cfg.design) {
    const auto& b = cfg.design->bounds;
    j["design"] = {{"bounds",
                    {{"omega_n", {b.omega_n.lo, b.omega_n.hi}}, {"tau", {b.tau.lo, b.tau.hi}}, {"zeta", {b.zeta.lo, b.zeta.hi}}}},
                   {"worst_case", cfg.design->worst_case},
                   {"grid_points", cfg.design->grid_points}};
  }
  return j;
}

std::vector<protocol::AgentModel> agent_models(const ExperimentConfig& cfg) {
  std::vector<protocol::AgentModel> out;
  for (const auto& a : cfg.agents)
    out.push_back({a.plant.tf(), a.controller ? a.controller->tf() : lti::RationalTF()});
  return out;
}

protocol::ClosedLoop build_loop(const ExperimentConfig& cfg, const std::string& protocol) {
  if (!cfg.graph) throw ConfigError("graph: missing");
  if (cfg.agents.empty()) throw ConfigError("agents: missing");
  const auto agents = agent_models(cfg);
  if (protocol == "classic") {
    if (!cfg.classic) throw ConfigError("classic: missing section for the classic protocol");
    return protocol::build_classic(*cfg.graph, agents, {cfg.classic->gains, cfg.classic->filter.tf()});
  }
  if (protocol == "twodof") {
    if (!cfg.twodof) throw ConfigError("twodof: missing section for the twodof protocol");
    for (std::size_t k = 0; k < cfg.agents.size(); ++k)
      if (!cfg.agents[k].controller) throw ConfigError("agents[" + std::to_string(k) + "].controller: missing for twodof");
    return protocol::build_2dof(*cfg.graph, agents, {cfg.twodof->tf()});
  }
  throw ConfigError("protocol: expected \"classic\" or \"twodof\"");
}

sim::ChannelSignals disturbance_signals(const ExperimentConfig& cfg) {
  if (cfg.disturbances.empty() || !cfg.graph) return {};
  sim::ChannelSignals out(static_cast<std::size_t>(cfg.graph->nodes()));
  for (const auto& d : cfg.disturbances) {
    auto& slot = out[static_cast<std::size_t>(d.agent - 1)];
    if (slot.kind != sim::SignalSpec::Kind::kZero) throw ConfigError("signals.disturbance: agent listed twice");
    slot = sim::SignalSpec::step(d.amplitude, d.onset);
  }
  return out;
}

sim::ChannelSignals noise_signals(const ExperimentConfig& cfg) {
  if (!cfg.noise || !cfg.graph || cfg.noise->intensity == 0.0) return {};
  const auto deg = cfg.graph->degrees();
  sim::ChannelSignals out;
  for (int d : deg) {
    const double q = cfg.noise->model == NoiseModel::kPerLink ? cfg.noise->intensity / d : cfg.noise->intensity;
    out.push_back(sim::SignalSpec::white_noise(q, cfg.noise->onset));
  }
  return out;
}

sim::SimOptions sim_options(const ExperimentConfig& cfg) {
  return {cfg.sim.dt, cfg.sim.t_final, cfg.sim.record_stride};
}

}  // namespace agreelab::cli
