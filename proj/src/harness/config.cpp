#include "scdestim/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace scdestim::harness {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!known) throw ConfigError(fmt::format("{}: unknown key '{}'", path, key));
  }
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(fmt::format("{}: missing '{}'", path, key));
  return obj.at(key);
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError(path + ": expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

Eigen::VectorXd get_vector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path + ": expected a nonempty array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t r = 0; r < v.size(); ++r) {
    out(static_cast<Eigen::Index>(r)) = get_number(v[r], fmt::format("{}[{}]", path, r));
  }
  return out;
}

Eigen::MatrixXd get_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty() || !v[0].is_array()) {
    throw ConfigError(path + ": expected a nonempty array of rows");
  }
  const std::size_t cols = v[0].size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < v.size(); ++r) {
    const auto row = get_vector(v[r], fmt::format("{}[{}]", path, r));
    if (static_cast<std::size_t>(row.size()) != cols) throw ConfigError(path + ": ragged rows");
    out.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index r = 0; r < v.size(); ++r) out.push_back(v(r));
  return out;
}

Topology parse_topology(const json& t) {
  const std::string path = "topology";
  check_keys(t, path, {"n_sensors", "edges"});
  const auto n = get_count(require(t, "n_sensors", path), path + ".n_sensors");
  const json& edges = require(t, "edges", path);
  if (!edges.is_array()) throw ConfigError(path + ".edges: expected an array");
  std::vector<EdgeSpec> specs;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::string ep = fmt::format("{}.edges[{}]", path, e);
    const json& triple = edges[e];
    if (!triple.is_array() || triple.size() != 3) throw ConfigError(ep + ": expected [i, j, weight]");
    specs.push_back({get_count(triple[0], ep), get_count(triple[1], ep), get_number(triple[2], ep)});
  }
  try {
    return Topology::build(n, specs);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(path + ": " + err.what());
  }
}

ObservationModel parse_model(const json& m) {
  const std::string path = "model";
  check_keys(m, path, {"theta", "sensors", "noise_factor"});
  ObservationModel model;
  model.theta = get_vector(require(m, "theta", path), path + ".theta");
  const json& sensors = require(m, "sensors", path);
  if (!sensors.is_array()) throw ConfigError(path + ".sensors: expected an array");
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const std::string sp = fmt::format("{}.sensors[{}]", path, i);
    const json& s = sensors[i];
    check_keys(s, sp, {"h", "h_periodic", "h_table", "noise_std"});
    const int forms = static_cast<int>(s.contains("h")) + static_cast<int>(s.contains("h_periodic")) +
                      static_cast<int>(s.contains("h_table"));
    if (forms != 1) throw ConfigError(sp + ": give exactly one of h, h_periodic, h_table");
    SensorObservation obs;
    if (s.contains("h")) {
      obs.h = HSchedule::constant(get_matrix(s.at("h"), sp + ".h"));
    } else {
      const char* key = s.contains("h_periodic") ? "h_periodic" : "h_table";
      const json& list = s.at(key);
      if (!list.is_array() || list.empty()) throw ConfigError(sp + "." + key + ": expected matrices");
      std::vector<Eigen::MatrixXd> table;
      for (std::size_t t = 0; t < list.size(); ++t) {
        table.push_back(get_matrix(list[t], fmt::format("{}.{}[{}]", sp, key, t)));
      }
      obs.h = s.contains("h_periodic") ? HSchedule::periodic(std::move(table))
                                       : HSchedule::explicit_table(std::move(table));
    }
    obs.noise_std = s.contains("noise_std") ? get_number(s.at("noise_std"), sp + ".noise_std") : 0.0;
    model.sensors.push_back(std::move(obs));
  }
  if (m.contains("noise_factor")) model.noise_factor = get_matrix(m.at("noise_factor"), path + ".noise_factor");
  try {
    model.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(path + ": " + err.what());
  }
  return model;
}

struct ChannelFields {
  std::optional<double> nu, b, alpha1, gamma;
};

void read_channel_fields(const json& obj, const std::string& path, ChannelFields& f) {
  if (obj.contains("nu")) f.nu = get_number(obj.at("nu"), path + ".nu");
  if (obj.contains("b")) f.b = get_number(obj.at("b"), path + ".b");
  if (obj.contains("alpha1")) f.alpha1 = get_number(obj.at("alpha1"), path + ".alpha1");
  if (obj.contains("gamma")) f.gamma = get_number(obj.at("gamma"), path + ".gamma");
}

std::vector<ChannelParams> parse_channels(const json& c, const Topology& topology) {
  const std::string path = "channels";
  check_keys(c, path, {"default", "edges"});
  std::vector<ChannelFields> fields(topology.edge_count());
  if (c.contains("default")) {
    check_keys(c.at("default"), path + ".default", {"nu", "b", "alpha1", "gamma"});
    ChannelFields d;
    read_channel_fields(c.at("default"), path + ".default", d);
    std::fill(fields.begin(), fields.end(), d);
  }
  if (c.contains("edges")) {
    const json& edges = c.at("edges");
    if (!edges.is_array()) throw ConfigError(path + ".edges: expected an array");
    std::set<long> seen;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::string ep = fmt::format("{}.edges[{}]", path, e);
      check_keys(edges[e], ep, {"edge", "nu", "b", "alpha1", "gamma"});
      const json& pair = require(edges[e], "edge", ep);
      if (!pair.is_array() || pair.size() != 2) throw ConfigError(ep + ".edge: expected [i, j]");
      const auto i = get_count(pair[0], ep + ".edge");
      const auto j = get_count(pair[1], ep + ".edge");
      const long id = (i >= 1 && j >= 1) ? topology.edge_index(i - 1, j - 1) : -1;
      if (id < 0) throw ConfigError(fmt::format("{}: ({}, {}) is not an edge", ep, i, j));
      if (!seen.insert(id).second) throw ConfigError(fmt::format("{}: ({}, {}) listed twice", ep, i, j));
      read_channel_fields(edges[e], ep, fields[static_cast<std::size_t>(id)]);
    }
  }
  std::vector<ChannelParams> out;
  for (std::size_t e = 0; e < fields.size(); ++e) {
    const auto& f = fields[e];
    const auto& edge = topology.edges()[e];
    const std::string ep = fmt::format("channels for edge ({}, {})", edge.i + 1, edge.j + 1);
    if (!f.nu || !f.b || !f.alpha1 || !f.gamma) throw ConfigError(ep + ": nu, b, alpha1, gamma all required");
    ChannelParams p;
    p.nu = *f.nu;
    p.b = *f.b;
    try {
      p.alpha = StepSchedule::polynomial(*f.alpha1, *f.gamma);
      p.validate();
    } catch (const std::invalid_argument& err) {
      throw ConfigError(ep + ": " + err.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<StepSchedule> parse_beta(const json& b, std::size_t n) {
  const std::string path = "beta";
  check_keys(b, path, {"default", "sensors"});
  std::vector<std::optional<double>> initial(n), exponent(n);
  if (b.contains("default")) {
    const json& d = b.at("default");
    check_keys(d, path + ".default", {"beta1", "exponent"});
    for (std::size_t i = 0; i < n; ++i) {
      if (d.contains("beta1")) initial[i] = get_number(d.at("beta1"), path + ".default.beta1");
      if (d.contains("exponent")) exponent[i] = get_number(d.at("exponent"), path + ".default.exponent");
    }
  }
  if (b.contains("sensors")) {
    const json& list = b.at("sensors");
    if (!list.is_array()) throw ConfigError(path + ".sensors: expected an array");
    std::set<std::uint64_t> seen;
    for (std::size_t e = 0; e < list.size(); ++e) {
      const std::string sp = fmt::format("{}.sensors[{}]", path, e);
      check_keys(list[e], sp, {"sensor", "beta1", "exponent"});
      const auto s = get_count(require(list[e], "sensor", sp), sp + ".sensor");
      if (s < 1 || s > n) throw ConfigError(fmt::format("{}: sensor {} outside 1..{}", sp, s, n));
      if (!seen.insert(s).second) throw ConfigError(fmt::format("{}: sensor {} listed twice", sp, s));
      if (list[e].contains("beta1")) initial[s - 1] = get_number(list[e].at("beta1"), sp + ".beta1");
      if (list[e].contains("exponent")) exponent[s - 1] = get_number(list[e].at("exponent"), sp + ".exponent");
    }
  }
  std::vector<StepSchedule> out;
  for (std::size_t i = 0; i < n; ++i) {
    // The rate theory assumes beta_1 / k; exponent defaults to 1.
    if (!initial[i]) throw ConfigError(fmt::format("beta for sensor {}: beta1 required", i + 1));
    try {
      out.push_back(StepSchedule::polynomial(*initial[i], exponent[i].value_or(1.0)));
    } catch (const std::invalid_argument& err) {
      throw ConfigError(fmt::format("beta for sensor {}: {}", i + 1, err.what()));
    }
  }
  return out;
}

ExperimentSettings parse_experiment(const json& e, ExperimentSettings s) {
  const std::string path = "experiment";
  check_keys(e, path,
             {"horizon", "checkpoint_ratio", "runs", "seed", "output_dir", "nu_sweep", "allow_invalid_stepsizes"});
  if (e.contains("horizon")) s.horizon = get_count(e.at("horizon"), path + ".horizon");
  if (e.contains("checkpoint_ratio")) {
    s.checkpoint_ratio = get_number(e.at("checkpoint_ratio"), path + ".checkpoint_ratio");
    if (!(s.checkpoint_ratio > 1.0)) throw ConfigError(path + ".checkpoint_ratio: must exceed 1");
  }
  if (e.contains("runs")) {
    s.runs = get_count(e.at("runs"), path + ".runs");
    if (s.runs == 0) throw ConfigError(path + ".runs: must be >= 1");
  }
  if (e.contains("seed")) s.seed = get_count(e.at("seed"), path + ".seed");
  if (e.contains("output_dir")) {
    if (!e.at("output_dir").is_string()) throw ConfigError(path + ".output_dir: expected a string");
    s.output_dir = e.at("output_dir").get<std::string>();
  }
  if (e.contains("nu_sweep")) {
    const json& list = e.at("nu_sweep");
    if (!list.is_array()) throw ConfigError(path + ".nu_sweep: expected an array");
    s.nu_sweep.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      s.nu_sweep.push_back(get_number(list[i], fmt::format("{}.nu_sweep[{}]", path, i)));
    }
  }
  if (e.contains("allow_invalid_stepsizes")) {
    if (!e.at("allow_invalid_stepsizes").is_boolean()) {
      throw ConfigError(path + ".allow_invalid_stepsizes: expected a boolean");
    }
    s.allow_invalid_stepsizes = e.at("allow_invalid_stepsizes").get<bool>();
  }
  return s;
}

ExperimentConfig preset_by_name(const std::string& name) {
  if (name == "paper-sec7") return paper_sec7_preset();
  if (name == "paper-sweep") return paper_sweep_preset();
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a top-level object");
  if (doc.contains("preset")) {
    check_keys(doc, "config", {"preset", "experiment"});
    if (!doc.at("preset").is_string()) throw ConfigError("preset: expected a string");
    ExperimentConfig cfg = preset_by_name(doc.at("preset").get<std::string>());
    if (doc.contains("experiment")) cfg.experiment = parse_experiment(doc.at("experiment"), cfg.experiment);
    return cfg;
  }
  check_keys(doc, "config",
             {"topology", "model", "channels", "beta", "initial_estimates", "excitation_window", "experiment"});
  ExperimentConfig cfg;
  auto& est = cfg.estimator;
  est.topology = parse_topology(require(doc, "topology", "config"));
  est.model = parse_model(require(doc, "model", "config"));
  if (est.model.n_sensors() != est.topology.n_sensors()) {
    throw ConfigError(fmt::format("model.sensors: {} entries for {} sensors", est.model.n_sensors(),
                                  est.topology.n_sensors()));
  }
  est.channels = parse_channels(require(doc, "channels", "config"), est.topology);
  est.beta = parse_beta(require(doc, "beta", "config"), est.topology.n_sensors());
  if (doc.contains("initial_estimates")) {
    const json& list = doc.at("initial_estimates");
    if (!list.is_array() || list.size() != est.topology.n_sensors()) {
      throw ConfigError("initial_estimates: expected one vector per sensor");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      est.initial_estimates.push_back(get_vector(list[i], fmt::format("initial_estimates[{}]", i)));
    }
  }
  if (doc.contains("excitation_window")) {
    est.excitation_window = get_count(doc.at("excitation_window"), "excitation_window");
    if (est.excitation_window == 0) throw ConfigError("excitation_window: must be >= 1");
  }
  if (doc.contains("experiment")) cfg.experiment = parse_experiment(doc.at("experiment"), cfg.experiment);
  try {
    est.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("config: ") + err.what());
  }
  return cfg;
}

json config_to_json(const ExperimentConfig& config) {
  const auto& est = config.estimator;
  json doc;

  json edges = json::array();
  for (const auto& e : est.topology.edge_specs()) edges.push_back({e.i, e.j, e.weight});
  doc["topology"] = {{"n_sensors", est.topology.n_sensors()}, {"edges", std::move(edges)}};

  json sensors = json::array();
  for (const auto& s : est.model.sensors) {
    json entry;
    switch (s.h.kind()) {
      case HScheduleKind::constant:
        entry["h"] = matrix_json(s.h.support().front());
        break;
      case HScheduleKind::periodic:
      case HScheduleKind::table: {
        json list = json::array();
        for (const auto& h : s.h.support()) list.push_back(matrix_json(h));
        entry[s.h.kind() == HScheduleKind::periodic ? "h_periodic" : "h_table"] = std::move(list);
        break;
      }
    }
    entry["noise_std"] = s.noise_std;
    sensors.push_back(std::move(entry));
  }
  doc["model"] = {{"theta", vector_json(est.model.theta)}, {"sensors", std::move(sensors)}};
  if (est.model.noise_factor) doc["model"]["noise_factor"] = matrix_json(*est.model.noise_factor);

  json channels = json::array();
  for (std::size_t e = 0; e < est.channels.size(); ++e) {
    const auto& c = est.channels[e];
    if (!c.alpha.is_polynomial()) throw ConfigError("custom alpha schedules cannot be serialised");
    const auto& edge = est.topology.edges()[e];
    channels.push_back({{"edge", {edge.i + 1, edge.j + 1}},
                        {"nu", c.nu},
                        {"b", c.b},
                        {"alpha1", c.alpha.initial()},
                        {"gamma", c.alpha.exponent()}});
  }
  doc["channels"] = {{"edges", std::move(channels)}};

  json betas = json::array();
  for (std::size_t i = 0; i < est.beta.size(); ++i) {
    if (!est.beta[i].is_polynomial()) throw ConfigError("custom beta schedules cannot be serialised");
    betas.push_back({{"sensor", i + 1}, {"beta1", est.beta[i].initial()}, {"exponent", est.beta[i].exponent()}});
  }
  doc["beta"] = {{"sensors", std::move(betas)}};

  if (!est.initial_estimates.empty()) {
    json init = json::array();
    for (const auto& v : est.initial_estimates) init.push_back(vector_json(v));
    doc["initial_estimates"] = std::move(init);
  }
  doc["excitation_window"] = est.excitation_window;

  const auto& x = config.experiment;
  doc["experiment"] = {{"horizon", x.horizon},
                       {"checkpoint_ratio", x.checkpoint_ratio},
                       {"runs", x.runs},
                       {"seed", x.seed},
                       {"output_dir", x.output_dir},
                       {"nu_sweep", x.nu_sweep},
                       {"allow_invalid_stepsizes", x.allow_invalid_stepsizes}};
  return doc;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& err) {
    throw ConfigError(path.string() + ": " + err.what());
  }
  return config_from_json(doc);
}

ExperimentConfig load_config_or_preset(const std::string& spec) {
  if (spec == "paper-sec7" || spec == "paper-sweep") return preset_by_name(spec);
  return load_config(spec);
}

ExperimentConfig paper_sec7_preset() {
  ExperimentConfig cfg;
  auto& est = cfg.estimator;
  est.topology = paper_topology();
  est.model = paper_observation_model();
  ChannelParams p;
  p.nu = 0.25;
  p.b = 0.5;
  p.alpha = StepSchedule::polynomial(5.0, 0.75);
  est.channels.assign(est.topology.edge_count(), p);
  est.beta.assign(est.topology.n_sensors(), StepSchedule::polynomial(5.0, 1.0));
  cfg.experiment.horizon = 100000;
  cfg.experiment.runs = 20;
  cfg.experiment.seed = 1;
  cfg.experiment.output_dir = "out/paper-sec7";
  return cfg;
}

ExperimentConfig paper_sweep_preset() {
  ExperimentConfig cfg = paper_sec7_preset();
  cfg.experiment.runs = 50;
  cfg.experiment.output_dir = "out/paper-sweep";
  cfg.experiment.nu_sweep = {0.0, 1.0 / 9.0, 2.0 / 9.0, 3.0 / 9.0, 4.0 / 9.0};
  return with_uniform_nu(cfg, 0.0);
}

ExperimentConfig with_uniform_nu(const ExperimentConfig& config, double nu) {
  ExperimentConfig out = config;
  for (auto& c : out.estimator.channels) {
    c.nu = nu;
    c.alpha = StepSchedule::polynomial(c.alpha.initial(), 1.0 - nu);
  }
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  auto doc = config_to_json(config);
  doc["experiment"].erase("output_dir");  // where results go does not change them
  const std::string text = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace scdestim::harness
