#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scdestim/consensus.hpp"
#include "scdestim/graph.hpp"
#include "scdestim/harness/analysis.hpp"
#include "scdestim/harness/config.hpp"
#include "scdestim/harness/experiment.hpp"
#include "scdestim/quantizer.hpp"
#include "scdestim/theory.hpp"
#include "scdestim/version.hpp"

namespace py = pybind11;
using namespace scdestim;

namespace {

using EdgeTuple = std::tuple<std::size_t, std::size_t, double>;

Topology to_topology(std::size_t n, const std::vector<EdgeTuple>& edges) {
  std::vector<EdgeSpec> specs;
  for (const auto& [i, j, w] : edges) specs.push_back({i, j, w});
  return Topology::build(n, specs);
}

harness::ExperimentConfig parse(const std::string& text) {
  return harness::config_from_json(nlohmann::json::parse(text, nullptr, true, true));
}

py::dict series(const harness::ExperimentResult& r) {
  std::vector<std::uint64_t> k;
  std::vector<double> mse, rate, bits;
  for (const auto& p : r.aggregate) {
    k.push_back(p.k);
    mse.push_back(p.mse_mean);
    rate.push_back(p.global_rate);
    bits.push_back(p.bits_total);
  }
  py::dict d;
  d["k"] = k;
  d["mse_mean"] = mse;
  d["global_rate"] = rate;
  d["bits_total"] = bits;
  d["runs"] = r.runs.size();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<harness::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("lambda2", [](std::size_t n, const std::vector<EdgeTuple>& edges) { return laplacian(to_topology(n, edges)).lambda2; },
        py::arg("n_sensors"), py::arg("edges"), "Algebraic connectivity; edges are 1-based (i, j, weight).");
  m.def("is_connected", [](std::size_t n, const std::vector<EdgeTuple>& edges) { return check_connected(to_topology(n, edges)); },
        py::arg("n_sensors"), py::arg("edges"));
  m.def("paper_edges", [] {
    std::vector<EdgeTuple> out;
    for (const auto& e : paper_topology().edge_specs()) out.emplace_back(e.i, e.j, e.weight);
    return out;
  });

  m.def("laplace_cdf", &laplace_cdf, py::arg("x"));
  m.def("threshold", &threshold, py::arg("nu"), py::arg("b"), py::arg("k"));
  m.def("fusion_g", &fusion_g, py::arg("x"), py::arg("nu"), py::arg("b"), py::arg("k"));
  m.def("trigger_probability", &trigger_probability, py::arg("x"), py::arg("nu"), py::arg("b"), py::arg("k"));
  m.def(
      "channel_step",
      [](double x, double nu, double b, std::uint64_t k, double dither) {
        const ChannelParams p{nu, b, StepSchedule::polynomial(1.0, 1.0)};
        p.validate();
        const auto ev = channel_step(x, p, k, dither);
        return std::make_tuple(ev.s, ev.triggered, ev.s_hat, ev.bits);
      },
      py::arg("x"), py::arg("nu"), py::arg("b"), py::arg("k"), py::arg("dither"),
      "Returns (s, triggered, s_hat, bits).");

  m.def("predict_rate", [](double h, double a) {
    const auto r = predict_rate(h, a);
    return std::make_tuple(to_string(r.rate_class), r.error_slope_loglog);
  });
  m.def("suggest_stepsizes", [](const std::vector<double>& nu, double scale) {
    const auto s = suggest_stepsizes(nu, scale);
    return std::make_tuple(s.gamma, s.alpha1, s.beta1, s.h);
  });

  m.def("preset", [](const std::string& name) {
    return harness::config_to_json(harness::load_config_or_preset(name)).dump();
  }, py::arg("name"), "Preset config as a JSON string.");
  m.def("config_hash", [](const std::string& text) { return harness::config_hash(parse(text)); });
  m.def("validate", [](const std::string& text) {
    const auto rep = harness::validate_experiment(parse(text));
    return std::make_tuple(rep.passed(), rep.to_text());
  }, py::arg("config_json"));
  m.def("predict", [](const std::string& text) {
    const auto t = harness::predict(parse(text));
    py::dict d;
    d["lambda2"] = t.lambda2;
    d["delta"] = t.delta;
    d["h_bar"] = t.h_bar;
    d["rate_theorem_applies"] = t.rate_theorem_applies;
    d["h"] = t.rate.h;
    d["a"] = t.rate.a;
    d["rate_class"] = to_string(t.rate.rate_class);
    d["error_slope_loglog"] = t.rate.error_slope_loglog;
    d["report"] = t.to_text();
    return d;
  }, py::arg("config_json"));
  m.def("run_experiment", [](const std::string& text, unsigned workers) {
    const auto config = parse(text);
    harness::ExperimentResult r;
    {
      py::gil_scoped_release release;
      r = harness::run_experiment(config, workers == 0 ? harness::default_workers() : workers);
    }
    return series(r);
  }, py::arg("config_json"), py::arg("workers") = 0,
        "Runs the experiment and returns the aggregate series.");

  m.def("run_consensus",
        [](std::size_t n, const std::vector<EdgeTuple>& edges, double c, double alpha1, double gamma,
           const std::vector<double>& initial, std::uint64_t horizon, std::uint64_t seed) {
          ConsensusConfig cfg;
          cfg.topology = to_topology(n, edges);
          cfg.threshold_c = c;
          cfg.step = StepSchedule::polynomial(alpha1, gamma);
          cfg.initial_states = initial;
          std::vector<std::uint64_t> k;
          std::vector<double> dev, mean;
          for (const auto& cp : scdestim::run_consensus(cfg, horizon, seed)) {
            k.push_back(cp.k);
            dev.push_back(cp.max_deviation);
            mean.push_back(cp.mean_state);
          }
          return std::make_tuple(k, dev, mean);
        },
        py::arg("n_sensors"), py::arg("edges"), py::arg("threshold"), py::arg("alpha1"), py::arg("gamma"),
        py::arg("initial"), py::arg("horizon"), py::arg("seed"), "Returns (k, max_deviation, mean_state).");
}
