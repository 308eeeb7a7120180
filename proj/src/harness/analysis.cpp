#include "scdestim/harness/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "scdestim/graph.hpp"
#include "scdestim/observation.hpp"

namespace scdestim::harness {

double fit_loglog_slope(std::span<const double> k, std::span<const double> values, double k_lo, double k_hi) {
  if (k.size() != values.size()) throw std::invalid_argument("fit_loglog_slope: size mismatch");
  double sx = 0.0, sy = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < k_lo || k[i] > k_hi) continue;
    if (!(values[i] > 0.0) || !(k[i] > 0.0)) {
      throw std::invalid_argument(fmt::format("fit_loglog_slope: nonpositive point at k = {}", k[i]));
    }
    pts.emplace_back(std::log(k[i]), std::log(values[i]));
    sx += pts.back().first;
    sy += pts.back().second;
  }
  if (pts.size() < 5) {
    throw std::invalid_argument(fmt::format("fit_loglog_slope: {} points in window, need 5", pts.size()));
  }
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  return sxy / sxx;
}

bool ValidationReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string ValidationReport::to_text() const {
  std::string text;
  for (const auto& c : checks) {
    text += fmt::format("[{}] {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
  }
  text += fmt::format("overall: {}\n", passed() ? "PASS" : "FAIL");
  return text;
}

ValidationReport validate_experiment(const ExperimentConfig& config) {
  ValidationReport r;
  const auto& est = config.estimator;

  const auto lap = laplacian(est.topology);
  r.checks.push_back({"connectivity", lap.lambda2 > kConnectivityTolerance,
                      fmt::format("lambda2 = {:.12g}", lap.lambda2)});

  const std::size_t p = est.excitation_window;
  const auto exc = check_excitation(est.model, p, excitation_horizon(est.model, p));
  r.checks.push_back({"excitation", exc.passed, fmt::format("p = {}, delta = {:.12g}", p, exc.delta)});

  auto add_stepsizes = [&](const std::string& name, const EstimatorConfig& e) {
    const auto steps = validate_stepsizes(e.topology, e.channels, e.beta);
    std::string detail = steps.passed ? "conditions (i)-(iii) hold" : "";
    for (const auto& v : steps.violations) detail += (detail.empty() ? "" : "; ") + v;
    if (!steps.supported) detail = "unsupported schedule, check manually; " + detail;
    r.checks.push_back({name, steps.passed, detail});
  };

  if (config.experiment.nu_sweep.empty()) {
    add_stepsizes("step-sizes", est);
  } else {
    for (double nu : config.experiment.nu_sweep) {
      const std::string name = fmt::format("step-sizes nu={:.4f}", nu);
      if (!(nu >= 0.0 && nu < 0.5)) {
        r.checks.push_back({name, false, fmt::format("nu = {} outside [0, 1/2)", nu)});
        continue;
      }
      add_stepsizes(name, with_uniform_nu(config, nu).estimator);
    }
  }
  return r;
}

std::string TheoryReport::to_text() const {
  std::string text;
  text += fmt::format("lambda2 = {:.12g}\ndelta = {:.12g}\nH_bar = {:.12g}\n", lambda2, delta, h_bar);
  text += fmt::format("step-size conditions: {}\n",
                      !stepsizes.supported ? "unsupported" : (stepsizes.passed ? "PASS" : "FAIL"));
  for (const auto& v : stepsizes.violations) text += "  " + v + "\n";
  if (rate_theorem_applies) {
    text += fmt::format("h = {:.12g}\na = {:.12g}\n2h - 2a = {:.12g}\nrate class = {}\n", rate.h, rate.a,
                        2.0 * rate.h - 2.0 * rate.a, to_string(rate.rate_class));
    text += fmt::format("predicted squared-error log-log slope = {:.12g}\n", rate.error_slope_loglog);
    text += fmt::format("predicted B(k) log-log slope (min nu) = {:.12g}\n", min_nu_slope);
  } else {
    text += "rate prediction: " + rate_note + "\n";
  }
  if (!local_bounds.empty()) {
    text += fmt::format("local data-rate bounds at k = {} (raw, clamped to 1, constant backed by a > h - 1/2):\n",
                        bound_k);
    for (const auto& b : local_bounds) {
      text += fmt::format("  ({}, {}): {:.6g}  {:.6g}  {}\n", b.i, b.j, b.bound.raw, b.bound.clamped,
                          b.bound.sharp ? "yes" : "no (order k^-nu only)");
    }
  }
  return text;
}

TheoryReport predict(const ExperimentConfig& config) {
  const auto& est = config.estimator;
  TheoryReport t;
  t.stepsizes = validate_stepsizes(est.topology, est.channels, est.beta);
  t.lambda2 = laplacian(est.topology).lambda2;
  const std::size_t p = est.excitation_window;
  t.delta = check_excitation(est.model, p, excitation_horizon(est.model, p)).delta;
  t.h_bar = est.model.h_bar();
  t.min_nu_slope = 0.0;
  double min_nu = 1.0;
  for (const auto& c : est.channels) min_nu = std::min(min_nu, c.nu);
  t.min_nu_slope = -min_nu;

  double h = 0.0, a = 0.0;
  try {
    for (const auto& b : est.beta) {
      if (!b.is_polynomial() || std::abs(b.exponent() - 1.0) > kExponentTolerance) {
        throw std::invalid_argument("rate theorem needs beta_k = beta_1 / k on every sensor");
      }
    }
    h = compute_h(est.topology, est.channels);
    RateExponentInputs in;
    in.delta = t.delta;
    in.lambda2 = t.lambda2;
    in.theta_l1 = est.model.theta.lpNorm<1>();
    in.h_bar = t.h_bar;
    in.n_sensors = est.topology.n_sensors();
    in.dim = static_cast<std::size_t>(est.model.dim());
    for (const auto& b : est.beta) in.beta1.push_back(b.initial());
    in.channels = est.channels;
    a = compute_a(in);
    t.rate = predict_rate(h, a);
    t.rate_theorem_applies = true;
  } catch (const std::invalid_argument& err) {
    t.rate_note = err.what();
  }

  t.bound_k = std::max<std::uint64_t>(1, config.experiment.horizon);
  const double theta_l1 = est.model.theta.lpNorm<1>();
  for (std::size_t e = 0; e < est.channels.size(); ++e) {
    const auto& c = est.channels[e];
    const auto& edge = est.topology.edges()[e];
    const auto bound = predict_local_rate_bound(c.nu, c.b, theta_l1, h, t.rate_theorem_applies ? a : 0.0, t.bound_k);
    EdgeBound eb{edge.i + 1, edge.j + 1, bound};
    if (!t.rate_theorem_applies) eb.bound.sharp = c.nu == 0.0;
    t.local_bounds.push_back(eb);
  }
  return t;
}

}  // namespace scdestim::harness
