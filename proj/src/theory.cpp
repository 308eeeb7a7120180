#include "scdestim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace scdestim {

namespace {

std::string edge_name(const Topology& topology, std::size_t e) {
  const auto& edge = topology.edges().at(e);
  return fmt::format("edge ({}, {})", edge.i + 1, edge.j + 1);
}

void require_edge_count(const Topology& topology, std::span<const ChannelParams> channels) {
  if (channels.size() != topology.edge_count()) {
    throw std::invalid_argument("one channel parameter set per edge required");
  }
}

}  // namespace

StepsizeReport validate_stepsizes(const Topology& topology, std::span<const ChannelParams> channels,
                                  std::span<const StepSchedule> betas) {
  require_edge_count(topology, channels);
  StepsizeReport r;
  for (std::size_t e = 0; e < channels.size(); ++e) {
    if (!channels[e].alpha.is_polynomial()) {
      r.supported = false;
      r.violations.push_back(edge_name(topology, e) + ": alpha schedule is not polynomial; check manually");
    }
  }
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!betas[i].is_polynomial()) {
      r.supported = false;
      r.violations.push_back(fmt::format("sensor {}: beta schedule is not polynomial; check manually", i + 1));
    }
  }
  if (!r.supported) return r;

  for (std::size_t e = 0; e < channels.size(); ++e) {
    const double gamma = channels[e].alpha.exponent();
    if (!(gamma > 0.5)) {
      r.violations.push_back(fmt::format("(i) {}: gamma = {} <= 1/2, sum alpha^2 diverges",
                                         edge_name(topology, e), gamma));
    }
  }
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double g = betas[i].exponent();
    if (!(g > 0.5)) {
      r.violations.push_back(
          fmt::format("(ii) sensor {}: beta exponent = {} <= 1/2, sum beta^2 diverges", i + 1, g));
    }
  }
  for (std::size_t e = 0; e < channels.size(); ++e) {
    const double sum = channels[e].alpha.exponent() + channels[e].nu;
    if (sum > 1.0 + kExponentTolerance) {
      r.violations.push_back(fmt::format("(iii) {}: gamma + nu = {} > 1, sum z_k converges",
                                         edge_name(topology, e), sum));
    }
  }
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double g = betas[i].exponent();
    if (g > 1.0 + kExponentTolerance) {
      r.violations.push_back(
          fmt::format("(iii) sensor {}: beta exponent = {} > 1, sum z_k converges", i + 1, g));
    }
  }
  r.passed = r.violations.empty();
  return r;
}

double compute_h(const Topology& topology, std::span<const ChannelParams> channels) {
  require_edge_count(topology, channels);
  if (channels.empty()) throw std::invalid_argument("compute_h: graph has no edges");
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < channels.size(); ++e) {
    const auto& c = channels[e];
    if (!c.alpha.is_polynomial()) {
      throw std::invalid_argument(edge_name(topology, e) + ": alpha schedule is not polynomial");
    }
    const double gamma = c.alpha.exponent();
    if (!(gamma > 0.5 && gamma <= 1.0 + kExponentTolerance)) {
      throw std::invalid_argument(
          fmt::format("{}: gamma = {} outside (1/2, 1]", edge_name(topology, e), gamma));
    }
    if (c.nu + gamma > 1.0 + kExponentTolerance) {
      throw std::invalid_argument(
          fmt::format("{}: nu + gamma = {} > 1", edge_name(topology, e), c.nu + gamma));
    }
    h = std::min(h, c.nu / 2.0 + gamma);
  }
  return h;
}

double compute_a(const RateExponentInputs& in) {
  if (in.beta1.empty()) throw std::invalid_argument("compute_a: no sensors");
  const double beta = *std::min_element(in.beta1.begin(), in.beta1.end());
  const double n_sensors = static_cast<double>(in.n_sensors);

  double m = std::numeric_limits<double>::infinity();
  bool boundary_edges = false;
  for (const auto& c : in.channels) {
    if (std::abs(c.nu + c.alpha.exponent() - 1.0) <= kExponentTolerance) {
      boundary_edges = true;
      m = std::min(m, c.alpha.initial() * std::exp(-in.theta_l1 / c.b) / c.b);
    }
  }
  if (!boundary_edges) return in.delta * beta / n_sensors;

  const double num = in.delta * in.lambda2 * beta * m;
  const double den = 2.0 * n_sensors * static_cast<double>(in.dim) * in.h_bar * in.h_bar * beta +
                     n_sensors * in.lambda2 * m;
  return num / den;
}

std::string to_string(RateClass c) {
  switch (c) {
    case RateClass::poly_a:
      return "poly_a";
    case RateClass::log_over:
      return "log_over";
    case RateClass::sqrtlog_over:
      return "sqrtlog_over";
  }
  return "unknown";
}

RatePrediction predict_rate(double h, double a) {
  RatePrediction p;
  p.h = h;
  p.a = a;
  const double d = 2.0 * h - 2.0 * a - 1.0;
  if (std::abs(d) <= kExponentTolerance) {
    p.rate_class = RateClass::log_over;
  } else if (d > 0.0) {
    p.rate_class = RateClass::poly_a;
  } else {
    p.rate_class = RateClass::sqrtlog_over;
  }
  p.error_slope_loglog = p.rate_class == RateClass::poly_a ? -2.0 * a : -(2.0 * h - 1.0);
  return p;
}

LocalRateBound predict_local_rate_bound(double nu, double b, double theta_l1, double h, double a,
                                        std::uint64_t k) {
  LocalRateBound out;
  if (nu == 0.0) {
    out.sharp = true;
    return out;
  }
  if (k < 1) throw std::invalid_argument("local rate bound needs k >= 1");
  out.raw = std::exp(theta_l1 / b) / ((1.0 - nu) * std::pow(static_cast<double>(k), nu));
  out.clamped = std::min(out.raw, 1.0);
  out.sharp = a > h - 0.5;
  return out;
}

SuggestedStepsizes suggest_stepsizes(std::span<const double> nu, double scale) {
  if (nu.empty()) throw std::invalid_argument("suggest_stepsizes: no edges");
  if (!(scale > 0.0)) throw std::invalid_argument("suggest_stepsizes: scale must be positive");
  SuggestedStepsizes s;
  s.alpha1 = scale;
  s.beta1 = scale;
  double nu_max = 0.0;
  for (std::size_t e = 0; e < nu.size(); ++e) {
    if (!(nu[e] >= 0.0 && nu[e] < 0.5)) {
      throw std::invalid_argument(fmt::format("edge #{}: nu = {} outside [0, 1/2)", e + 1, nu[e]));
    }
    s.gamma.push_back(1.0 - nu[e]);
    nu_max = std::max(nu_max, nu[e]);
  }
  s.h = 1.0 - nu_max / 2.0;
  return s;
}

RatePrediction predict_suggested_rate(const SuggestedStepsizes& suggestion,
                                      std::span<const double> nu, RateExponentInputs base) {
  if (nu.size() != suggestion.gamma.size() || base.channels.size() != nu.size()) {
    throw std::invalid_argument("predict_suggested_rate: edge count mismatch");
  }
  for (std::size_t e = 0; e < nu.size(); ++e) {
    base.channels[e].nu = nu[e];
    base.channels[e].alpha = StepSchedule::polynomial(suggestion.alpha1, suggestion.gamma[e]);
  }
  std::fill(base.beta1.begin(), base.beta1.end(), suggestion.beta1);
  return predict_rate(suggestion.h, compute_a(base));
}

}  // namespace scdestim
