#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "guidekit/guided_search.hpp"
#include "guidekit/oracle.hpp"
#include "guidekit/search_tree.hpp"

namespace guidekit {

/// Per-node target scores: delta is the suboptimality of routing through the
/// node given the current tree, tau the oracle cost-to-go (work remaining).
struct NodeScores {
  std::vector<double> delta;
  std::vector<double> tau;
};

namespace detail {

/// Replace infinite entries by the worst finite value among the nodes so that
/// unreachable nodes stay selectable but maximally penalized. Used on both
/// columns whenever tau is infinite.
inline void apply_unreachable_sentinel(std::vector<double>& delta, std::vector<double>& tau) {
  double max_delta = 0.0, max_tau = 0.0;
  bool any_finite = false;
  for (size_t i = 0; i < tau.size(); ++i) {
    if (std::isfinite(tau[i]) && std::isfinite(delta[i])) {
      max_delta = std::max(max_delta, delta[i]);
      max_tau = std::max(max_tau, tau[i]);
      any_finite = true;
    }
  }
  for (size_t i = 0; i < tau.size(); ++i) {
    if (!std::isfinite(tau[i]) || !std::isfinite(delta[i])) {
      delta[i] = any_finite ? max_delta : 0.0;
      tau[i] = any_finite ? max_tau : 0.0;
    }
  }
}

}  // namespace detail

/// delta_v = d_T(s,v) + d_C(v,t) - d_C(s,t) (clamped at 0 against grid
/// discretization noise), tau_v = d_C(v,t), over the first `prefix` nodes
/// (default: the whole tree).
inline NodeScores node_scores(const SearchTree& tree, const Task& task, const OracleField& field,
                              int prefix = -1) {
  const int n = prefix < 0 ? tree.size() : prefix;
  if (n < 1 || n > tree.size()) throw std::invalid_argument("node_scores: bad prefix");
  NodeScores scores;
  scores.delta.resize(static_cast<size_t>(n));
  scores.tau.resize(static_cast<size_t>(n));
  const double root_cost = field.query(task.start);
  for (int v = 0; v < n; ++v) {
    const double tau = field.query(tree.pose(v));
    scores.tau[static_cast<size_t>(v)] = tau;
    if (std::isfinite(tau) && std::isfinite(root_cost))
      scores.delta[static_cast<size_t>(v)] =
          std::max(0.0, tree.cost_from_root(v) + tau - root_cost);
    else
      scores.delta[static_cast<size_t>(v)] = std::numeric_limits<double>::infinity();
  }
  detail::apply_unreachable_sentinel(scores.delta, scores.tau);
  return scores;
}

struct SmoothingParams {
  double delta = 0.1;  // suboptimality temperature
  double tau = 0.1;    // work-remaining temperature
  double eps = 1e-4;   // per-node probability floor

  enum class Normalization { kMinMax, kGlobalMax };
  Normalization normalization = Normalization::kMinMax;
  // Scales for kGlobalMax, typically the per-run maxima.
  double global_delta_scale = 1.0;
  double global_tau_scale = 1.0;
};

/// The oracle-derived smoothed target over tree nodes: Q = softmin of the
/// normalized scores, then floored at eps via the additive mass gamma.
struct TargetDistribution {
  std::vector<double> probs;
  std::vector<double> delta;  // input scores, echoed
  std::vector<double> tau;
  double gamma = 0.0;
  double Z = 0.0;
  SmoothingParams params;
};

namespace detail {

inline std::vector<double> normalize_scores(std::span<const double> raw,
                                            SmoothingParams::Normalization mode, double scale) {
  std::vector<double> out(raw.begin(), raw.end());
  if (mode == SmoothingParams::Normalization::kGlobalMax) {
    const double s = scale > 0.0 ? scale : 1.0;
    for (double& v : out) v /= s;
    return out;
  }
  const auto [lo_it, hi_it] = std::minmax_element(out.begin(), out.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi - lo < 1e-15) {
    std::fill(out.begin(), out.end(), 0.0);  // constant column carries no signal
    return out;
  }
  for (double& v : out) v = (v - lo) / (hi - lo);
  return out;
}

}  // namespace detail

/// Smoothed probabilities for a given additive mass: (e^{-s_v} + gamma) /
/// (Z + gamma |T|). Exposed so the tightness of the gamma bound is testable.
inline std::vector<double> smoothed_probs_with_gamma(std::span<const double> scores,
                                                     double gamma) {
  std::vector<double> probs(scores.size());
  double z = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    probs[i] = std::exp(-scores[i]);
    z += probs[i];
  }
  const double denom = z + gamma * static_cast<double>(scores.size());
  for (double& p : probs) p = (p + gamma) / denom;
  return probs;
}

inline TargetDistribution target_distribution(std::span<const double> delta,
                                              std::span<const double> tau,
                                              const SmoothingParams& params) {
  const size_t n = delta.size();
  if (n == 0 || tau.size() != n)
    throw std::invalid_argument("target_distribution: empty or mismatched score vectors");
  if (!(params.delta > 0.0) || !(params.tau > 0.0))
    throw std::invalid_argument("target_distribution: temperatures must be positive");
  if (!(params.eps > 0.0) || params.eps * static_cast<double>(n) >= 1.0)
    throw std::invalid_argument("target_distribution: requires 0 < eps < 1/|T|");

  TargetDistribution target;
  target.params = params;
  target.delta.assign(delta.begin(), delta.end());
  target.tau.assign(tau.begin(), tau.end());

  const std::vector<double> nd =
      detail::normalize_scores(delta, params.normalization, params.global_delta_scale);
  const std::vector<double> nt =
      detail::normalize_scores(tau, params.normalization, params.global_tau_scale);
  std::vector<double> s(n);
  double s_min = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    s[i] = nd[i] / params.delta + nt[i] / params.tau;
    s_min = std::min(s_min, s[i]);
  }

  // Softmin in the shifted domain for stability; the smoothing mass scales
  // back by e^{-s_min} so the reported gamma and Z match the raw definition.
  std::vector<double> w(n);
  double z_shift = 0.0;
  for (size_t i = 0; i < n; ++i) {
    w[i] = std::exp(-(s[i] - s_min));
    z_shift += w[i];
  }
  double gamma_shift = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double q = w[i] / z_shift;
    gamma_shift = std::max(gamma_shift,
                           z_shift * (params.eps - q) / (1.0 - params.eps * static_cast<double>(n)));
  }
  gamma_shift = std::max(gamma_shift, 0.0);

  target.probs.resize(n);
  const double denom = z_shift + gamma_shift * static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) target.probs[i] = (w[i] + gamma_shift) / denom;
  const double scale_back = std::exp(-s_min);
  target.Z = z_shift * scale_back;
  target.gamma = gamma_shift * scale_back;
  return target;
}

/// Kullback-Leibler divergence (natural log, nats). Support violations
/// (P > 0 where Q = 0) yield +infinity by contract.
inline double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: length mismatch");
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

/// Jensen-Shannon divergence against the elementwise mixture; symmetric and
/// bounded by ln 2.
inline double js_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("js_divergence: length mismatch");
  std::vector<double> m(p.size());
  for (size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
  return 0.5 * (kl_divergence(p, m) + kl_divergence(q, m));
}

inline double distribution_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

enum class MetricMode { kNll, kKl, kJs };

inline MetricMode metric_mode_from_string(const std::string& s) {
  if (s == "nll") return MetricMode::kNll;
  if (s == "kl") return MetricMode::kKl;
  if (s == "js") return MetricMode::kJs;
  throw std::invalid_argument("unknown metric mode: " + s + " (expected nll|kl|js)");
}

/// Sampling efficiency of one selection step against the target built for the
/// tree snapshot at selection time. nll scores the chosen node; kl/js compare
/// the recorded explicit selection distribution against the target.
inline double sampling_efficiency(const IterationRecord& record, const TargetDistribution& target,
                                  MetricMode mode) {
  const size_t n = target.probs.size();
  if (record.node_count != static_cast<int>(n))
    throw std::invalid_argument("sampling_efficiency: target does not match the tree snapshot");
  switch (mode) {
    case MetricMode::kNll:
      return -std::log(target.probs[static_cast<size_t>(record.selected_node)]);
    case MetricMode::kKl:
    case MetricMode::kJs: {
      if (!record.selection_distribution)
        throw std::invalid_argument(
            "sampling_efficiency: kl/js modes need an explicit selection distribution");
      const std::vector<double>& p = record.selection_distribution->probs;
      return mode == MetricMode::kKl ? kl_divergence(p, target.probs)
                                     : js_divergence(p, target.probs);
    }
  }
  return 0.0;
}

}  // namespace guidekit
