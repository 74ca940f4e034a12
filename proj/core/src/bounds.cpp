#include "csls/bounds.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "csls/errors.hpp"
#include "csls/specfun.hpp"

namespace csls {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_confidence(double b, const char* what) {
  if (!(b >= 0.0 && b < 1.0)) throw InputError(std::string(what) + " must lie in [0, 1)");
}
}  // namespace

ConfidenceSpec ConfidenceSpec::split(double level, double share) {
  if (!(level > 0.0 && level < 1.0)) throw InputError("confidence level must lie in (0, 1)");
  if (!(share > 0.0 && share < 1.0)) throw InputError("confidence share must lie in (0, 1)");
  const double miss = 1.0 - level;
  return {1.0 - share * miss, 1.0 - (1.0 - share) * miss};
}

std::size_t sample_threshold(std::size_t node_count, int n) {
  return node_count * static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2;
}

double epsilon_of_beta(double beta, int m, std::size_t node_count, int n, std::size_t sample_count) {
  const double support = static_cast<double>(sample_threshold(node_count, n));
  if (!(beta < 1.0 && beta >= 1.0 - support)) throw InputError("beta must lie in [1 - |V| n (n + 1) / 2, 1)");
  if (sample_count < sample_threshold(node_count, n)) {
    throw InputError("epsilon_of_beta: N is below |V| n (n + 1) / 2");
  }
  const double mv = static_cast<double>(m) * static_cast<double>(node_count);
  const double q = (1.0 - beta) / support;
  // mv (1 - q^(1/N)), written to avoid cancellation for large N.
  const double shrink = -std::expm1(std::log(q) / static_cast<double>(sample_count));
  return shrink > 0.0 ? mv * shrink : 0.0;
}

double beta_of_epsilon(double epsilon, int m, std::size_t node_count, int n, std::size_t sample_count) {
  const double mv = static_cast<double>(m) * static_cast<double>(node_count);
  if (!(epsilon >= 0.0 && epsilon <= mv)) throw InputError("beta_of_epsilon: epsilon outside [0, m |V|]");
  const double support = static_cast<double>(sample_threshold(node_count, n));
  return 1.0 - support * std::exp(static_cast<double>(sample_count) * std::log1p(-epsilon / mv));
}

SensitivityBound theorem1_upper(const MqlfCandidate& candidate, const SampleSet& samples, double a_bound, double beta) {
  if (!candidate.certified) throw InputError("theorem1_upper: candidate is not certified");
  if (!(a_bound >= 0.0)) throw InputError("theorem1_upper: norm bound must be >= 0");
  const auto& st = samples.structure();
  if (candidate.lambda_stats.size() != st.node_count) throw InputError("theorem1_upper: lambda stats per node expected");

  SensitivityBound b;
  b.epsilon = epsilon_of_beta(beta, st.label_count, st.node_count, st.n, samples.size());
  const CapGeometry cap = cap_geometry(b.epsilon, st.n);
  b.delta = cap.delta;
  b.d = cap.d;

  std::set<std::pair<NodeId, NodeId>> pairs;
  for (std::size_t i = 0; i < samples.size(); ++i) pairs.emplace(samples[i].u, samples[i].v);
  for (const auto& [u, v] : pairs) {
    const NodeSpectrum& su = candidate.lambda_stats[static_cast<std::size_t>(u)];
    const NodeSpectrum& sv = candidate.lambda_stats[static_cast<std::size_t>(v)];
    const double term =
        std::sqrt(su.lambda_max / su.lambda_min) * candidate.gamma + std::sqrt(sv.lambda_max / su.lambda_min) * a_bound;
    b.max_term = std::max(b.max_term, term);
  }
  if (cap.degenerate || !std::isfinite(a_bound)) {
    b.degenerate = true;
    b.value = kInf;
    return b;
  }
  b.value = candidate.gamma + b.max_term * b.d;
  return b;
}

NormBound theorem2_norm_bound(double eta_hat, double beta_prime, int m, std::size_t node_count, int n,
                              std::size_t sample_count, NormBoundForm form) {
  check_confidence(beta_prime, "beta_prime");
  if (sample_count == 0) throw InputError("theorem2_norm_bound: N must be >= 1");
  if (!(eta_hat >= 0.0)) throw InputError("theorem2_norm_bound: eta_hat must be >= 0");
  NormBound b;
  const double base = -std::expm1(std::log1p(-beta_prime) / static_cast<double>(sample_count));
  if (form == NormBoundForm::kTheorem) {
    b.epsilon_prime = base;
    b.cap_argument = base * m * static_cast<double>(node_count) / 2.0;
  } else {
    b.epsilon_prime = 0.5 * m * base;
    b.cap_argument = b.epsilon_prime;
  }
  const CapGeometry cap = cap_geometry(b.cap_argument, n);
  b.delta = cap.delta;
  if (cap.degenerate) {
    b.degenerate = true;
    b.value = kInf;
    return b;
  }
  b.value = eta_hat / cap.delta;
  return b;
}

const char* to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::kOk:
      return "ok";
    case BoundStatus::kBelowSampleThreshold:
      return "below_sample_threshold";
    case BoundStatus::kVacuousConfidence:
      return "vacuous_confidence";
    case BoundStatus::kCapSaturated:
      return "cap_saturated";
  }
  return "unknown";
}

BoundsReport corollary_upper(const MqlfCandidate& candidate, const SampleSet& samples, double eta_hat,
                             const ConfidenceSpec& spec, NormBoundForm form) {
  if (!candidate.certified) throw InputError("corollary_upper: candidate is not certified");
  const auto& st = samples.structure();
  BoundsReport r;
  r.N = samples.size();
  r.n = st.n;
  r.V_count = st.node_count;
  r.m = st.label_count;
  r.beta = spec.beta;
  r.beta_prime = spec.beta_prime;
  r.level = spec.level();
  r.confidence_level = spec.level();
  r.gamma_hat = candidate.gamma;
  r.eta_hat = eta_hat;
  r.lower_bound_sdp = deterministic_lower(candidate, st.n);

  auto mark = [&](BoundStatus s) {
    r.status = s;
    r.degenerate = true;
    r.stability_certified = false;
  };

  if (r.N < sample_threshold(st.node_count, st.n)) {
    mark(BoundStatus::kBelowSampleThreshold);
    return r;
  }
  const NormBound nb = theorem2_norm_bound(eta_hat, spec.beta_prime, st.label_count, st.node_count, st.n, r.N, form);
  r.epsilon_prime = nb.epsilon_prime;
  r.delta_eps_prime_arg = nb.cap_argument;
  const SensitivityBound sb = theorem1_upper(candidate, samples, nb.value, spec.beta);
  r.epsilon = sb.epsilon;
  r.delta_eps = sb.delta;
  r.d_eps = sb.d;
  if (nb.degenerate || sb.degenerate) {
    if (!nb.degenerate) r.norm_bound = nb.value;
    mark(BoundStatus::kCapSaturated);
    return r;
  }
  r.norm_bound = nb.value;
  if (spec.level() < 0.0) {
    mark(BoundStatus::kVacuousConfidence);
    return r;
  }
  r.upper_bound = sb.value;
  r.stability_certified = sb.value < 1.0;
  return r;
}

double deterministic_lower(const MqlfCandidate& candidate, int n) {
  if (n < 1) throw InputError("deterministic_lower: n must be >= 1");
  return candidate.gamma / std::sqrt(static_cast<double>(n));
}

}  // namespace csls
