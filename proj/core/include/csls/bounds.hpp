#pragma once

// Closed-form CJSR bounds from a certified sampled solution.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "csls/lyapsolve.hpp"
#include "csls/system.hpp"

namespace csls {

struct ConfidenceSpec {
  double beta = 0.0;        // confidence of the sensitivity (gamma) bound
  double beta_prime = 0.0;  // confidence of the maximal-norm bound
  /// Joint confidence by the union bound. Negative means vacuous.
  [[nodiscard]] double level() const { return beta + beta_prime - 1.0; }
  /// Split a joint level: 1 - beta = share (1 - level),
  /// 1 - beta' = (1 - share)(1 - level). share = 1/2 gives beta = beta'.
  static ConfidenceSpec split(double level, double share = 0.5);
};

/// Which cap argument to use for the maximal-norm bound.
enum class NormBoundForm {
  kTheorem,    // delta(eps' m |V| / 2), eps' = 1 - (1 - beta')^(1/N)
  kCorollary,  // delta(eps'), eps' = (m / 2)(1 - (1 - beta')^(1/N))
};

/// |V| n (n + 1) / 2: the support size of the sampled program and the
/// smallest N for which the upper bound is defined.
std::size_t sample_threshold(std::size_t node_count, int n);

/// eps = m |V| (1 - (2 (1 - beta) / (|V| n (n + 1)))^(1/N)).
/// Throws InputError for N below sample_threshold or beta outside
/// [1 - |V| n (n + 1) / 2, 1), the range of beta_of_epsilon.
double epsilon_of_beta(double beta, int m, std::size_t node_count, int n, std::size_t sample_count);

/// beta(eps) = 1 - |V| n (n + 1) / 2 (1 - eps / (m |V|))^N.
/// Throws InputError for eps outside [0, m |V|].
double beta_of_epsilon(double epsilon, int m, std::size_t node_count, int n, std::size_t sample_count);

struct SensitivityBound {
  double value = 0.0;  // +infinity when degenerate
  double epsilon = 0.0;
  double delta = 1.0;
  double d = 0.0;
  double max_term = 0.0;  // max over sampled (u, v) of the lambda-ratio expression
  bool degenerate = false;
};

/// gamma + max_{(u,v) in samples} { sqrt(lmax_u / lmin_u) gamma +
/// sqrt(lmax_v / lmin_u) A } d(eps), holding with probability >= beta
/// against the white-box optimum. A is the maximal norm or a bound on it.
SensitivityBound theorem1_upper(const MqlfCandidate& candidate, const SampleSet& samples, double a_bound, double beta);

struct NormBound {
  double value = 0.0;  // +infinity when degenerate
  double epsilon_prime = 0.0;
  double cap_argument = 0.0;
  double delta = 1.0;
  bool degenerate = false;
};

/// eta_hat / delta(cap argument), holding with probability >= beta'.
NormBound theorem2_norm_bound(double eta_hat, double beta_prime, int m, std::size_t node_count, int n,
                              std::size_t sample_count, NormBoundForm form = NormBoundForm::kTheorem);

enum class BoundStatus {
  kOk,
  kBelowSampleThreshold,  // N < |V| n (n + 1) / 2
  kVacuousConfidence,     // beta + beta' - 1 < 0
  kCapSaturated,          // a cap measure reached 1/2
};

const char* to_string(BoundStatus s);

struct BoundsReport {
  std::size_t N = 0;
  int n = 0;
  std::size_t V_count = 0;
  int m = 0;
  double level = 0.0;  // requested joint confidence
  double beta = 0.0;
  double beta_prime = 0.0;
  double gamma_hat = 0.0;
  double eta_hat = 0.0;
  std::optional<double> epsilon;
  std::optional<double> epsilon_prime;
  std::optional<double> delta_eps;
  std::optional<double> d_eps;
  std::optional<double> delta_eps_prime_arg;  // argument passed to delta() by the norm bound
  std::optional<double> norm_bound;
  double lower_bound_sdp = 0.0;  // heuristic up to solver slack
  std::optional<double> lower_bound_cycles;
  std::optional<double> upper_bound;
  double confidence_level = 0.0;  // beta + beta' - 1
  BoundStatus status = BoundStatus::kOk;
  bool degenerate = false;
  bool stability_certified = false;
  std::uint64_t seed = 0;
  std::int64_t elapsed_ms = 0;
};

/// Sensitivity bound with A replaced by the probabilistic maximal-norm
/// bound; joint confidence beta + beta' - 1. Never throws on small N:
/// unavailable bounds are reported through status/degenerate.
BoundsReport corollary_upper(const MqlfCandidate& candidate, const SampleSet& samples, double eta_hat,
                             const ConfidenceSpec& spec, NormBoundForm form = NormBoundForm::kTheorem);

/// n^(-1/2) gamma_hat. Since gamma_hat over-approximates the sampled
/// optimum by the solver slack, this bound is heuristic up to that slack.
double deterministic_lower(const MqlfCandidate& candidate, int n);

}  // namespace csls
