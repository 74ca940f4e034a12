#pragma once

// Multiple quadratic Lyapunov functions from samples.
//
// The sampled program is
//
//   min gamma  s.t.  y_i^T P_{v_i} y_i <= gamma^2 x_i^T P_{u_i} x_i   (all i)
//                    I <= P_u <= C I                                   (all u)
//
// solved by bisection on gamma. Each bisection step asks an
// alternating-projection kernel for a certificate; the certificate that
// survives is then polished to the smallest gamma it exactly supports.
// Infeasibility is never certified, so every reported gamma is an upper
// bound on the sampled optimum and a true certificate for the samples.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "csls/automaton.hpp"
#include "csls/matrix.hpp"
#include "csls/system.hpp"

namespace csls {

enum class GammaHiRule {
  kIdentityPolish,  // polish_gamma with every P_u = I (always feasible)
  kFixed,           // SolverConfig::gamma_hi_value
};

struct SolverConfig {
  double box_upper = 1e6;  // C
  double tol_gamma = 1e-4;
  double tol_feas = 1e-9;
  std::size_t max_proj_iters = 50000;
  GammaHiRule gamma_hi_rule = GammaHiRule::kIdentityPolish;
  double gamma_hi_value = 0.0;

  /// Throws InputError unless C > 1 and the tolerances are positive.
  void validate() const;
};

/// One matrix per automaton node, indexed by NodeId.
using NodeMatrices = std::vector<SymMatrix>;

struct NodeSpectrum {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

struct MqlfCandidate {
  double gamma = 0.0;
  NodeMatrices P;
  bool certified = false;
  std::vector<NodeSpectrum> lambda_stats;
};

enum class ProbeStatus { kCertified, kNotCertified };

struct ProbeResult {
  ProbeStatus status = ProbeStatus::kNotCertified;
  NodeMatrices P;
  std::size_t sweeps = 0;
  /// Largest constraint residual on the returned P, relative to x^T P_u x.
  double max_residual = 0.0;
};

/// Identity on every node.
NodeMatrices identity_matrices(const StructuralConstants& s);

/// Alternating projections between the sample half-spaces (linear in the
/// stacked P coefficients because x, y are data) and the per-node spectral
/// boxes, in the Frobenius metric. kCertified iff the returned P meets
/// every constraint within tol_feas; kNotCertified only means no
/// certificate was found within max_proj_iters sweeps.
ProbeResult feasibility_probe(const SampleSet& samples, double gamma, const SolverConfig& cfg);
ProbeResult feasibility_probe(const SampleSet& samples, double gamma, const SolverConfig& cfg,
                              const NodeMatrices& warm_start);

/// sqrt(max_i y_i^T P_v y_i / x_i^T P_u x_i): the smallest gamma that P
/// supports exactly. Rounded up so that gamma * gamma >= every ratio.
double polish_gamma(const SampleSet& samples, const NodeMatrices& p);

/// Per-node extreme eigenvalues.
std::vector<NodeSpectrum> spectrum_stats(const NodeMatrices& p);

MqlfCandidate solve_sampled(const SampleSet& samples, const SolverConfig& cfg);

struct CandidateCheck {
  std::size_t constraint_violations = 0;
  std::size_t box_violations = 0;
  /// max_i (y^T P_v y - gamma^2 x^T P_u x) / (x^T P_u x); <= 0 when feasible.
  double worst_constraint = 0.0;
  /// Largest spectral excursion outside [1, C], relative.
  double worst_box = 0.0;
  [[nodiscard]] bool ok() const { return constraint_violations == 0 && box_violations == 0; }
};

/// Re-evaluates every sampled inequality and the spectral box from the full
/// matrices. Constraint residuals and box excursions count as violations
/// beyond tol (both relative).
CandidateCheck check_candidate(const SampleSet& samples, const MqlfCandidate& c, double box_upper, double tol = 1e-12);

/// Deterministic directions on the unit sphere: for n = 2, `density`
/// equally spaced angles on [0, pi) (x and -x give the same constraint);
/// for n = 3 a Fibonacci lattice; beyond that a fixed-seed draw.
std::vector<Vector> sphere_grid(int n, std::size_t density);

/// White-box constraint set: every grid direction on every edge.
SampleSet grid_samples(const Csls& csls, std::size_t density);

struct WhiteboxResult {
  double gamma_certified = 0.0;  // LMI-exact along every edge
  double gamma_grid = 0.0;       // sampled optimum on the grid
  NodeMatrices P;
};

/// Solve on grid_samples, then certify the matrices exactly:
/// gamma_certified^2 = max over edges of lambda_max(A^T P_v A, P_u).
WhiteboxResult whitebox_gamma(const Csls& csls, std::size_t grid_density, const SolverConfig& cfg);

struct CycleBound {
  double value = 0.0;
  Cycle cycle;  // the maximizing cycle (empty when none exists)
  std::size_t cycles_examined = 0;
};

/// max over cycles of length <= max_cycle_length of
/// rho(A_{s_L} ... A_{s_1})^(1/L), a sound lower bound on the CJSR.
CycleBound cjsr_lower_bruteforce(const Csls& csls, std::size_t max_cycle_length);

/// Structured text: gamma, certified flag, per node P and spectrum, and the
/// re-check residuals.
void write_certificate_report(std::ostream& out, const MqlfCandidate& c, const CandidateCheck& check,
                              std::span<const std::string> node_names);

}  // namespace csls
