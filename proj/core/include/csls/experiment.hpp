#pragma once

// Seeded sample -> solve -> bounds pipelines and N-sweeps.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csls/bounds.hpp"
#include "csls/lyapsolve.hpp"
#include "csls/system.hpp"

namespace csls {

struct ExperimentConfig {
  std::string system_path;
  std::vector<std::size_t> n_list;
  std::vector<double> levels{0.95, 0.98, 0.99};  // joint confidences beta + beta' - 1
  double beta_share = 0.5;                       // see ConfidenceSpec::split
  std::uint64_t seed = 1;
  SolverConfig solver;
  std::string output_dir = ".";
  NormBoundForm norm_form = NormBoundForm::kTheorem;
  std::size_t threads = 1;
  std::size_t cycle_length = 8;  // white-box cycle lower bound; 0 disables
  bool record_timing = false;    // elapsed_ms is written as 0 unless set

  /// Throws ConfigError: n_list nonempty, positive and strictly ascending;
  /// levels in (0, 1); share in (0, 1); threads >= 1.
  void validate() const;
};

/// One sample set of size N (seeded by cfg.seed; sets for different N are
/// nested prefixes), one solve, one report per level.
std::vector<BoundsReport> run_point(const Csls& csls, const ExperimentConfig& cfg, std::size_t N,
                                    std::optional<double> lower_cycles = std::nullopt);

/// Single-level convenience wrapper around run_point.
BoundsReport run_pipeline(const Csls& csls, const ExperimentConfig& cfg, std::size_t N, double level,
                          std::optional<double> lower_cycles = std::nullopt);

struct FirstCertification {
  double level = 0.0;
  std::optional<std::size_t> first_N;  // smallest swept N with upper < 1
};

struct SweepResult {
  std::vector<BoundsReport> rows;  // ordered by (N, level index)
  std::vector<FirstCertification> summary;
  std::vector<std::string> failures;  // sweep points that threw
};

/// Runs every N in cfg.n_list on a pool of cfg.threads workers. Results are
/// merged in (N, level) order, so the output is independent of scheduling.
/// A failing point is recorded in `failures` and the rest still run.
SweepResult run_sweep(const Csls& csls, const ExperimentConfig& cfg);

std::vector<FirstCertification> first_certifications(const std::vector<BoundsReport>& rows,
                                                     const std::vector<double>& levels);

/// N,level,beta,beta_prime,epsilon,epsilon_prime,gamma_hat,eta_hat,d_eps,
/// lower_sdp,lower_cycles,upper,degenerate,certified,seed,elapsed_ms
std::string csv_header();
/// Unavailable values are written as NA. Floating values use %.17g.
std::string to_csv_row(const BoundsReport& r);
/// Parses a row written by to_csv_row. Fields the CSV does not carry (n,
/// |V|, m, deltas) are left at their defaults. Throws ConfigError.
BoundsReport parse_csv_row(std::string_view row);

/// Writes <out>/sweep.csv, summary.csv, plot_bounds.gp and bounds.svg.
void write_sweep_outputs(const SweepResult& result, const ExperimentConfig& cfg);

}  // namespace csls
