// csls: certify (in)stability of a constrained switching linear system
// from samples.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "csls/bounds.hpp"
#include "csls/config.hpp"
#include "csls/errors.hpp"
#include "csls/experiment.hpp"
#include "csls/lyapsolve.hpp"
#include "csls/system.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kNumericalError = 2 };

struct Common {
  std::string config;
  std::uint64_t seed = 1;
  csls::SolverConfig solver;
};

csls::Csls load(const Common& c) {
  return c.config.empty() ? csls::controller_failure_system() : csls::load_system_config(c.config);
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "System config file (default: bundled Example 1)");
  cmd->add_option("--seed", c.seed, "Master seed")->capture_default_str();
}

void add_solver(CLI::App* cmd, csls::SolverConfig& s) {
  cmd->add_option("--box-upper", s.box_upper, "Upper spectral bound C on every P_u")->capture_default_str();
  cmd->add_option("--tol-gamma", s.tol_gamma, "Bisection tolerance on gamma")->capture_default_str();
  cmd->add_option("--tol-feas", s.tol_feas, "Relative feasibility tolerance of the projection kernel")
      ->capture_default_str();
  cmd->add_option("--max-iters", s.max_proj_iters, "Projection sweeps per bisection probe")->capture_default_str();
}

// Output stream that is stdout unless a path is given.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw csls::ConfigError("cannot open " + path + " for writing");
    }
  }
  std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

csls::SampleSet samples_for(const csls::Csls& sys, const Common& c, std::size_t count, const std::string& input) {
  if (!input.empty()) {
    std::ifstream in(input);
    if (!in) throw csls::ConfigError("cannot open " + input);
    return csls::read_samples_csv(in, sys.structure());
  }
  return csls::draw_observations(sys, count, c.seed).samples;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-driven stability certificates for constrained switching linear systems"};
  app.require_subcommand(1);

  Common common;
  std::size_t samples = 1000;
  std::string out;
  std::string input;
  double level = 0.95;
  double share = 0.5;
  bool corollary_form = false;
  std::size_t grid = 720;
  std::size_t max_length = 10;

  auto* validate = app.add_subcommand("validate", "Parse and validate a system config");
  add_common(validate, common);

  auto* sample = app.add_subcommand("sample", "Draw observations and write them as CSV");
  add_common(sample, common);
  sample->add_option("--samples,-N", samples, "Number of observations")->capture_default_str();
  sample->add_option("--out", out, "Output file (default: stdout)");

  auto* solve = app.add_subcommand("solve", "Fit MQLFs to sampled observations");
  add_common(solve, common);
  add_solver(solve, common.solver);
  solve->add_option("--samples,-N", samples, "Number of observations")->capture_default_str();
  solve->add_option("--input", input, "Read observations from a CSV written by `sample`");
  solve->add_option("--out", out, "Output file (default: stdout)");

  auto* bounds = app.add_subcommand("bounds", "Sampled solve plus probabilistic CJSR bounds, one CSV row");
  add_common(bounds, common);
  add_solver(bounds, common.solver);
  bounds->add_option("--samples,-N", samples, "Number of observations")->capture_default_str();
  bounds->add_option("--level", level, "Joint confidence beta + beta' - 1")->capture_default_str();
  bounds->add_option("--share", share, "Split rule: beta = 1 - 2(1-share)(1-level)")->capture_default_str();
  bounds->add_flag("--corollary-form", corollary_form, "Use the norm-bound argument as printed in the corollary");
  bounds->add_option("--max-length", max_length, "Cycle length for the white-box lower bound (0 disables)")
      ->capture_default_str();
  bounds->add_option("--out", out, "Output file (default: stdout)");

  csls::ExperimentConfig sweep_cfg;
  sweep_cfg.n_list = {500, 1000, 2000, 5000, 10000, 20000, 30000, 50000};
  auto* sweep = app.add_subcommand("sweep", "Bounds versus N; writes sweep.csv, summary.csv and plots");
  add_common(sweep, common);
  add_solver(sweep, common.solver);
  sweep->add_option("--n-list", sweep_cfg.n_list, "Ascending sample counts")->delimiter(',')->capture_default_str();
  sweep->add_option("--levels", sweep_cfg.levels, "Joint confidence levels")->delimiter(',')->capture_default_str();
  sweep->add_option("--share", sweep_cfg.beta_share, "Split rule share")->capture_default_str();
  sweep->add_flag("--corollary-form", corollary_form, "Use the norm-bound argument as printed in the corollary");
  sweep->add_option("--threads", sweep_cfg.threads, "Worker threads")->capture_default_str();
  sweep->add_option("--max-length", sweep_cfg.cycle_length, "Cycle length for the white-box lower bound (0 disables)")
      ->capture_default_str();
  sweep->add_flag("--timing", sweep_cfg.record_timing, "Record wall-clock time per point in elapsed_ms");
  sweep->add_option("--out", sweep_cfg.output_dir, "Output directory")->capture_default_str();

  auto* whitebox = app.add_subcommand("whitebox", "MQLF bracket on the full constraint set (uses the matrices)");
  add_common(whitebox, common);
  add_solver(whitebox, common.solver);
  whitebox->add_option("--grid", grid, "Sphere grid density")->capture_default_str();

  auto* cycles = app.add_subcommand("cycles", "Brute-force CJSR lower bound over primitive cycles");
  add_common(cycles, common);
  cycles->add_option("--max-length", max_length, "Longest cycle to enumerate")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const csls::Csls sys = load(common);
    if (validate->parsed()) {
      const auto s = sys.structure();
      fmt::print("ok: n={} nodes={} edges={} labels={}\n", s.n, s.node_count, s.edge_count, s.label_count);
    } else if (sample->parsed()) {
      Sink sink(out);
      csls::write_samples_csv(sink.get(), csls::draw_observations(sys, samples, common.seed).samples);
    } else if (solve->parsed()) {
      common.solver.validate();
      const csls::SampleSet set = samples_for(sys, common, samples, input);
      const csls::MqlfCandidate c = csls::solve_sampled(set, common.solver);
      const csls::CandidateCheck check = csls::check_candidate(set, c, common.solver.box_upper);
      Sink sink(out);
      csls::write_certificate_report(sink.get(), c, check, sys.automaton().node_names());
    } else if (bounds->parsed()) {
      csls::ExperimentConfig cfg;
      cfg.n_list = {samples};
      cfg.levels = {level};
      cfg.beta_share = share;
      cfg.seed = common.seed;
      cfg.solver = common.solver;
      cfg.norm_form = corollary_form ? csls::NormBoundForm::kCorollary : csls::NormBoundForm::kTheorem;
      cfg.validate();
      std::optional<double> lower_cycles;
      if (max_length > 0) lower_cycles = csls::cjsr_lower_bruteforce(sys, max_length).value;
      const csls::BoundsReport r = csls::run_pipeline(sys, cfg, samples, level, lower_cycles);
      Sink sink(out);
      sink.get() << csls::csv_header() << '\n' << csls::to_csv_row(r) << '\n';
      std::cerr << "status: " << csls::to_string(r.status)
                << (r.stability_certified ? ", stability certified\n" : ", not certified\n");
    } else if (sweep->parsed()) {
      sweep_cfg.system_path = common.config;
      sweep_cfg.seed = common.seed;
      sweep_cfg.solver = common.solver;
      sweep_cfg.norm_form = corollary_form ? csls::NormBoundForm::kCorollary : csls::NormBoundForm::kTheorem;
      const csls::SweepResult result = csls::run_sweep(sys, sweep_cfg);
      csls::write_sweep_outputs(result, sweep_cfg);
      for (const auto& f : result.summary) {
        fmt::print("level {}: first certified N = {}\n", f.level,
                   f.first_N ? std::to_string(*f.first_N) : std::string("none"));
      }
      for (const auto& msg : result.failures) std::cerr << "sweep point failed: " << msg << '\n';
      if (!result.failures.empty()) return kNumericalError;
    } else if (whitebox->parsed()) {
      common.solver.validate();
      const csls::WhiteboxResult w = csls::whitebox_gamma(sys, grid, common.solver);
      const double root_n = std::sqrt(static_cast<double>(sys.dim()));
      fmt::print("gamma_grid={}\ngamma_certified={}\nbracket=[{}, {}]\n", w.gamma_grid, w.gamma_certified,
                 w.gamma_certified / root_n, w.gamma_certified);
    } else if (cycles->parsed()) {
      const csls::CycleBound b = csls::cjsr_lower_bruteforce(sys, max_length);
      fmt::print("lower_bound={}\ncycles_examined={}\ncycle=", b.value, b.cycles_examined);
      const auto& edges = sys.automaton().edges();
      for (std::size_t k = 0; k < b.cycle.edge_sequence.size(); ++k) {
        fmt::print("{}{}", k ? " " : "", edges[b.cycle.edge_sequence[k]].label);
      }
      fmt::print("\n");
    }
  } catch (const csls::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const csls::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfigError;
  } catch (const csls::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  }
  return kOk;
}
