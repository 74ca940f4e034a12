#include "csls/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "csls/errors.hpp"
#include "csls/plot.hpp"

namespace csls {

void ExperimentConfig::validate() const {
  if (n_list.empty()) throw ConfigError("experiment: N list is empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] == 0) throw ConfigError("experiment: N values must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw ConfigError("experiment: N list must be strictly ascending");
  }
  if (levels.empty()) throw ConfigError("experiment: no confidence levels");
  for (double l : levels) {
    if (!(l > 0.0 && l < 1.0)) throw ConfigError(fmt::format("experiment: confidence level {} outside (0, 1)", l));
  }
  if (!(beta_share > 0.0 && beta_share < 1.0)) throw ConfigError("experiment: beta share must lie in (0, 1)");
  if (threads == 0) throw ConfigError("experiment: threads must be >= 1");
  try {
    solver.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

std::vector<BoundsReport> run_point(const Csls& csls, const ExperimentConfig& cfg, std::size_t N,
                                    std::optional<double> lower_cycles) {
  const auto t0 = std::chrono::steady_clock::now();
  const OracleSamples draw = draw_observations(csls, N, cfg.seed);
  const MqlfCandidate candidate = solve_sampled(draw.samples, cfg.solver);
  const double eta = eta_sampled(draw.samples);

  std::vector<BoundsReport> out;
  out.reserve(cfg.levels.size());
  for (double level : cfg.levels) {
    BoundsReport r = corollary_upper(candidate, draw.samples, eta, ConfidenceSpec::split(level, cfg.beta_share),
                                     cfg.norm_form);
    r.level = level;
    r.lower_bound_cycles = lower_cycles;
    r.seed = cfg.seed;
    out.push_back(std::move(r));
  }
  if (cfg.record_timing) {
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    for (auto& r : out) r.elapsed_ms = ms;
  }
  return out;
}

BoundsReport run_pipeline(const Csls& csls, const ExperimentConfig& cfg, std::size_t N, double level,
                          std::optional<double> lower_cycles) {
  ExperimentConfig one = cfg;
  one.levels = {level};
  return run_point(csls, one, N, lower_cycles).front();
}

std::vector<FirstCertification> first_certifications(const std::vector<BoundsReport>& rows,
                                                     const std::vector<double>& levels) {
  std::vector<FirstCertification> out;
  for (double level : levels) {
    FirstCertification f{level, std::nullopt};
    for (const auto& r : rows) {
      if (r.level == level && r.stability_certified && (!f.first_N || r.N < *f.first_N)) f.first_N = r.N;
    }
    out.push_back(f);
  }
  return out;
}

SweepResult run_sweep(const Csls& csls, const ExperimentConfig& cfg) {
  cfg.validate();
  std::optional<double> lower_cycles;
  if (cfg.cycle_length > 0) lower_cycles = cjsr_lower_bruteforce(csls, cfg.cycle_length).value;

  const std::size_t points = cfg.n_list.size();
  std::vector<std::vector<BoundsReport>> slots(points);
  std::vector<std::string> errors(points);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points; i = next++) {
      try {
        slots[i] = run_point(csls, cfg, cfg.n_list[i], lower_cycles);
      } catch (const std::exception& e) {
        errors[i] = fmt::format("N={}: {}", cfg.n_list[i], e.what());
      }
    }
  };
  const std::size_t workers = std::min(cfg.threads, points);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  SweepResult result;
  for (std::size_t i = 0; i < points; ++i) {
    for (auto& r : slots[i]) result.rows.push_back(std::move(r));
    if (!errors[i].empty()) result.failures.push_back(errors[i]);
  }
  result.summary = first_certifications(result.rows, cfg.levels);
  return result;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string("NA"); }

std::optional<double> parse_opt(const std::string& f) {
  if (f == "NA") return std::nullopt;
  return std::stod(f);
}

}  // namespace

std::string csv_header() {
  return "N,level,beta,beta_prime,epsilon,epsilon_prime,gamma_hat,eta_hat,d_eps,lower_sdp,lower_cycles,upper,"
         "degenerate,certified,seed,elapsed_ms";
}

std::string to_csv_row(const BoundsReport& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", r.N, r.level, r.beta, r.beta_prime,
                     opt(r.epsilon), opt(r.epsilon_prime), r.gamma_hat, r.eta_hat, opt(r.d_eps), r.lower_bound_sdp,
                     opt(r.lower_bound_cycles), opt(r.upper_bound), r.degenerate ? 1 : 0,
                     r.stability_certified ? 1 : 0, r.seed, r.elapsed_ms);
}

BoundsReport parse_csv_row(std::string_view row) {
  std::vector<std::string> f;
  std::string cur;
  for (char c : row) {
    if (c == ',') {
      f.push_back(cur);
      cur.clear();
    } else if (c != '\r' && c != '\n') {
      cur.push_back(c);
    }
  }
  f.push_back(cur);
  if (f.size() != 16) throw ConfigError(fmt::format("bounds csv: expected 16 fields, got {}", f.size()));
  BoundsReport r;
  try {
    r.N = std::stoull(f[0]);
    r.level = std::stod(f[1]);
    r.beta = std::stod(f[2]);
    r.beta_prime = std::stod(f[3]);
    r.confidence_level = r.beta + r.beta_prime - 1.0;
    r.epsilon = parse_opt(f[4]);
    r.epsilon_prime = parse_opt(f[5]);
    r.gamma_hat = std::stod(f[6]);
    r.eta_hat = std::stod(f[7]);
    r.d_eps = parse_opt(f[8]);
    r.lower_bound_sdp = std::stod(f[9]);
    r.lower_bound_cycles = parse_opt(f[10]);
    r.upper_bound = parse_opt(f[11]);
    r.degenerate = f[12] == "1";
    r.stability_certified = f[13] == "1";
    r.seed = std::stoull(f[14]);
    r.elapsed_ms = std::stoll(f[15]);
  } catch (const std::logic_error& e) {
    throw ConfigError(std::string("bounds csv: ") + e.what());
  }
  if (r.degenerate && !r.upper_bound) r.status = BoundStatus::kCapSaturated;
  return r;
}

void write_sweep_outputs(const SweepResult& result, const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "sweep.csv", std::ios::binary);
    csv << csv_header() << '\n';
    for (const auto& r : result.rows) csv << to_csv_row(r) << '\n';
    if (!csv) throw ConfigError("cannot write " + (dir / "sweep.csv").string());
  }
  {
    std::ofstream s(dir / "summary.csv", std::ios::binary);
    s << "level,first_certified_N\n";
    for (const auto& f : result.summary) {
      s << fmt::format("{},{}\n", f.level, f.first_N ? std::to_string(*f.first_N) : std::string("NA"));
    }
  }
  {
    std::ofstream gp(dir / "plot_bounds.gp", std::ios::binary);
    write_gnuplot_script(gp, "sweep.csv", cfg.levels);
  }
  {
    std::ofstream svg(dir / "bounds.svg", std::ios::binary);
    write_svg_plot(svg, result.rows, cfg.levels);
  }
}

}  // namespace csls
