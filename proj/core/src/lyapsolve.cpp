#include "csls/lyapsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "csls/errors.hpp"
#include "csls/random.hpp"

namespace csls {

namespace {

// Working-set sizes for the projection kernel. Only near-active half-spaces
// are swept; the full set is consulted to certify and to grow the set.
constexpr std::size_t kInitialWorkingSet = 256;
constexpr std::size_t kWorkingSetGrowth = 256;

// Sampled constraints in stacked packed coordinates. For a packed symmetric
// P, dot(w_i, p) = z^T P z with w the Frobenius-weighted packed z z^T, and
// the Frobenius-metric projection moves p along the unweighted r = packed
// z z^T.
class ConstraintTable {
 public:
  explicit ConstraintTable(const SampleSet& s)
      : n_(s.dim()), m_(SymMatrix::packed_size(s.dim())), nodes_(s.structure().node_count), count_(s.size()) {
    wx_.resize(count_ * m_);
    wy_.resize(count_ * m_);
    rx_.resize(count_ * m_);
    ry_.resize(count_ * m_);
    xx2_.resize(count_);
    yy2_.resize(count_);
    xy2_.resize(count_);
    u_.resize(count_);
    v_.resize(count_);
    for (std::size_t i = 0; i < count_; ++i) {
      const Observation o = s[i];
      u_[i] = static_cast<std::size_t>(o.u);
      v_[i] = static_cast<std::size_t>(o.v);
      std::size_t k = 0;
      for (int a = 0; a < n_; ++a) {
        for (int b = a; b < n_; ++b, ++k) {
          const double w = a == b ? 1.0 : 2.0;
          const double px = o.x[static_cast<std::size_t>(a)] * o.x[static_cast<std::size_t>(b)];
          const double py = o.y[static_cast<std::size_t>(a)] * o.y[static_cast<std::size_t>(b)];
          rx_[i * m_ + k] = px;
          ry_[i * m_ + k] = py;
          wx_[i * m_ + k] = w * px;
          wy_[i * m_ + k] = w * py;
        }
      }
      const double x2 = dot(o.x, o.x);
      const double y2 = dot(o.y, o.y);
      const double xy = dot(o.x, o.y);
      xx2_[i] = x2 * x2;
      yy2_[i] = y2 * y2;
      xy2_[i] = xy * xy;
    }
  }

  [[nodiscard]] std::size_t size() const { return count_; }
  [[nodiscard]] std::size_t packed() const { return m_; }
  [[nodiscard]] std::size_t nodes() const { return nodes_; }
  [[nodiscard]] int dim() const { return n_; }

  [[nodiscard]] double lhs(std::size_t i, const std::vector<double>& p) const {
    return dot_block(&wy_[i * m_], &p[v_[i] * m_]);
  }
  [[nodiscard]] double rhs_form(std::size_t i, const std::vector<double>& p) const {
    return dot_block(&wx_[i * m_], &p[u_[i] * m_]);
  }

  /// (lhs - g2 * rhs) / rhs
  [[nodiscard]] double relative_residual(std::size_t i, const std::vector<double>& p, double g2) const {
    const double r = rhs_form(i, p);
    return (lhs(i, p) - g2 * r) / r;
  }

  /// Project p onto half-space i if violated; returns the relative residual
  /// seen before projecting.
  double project(std::size_t i, std::vector<double>& p, double g2) const {
    double* pu = &p[u_[i] * m_];
    double* pv = &p[v_[i] * m_];
    const double r = dot_block(&wx_[i * m_], pu);
    const double s = dot_block(&wy_[i * m_], pv) - g2 * r;
    if (s > 0.0) {
      const double nrm2 = u_[i] == v_[i] ? yy2_[i] + g2 * g2 * xx2_[i] - 2.0 * g2 * xy2_[i]
                                         : yy2_[i] + g2 * g2 * xx2_[i];
      if (nrm2 > 0.0) {
        const double t = s / nrm2;
        const double* ry = &ry_[i * m_];
        const double* rx = &rx_[i * m_];
        for (std::size_t k = 0; k < m_; ++k) pv[k] -= t * ry[k];
        for (std::size_t k = 0; k < m_; ++k) pu[k] += t * g2 * rx[k];
      }
    }
    return s / r;
  }

 private:
  double dot_block(const double* a, const double* b) const {
    double s = 0.0;
    for (std::size_t k = 0; k < m_; ++k) s += a[k] * b[k];
    return s;
  }

  int n_;
  std::size_t m_;
  std::size_t nodes_;
  std::size_t count_;
  std::vector<double> wx_, wy_, rx_, ry_;
  std::vector<double> xx2_, yy2_, xy2_;
  std::vector<std::size_t> u_, v_;
};

std::vector<double> stack(const NodeMatrices& p, std::size_t m) {
  std::vector<double> flat;
  flat.reserve(p.size() * m);
  for (const auto& s : p) flat.insert(flat.end(), s.packed().begin(), s.packed().end());
  return flat;
}

NodeMatrices unstack(const std::vector<double>& flat, int n, std::size_t nodes) {
  const std::size_t m = SymMatrix::packed_size(n);
  NodeMatrices p;
  p.reserve(nodes);
  for (std::size_t u = 0; u < nodes; ++u) {
    p.emplace_back(n, std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(u * m),
                                          flat.begin() + static_cast<std::ptrdiff_t>((u + 1) * m)));
  }
  return p;
}

void project_boxes(std::vector<double>& flat, int n, std::size_t nodes, double hi) {
  const std::size_t m = SymMatrix::packed_size(n);
  for (std::size_t u = 0; u < nodes; ++u) {
    auto first = flat.begin() + static_cast<std::ptrdiff_t>(u * m);
    SymMatrix s(n, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(m)));
    const SymMatrix c = project_psd_box(s, 1.0, hi);
    std::copy(c.packed().begin(), c.packed().end(), first);
  }
}

// Indices of the `limit` largest relative residuals above `floor`, largest first.
std::vector<std::size_t> top_residuals(const ConstraintTable& t, const std::vector<double>& p, double g2,
                                       std::size_t limit, double floor, const std::vector<bool>& skip) {
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (skip[i]) continue;
    const double r = t.relative_residual(i, p, g2);
    if (r > floor) scored.emplace_back(r, i);
  }
  const std::size_t k = std::min(limit, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) out.push_back(scored[j].second);
  return out;
}

ProbeResult run_probe(const ConstraintTable& table, double gamma, const SolverConfig& cfg, const NodeMatrices& warm) {
  const double g2 = gamma * gamma;
  const int n = table.dim();
  const std::size_t nodes = table.nodes();
  std::vector<double> p = stack(warm, table.packed());
  project_boxes(p, n, nodes, cfg.box_upper);

  std::vector<bool> in_set(table.size(), false);
  std::vector<std::size_t> working;
  auto grow = [&](std::size_t limit, double floor) {
    for (std::size_t i : top_residuals(table, p, g2, limit, floor, in_set)) {
      in_set[i] = true;
      working.push_back(i);
    }
    std::sort(working.begin(), working.end());
  };
  grow(kInitialWorkingSet, -std::numeric_limits<double>::infinity());

  ProbeResult result;
  for (std::size_t sweep = 0; sweep < cfg.max_proj_iters; ++sweep) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i : working) worst = std::max(worst, table.project(i, p, g2));
    project_boxes(p, n, nodes, cfg.box_upper);
    result.sweeps = sweep + 1;
    if (worst > cfg.tol_feas) continue;

    // The working set looked clean; certify against every sample.
    double full_worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < table.size(); ++i) full_worst = std::max(full_worst, table.relative_residual(i, p, g2));
    if (full_worst <= cfg.tol_feas) {
      result.status = ProbeStatus::kCertified;
      result.max_residual = full_worst;
      result.P = unstack(p, n, nodes);
      return result;
    }
    grow(kWorkingSetGrowth, cfg.tol_feas);
  }
  double full_worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < table.size(); ++i) full_worst = std::max(full_worst, table.relative_residual(i, p, g2));
  result.status = ProbeStatus::kNotCertified;
  result.max_residual = full_worst;
  result.P = unstack(p, n, nodes);
  return result;
}

void check_warm_start(const SampleSet& samples, const NodeMatrices& warm) {
  if (warm.size() != samples.structure().node_count) throw InputError("warm start: one matrix per node expected");
  for (const auto& m : warm) {
    if (m.dim() != samples.dim()) throw InputError("warm start: matrix dimension mismatch");
  }
}

double polish_with(const ConstraintTable& table, const std::vector<double>& flat) {
  double worst = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double den = table.rhs_form(i, flat);
    if (!(den > 0.0)) throw NumericalError("polish_gamma: P is not positive definite along a sample");
    worst = std::max(worst, table.lhs(i, flat) / den);
  }
  double g = std::sqrt(worst);
  while (g * g < worst) g = std::nextafter(g, std::numeric_limits<double>::infinity());
  return g;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(box_upper > 1.0)) throw InputError("solver: box upper bound C must exceed 1");
  if (!(tol_gamma > 0.0) || !(tol_feas > 0.0)) throw InputError("solver: tolerances must be positive");
  if (max_proj_iters == 0) throw InputError("solver: max_proj_iters must be positive");
  if (gamma_hi_rule == GammaHiRule::kFixed && !(gamma_hi_value >= 0.0)) {
    throw InputError("solver: fixed gamma_hi must be >= 0");
  }
}

NodeMatrices identity_matrices(const StructuralConstants& s) {
  return NodeMatrices(s.node_count, SymMatrix::identity(s.n));
}

ProbeResult feasibility_probe(const SampleSet& samples, double gamma, const SolverConfig& cfg) {
  return feasibility_probe(samples, gamma, cfg, identity_matrices(samples.structure()));
}

ProbeResult feasibility_probe(const SampleSet& samples, double gamma, const SolverConfig& cfg,
                              const NodeMatrices& warm_start) {
  cfg.validate();
  if (!(gamma >= 0.0)) throw InputError("feasibility_probe: gamma must be >= 0");
  if (samples.empty()) throw InputError("feasibility_probe: empty sample set");
  check_warm_start(samples, warm_start);
  const ConstraintTable table(samples);
  return run_probe(table, gamma, cfg, warm_start);
}

double polish_gamma(const SampleSet& samples, const NodeMatrices& p) {
  check_warm_start(samples, p);
  const ConstraintTable table(samples);
  return polish_with(table, stack(p, table.packed()));
}

std::vector<NodeSpectrum> spectrum_stats(const NodeMatrices& p) {
  std::vector<NodeSpectrum> out;
  out.reserve(p.size());
  for (const auto& m : p) {
    const auto e = eig_sym(m);
    out.push_back({e.eigenvalues.front(), e.eigenvalues.back()});
  }
  return out;
}

MqlfCandidate solve_sampled(const SampleSet& samples, const SolverConfig& cfg) {
  cfg.validate();
  if (samples.empty()) throw InputError("solve_sampled: empty sample set");
  const ConstraintTable table(samples);

  NodeMatrices best = identity_matrices(samples.structure());
  double hi = polish_with(table, stack(best, table.packed()));
  if (cfg.gamma_hi_rule == GammaHiRule::kFixed && cfg.gamma_hi_value < hi) {
    // A fixed bracket below the identity value still needs a certificate.
    const ProbeResult r = run_probe(table, cfg.gamma_hi_value, cfg, best);
    if (r.status == ProbeStatus::kCertified) {
      best = r.P;
      hi = std::min(cfg.gamma_hi_value, polish_with(table, stack(best, table.packed())));
    }
  }
  double lo = 0.0;
  while (hi - lo > cfg.tol_gamma) {
    const double mid = 0.5 * (lo + hi);
    const ProbeResult r = run_probe(table, mid, cfg, best);
    if (r.status == ProbeStatus::kCertified) {
      best = r.P;
      hi = std::min(mid, polish_with(table, stack(best, table.packed())));
    } else {
      lo = mid;
    }
  }

  MqlfCandidate c;
  c.gamma = polish_with(table, stack(best, table.packed()));
  c.P = std::move(best);
  c.certified = true;
  c.lambda_stats = spectrum_stats(c.P);
  return c;
}

CandidateCheck check_candidate(const SampleSet& samples, const MqlfCandidate& c, double box_upper, double tol) {
  check_warm_start(samples, c.P);
  CandidateCheck out;
  out.worst_constraint = -std::numeric_limits<double>::infinity();
  const double g2 = c.gamma * c.gamma;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Observation o = samples[i];
    const double rhs = quad_form(c.P[static_cast<std::size_t>(o.u)], o.x);
    const double lhs = quad_form(c.P[static_cast<std::size_t>(o.v)], o.y);
    const double r = (lhs - g2 * rhs) / rhs;
    out.worst_constraint = std::max(out.worst_constraint, r);
    if (!(r <= tol)) ++out.constraint_violations;
  }
  for (const auto& p : c.P) {
    const auto e = eig_sym(p);
    const double below = 1.0 - e.eigenvalues.front();
    const double above = (e.eigenvalues.back() - box_upper) / box_upper;
    const double worst = std::max(below, above);
    out.worst_box = std::max(out.worst_box, worst);
    if (!(worst <= tol)) ++out.box_violations;
  }
  return out;
}

std::vector<Vector> sphere_grid(int n, std::size_t density) {
  if (n < 1 || density == 0) throw InputError("sphere_grid: need n >= 1 and density >= 1");
  std::vector<Vector> pts;
  pts.reserve(density);
  if (n == 1) {
    pts.push_back({1.0});
    return pts;
  }
  if (n == 2) {
    for (std::size_t k = 0; k < density; ++k) {
      const double th = std::numbers::pi * static_cast<double>(k) / static_cast<double>(density);
      pts.push_back({std::cos(th), std::sin(th)});
    }
    return pts;
  }
  if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < density; ++k) {
      const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(density);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(k);
      pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return pts;
  }
  for (std::size_t k = 0; k < density; ++k) {
    Rng rng = Rng::stream(0x5EEDF00DULL, k);
    pts.push_back(sample_unit_sphere(n, rng));
  }
  return pts;
}

SampleSet grid_samples(const Csls& csls, std::size_t density) {
  SampleSet s(csls.structure());
  const auto grid = sphere_grid(csls.dim(), density);
  for (std::size_t e = 0; e < csls.automaton().edge_count(); ++e) {
    const Edge& edge = csls.automaton().edge(e);
    for (const auto& x : grid) s.append(x, edge.source, step(csls, x, e), edge.target);
  }
  return s;
}

WhiteboxResult whitebox_gamma(const Csls& csls, std::size_t grid_density, const SolverConfig& cfg) {
  const SampleSet grid = grid_samples(csls, grid_density);
  const MqlfCandidate c = solve_sampled(grid, cfg);
  double worst = 0.0;
  for (const Edge& e : csls.automaton().edges()) {
    const SymMatrix lhs = congruence(csls.matrix(e.label), c.P[static_cast<std::size_t>(e.target)]);
    worst = std::max(worst, max_generalized_eig(lhs, c.P[static_cast<std::size_t>(e.source)]));
  }
  double g = std::sqrt(std::max(0.0, worst));
  while (g * g < worst) g = std::nextafter(g, std::numeric_limits<double>::infinity());
  return {g, c.gamma, c.P};
}

CycleBound cjsr_lower_bruteforce(const Csls& csls, std::size_t max_cycle_length) {
  if (max_cycle_length == 0) throw InputError("cjsr_lower_bruteforce: max_cycle_length must be >= 1");
  CycleBound best;
  const auto cycles = csls.automaton().enumerate_cycles(max_cycle_length);
  best.cycles_examined = cycles.size();
  for (const Cycle& cyc : cycles) {
    SquareMatrix prod = SquareMatrix::identity(csls.dim());
    for (std::size_t e : cyc.edge_sequence) prod = csls.matrix(csls.automaton().edge(e).label) * prod;
    const double rho = spectral_radius(prod);
    const double v = std::pow(rho, 1.0 / static_cast<double>(cyc.length()));
    if (v > best.value || best.cycle.edge_sequence.empty()) {
      best.value = v;
      best.cycle = cyc;
    }
  }
  return best;
}

void write_certificate_report(std::ostream& out, const MqlfCandidate& c, const CandidateCheck& check,
                              std::span<const std::string> node_names) {
  out << "# MQLF certificate\n";
  out << fmt::format("gamma {:.17g}\n", c.gamma);
  out << fmt::format("certified {}\n", c.certified ? "true" : "false");
  out << fmt::format("nodes {}\n", c.P.size());
  for (std::size_t u = 0; u < c.P.size(); ++u) {
    const std::string name = u < node_names.size() ? node_names[u] : std::to_string(u);
    out << fmt::format("node {}\n", name);
    const int n = c.P[u].dim();
    for (int i = 0; i < n; ++i) {
      out << "  P";
      for (int j = 0; j < n; ++j) out << fmt::format(" {:.17g}", c.P[u](i, j));
      out << '\n';
    }
    if (u < c.lambda_stats.size()) {
      out << fmt::format("  lambda_min {:.17g}\n  lambda_max {:.17g}\n", c.lambda_stats[u].lambda_min,
                         c.lambda_stats[u].lambda_max);
    }
  }
  out << fmt::format("residual_worst_constraint {:.6e}\n", check.worst_constraint);
  out << fmt::format("residual_worst_box {:.6e}\n", check.worst_box);
  out << fmt::format("constraint_violations {}\n", check.constraint_violations);
  out << fmt::format("box_violations {}\n", check.box_violations);
}

}  // namespace csls
