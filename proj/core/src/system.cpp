#include "csls/system.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "csls/errors.hpp"
#include "csls/random.hpp"

namespace csls {

Csls::Csls(Automaton automaton, std::vector<SquareMatrix> matrices)
    : automaton_(std::move(automaton)), matrices_(std::move(matrices)) {
  ValidationReport report = automaton_.validate();
  if (static_cast<int>(matrices_.size()) != automaton_.label_count()) {
    report.violations.push_back(fmt::format("{} matrices given for {} labels", matrices_.size(), automaton_.label_count()));
  }
  n_ = matrices_.empty() ? 0 : matrices_.front().dim();
  if (n_ < 1) report.violations.emplace_back("state dimension must be >= 1");
  for (std::size_t i = 0; i < matrices_.size(); ++i) {
    if (matrices_[i].dim() != n_) {
      report.violations.push_back(fmt::format("matrix for label {} is {}x{}, expected {}x{}", i + 1, matrices_[i].dim(),
                                              matrices_[i].dim(), n_, n_));
    }
    if (!matrices_[i].all_finite()) report.violations.push_back(fmt::format("matrix for label {} has non-finite entries", i + 1));
  }
  if (!report.ok()) {
    std::string msg = "invalid system:";
    for (const auto& v : report.violations) msg += "\n  - " + v;
    throw InputError(msg);
  }
}

StructuralConstants Csls::structure() const {
  return {n_, automaton_.node_count(), automaton_.edge_count(), automaton_.label_count()};
}

SampleSet::SampleSet(StructuralConstants structure) : structure_(structure) {
  if (structure_.n < 1) throw InputError("sample set dimension must be >= 1");
}

void SampleSet::append(std::span<const double> x, NodeId u, std::span<const double> y, NodeId v) {
  const auto n = static_cast<std::size_t>(structure_.n);
  if (x.size() != n || y.size() != n) throw InputError("observation dimension mismatch");
  const auto nodes = static_cast<NodeId>(structure_.node_count);
  if (u < 0 || u >= nodes || v < 0 || v >= nodes) throw InputError("observation node out of range");
  x_.insert(x_.end(), x.begin(), x.end());
  y_.insert(y_.end(), y.begin(), y.end());
  u_.push_back(u);
  v_.push_back(v);
}

Observation SampleSet::operator[](std::size_t i) const {
  const auto n = static_cast<std::size_t>(structure_.n);
  return {std::span<const double>(x_).subspan(i * n, n), u_.at(i), std::span<const double>(y_).subspan(i * n, n), v_[i]};
}

SampleSet SampleSet::prefix(std::size_t k) const {
  if (k > size()) throw InputError("prefix longer than sample set");
  SampleSet out(structure_);
  const auto n = static_cast<std::size_t>(structure_.n);
  out.x_.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(k * n));
  out.y_.assign(y_.begin(), y_.begin() + static_cast<std::ptrdiff_t>(k * n));
  out.u_.assign(u_.begin(), u_.begin() + static_cast<std::ptrdiff_t>(k));
  out.v_.assign(v_.begin(), v_.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

Vector step(const Csls& csls, std::span<const double> x, std::size_t edge_index) {
  if (x.size() != static_cast<std::size_t>(csls.dim())) throw InputError("step: state dimension mismatch");
  if (edge_index >= csls.automaton().edge_count()) throw InputError("step: edge index out of range");
  const Edge& e = csls.automaton().edge(edge_index);
  return csls.matrix(e.label) * x;
}

Vector sample_unit_sphere(int n, Rng& rng) {
  if (n < 1) throw InputError("sample_unit_sphere: n must be >= 1");
  Vector x(static_cast<std::size_t>(n));
  for (;;) {
    double s = 0.0;
    for (double& v : x) {
      v = rng.normal();
      s += v * v;
    }
    if (s > 0.0) {
      const double inv = 1.0 / std::sqrt(s);
      for (double& v : x) v *= inv;
      return x;
    }
  }
}

OracleSamples draw_observations(const Csls& csls, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw InputError("draw_observations: N must be >= 1");
  OracleSamples out{SampleSet(csls.structure()), {}, {}};
  out.edge_indices.reserve(count);
  out.hidden_labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = Rng::stream(seed, i);
    const std::size_t e = csls.automaton().sample_edge(rng);
    const Vector x = sample_unit_sphere(csls.dim(), rng);
    const Vector y = step(csls, x, e);
    const Edge& edge = csls.automaton().edge(e);
    out.samples.append(x, edge.source, y, edge.target);
    out.edge_indices.push_back(e);
    out.hidden_labels.push_back(edge.label);
  }
  return out;
}

double eta_sampled(const SampleSet& samples) {
  if (samples.empty()) throw InputError("eta_sampled: empty sample set");
  double eta = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) eta = std::max(eta, norm2(samples[i].y));
  return eta;
}

double max_norm_whitebox(const Csls& csls) {
  double best = 0.0;
  for (const auto& a : csls.matrices()) best = std::max(best, spectral_norm(a));
  return best;
}

std::vector<Vector> simulate(const Csls& csls, std::span<const double> x0, std::span<const Label> word) {
  if (x0.size() != static_cast<std::size_t>(csls.dim())) throw InputError("simulate: state dimension mismatch");
  if (!csls.automaton().accepts_word(word)) throw InputError("simulate: word is not accepted by the automaton");
  std::vector<Vector> traj;
  traj.reserve(word.size() + 1);
  traj.emplace_back(x0.begin(), x0.end());
  for (Label l : word) traj.push_back(csls.matrix(l) * traj.back());
  return traj;
}

void write_samples_csv(std::ostream& out, const SampleSet& samples) {
  const int n = samples.dim();
  out << "idx,u,v";
  for (int k = 1; k <= n; ++k) out << ",x_" << k;
  for (int k = 1; k <= n; ++k) out << ",y_" << k;
  out << '\n';
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Observation o = samples[i];
    out << fmt::format("{},{},{}", i, o.u, o.v);
    for (double v : o.x) out << fmt::format(",{:.17g}", v);
    for (double v : o.y) out << fmt::format(",{:.17g}", v);
    out << '\n';
  }
}

SampleSet read_samples_csv(std::istream& in, const StructuralConstants& structure) {
  SampleSet samples(structure);
  const auto n = static_cast<std::size_t>(structure.n);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ConfigError("samples csv: missing header");
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 3 + 2 * n) {
      throw ConfigError(fmt::format("samples csv line {}: expected {} fields, got {}", line_no, 3 + 2 * n, fields.size()));
    }
    try {
      Vector x(n);
      Vector y(n);
      const int u = std::stoi(fields[1]);
      const int v = std::stoi(fields[2]);
      for (std::size_t k = 0; k < n; ++k) {
        x[k] = std::stod(fields[3 + k]);
        y[k] = std::stod(fields[3 + n + k]);
      }
      samples.append(x, u, y, v);
    } catch (const std::logic_error& e) {
      throw ConfigError(fmt::format("samples csv line {}: {}", line_no, e.what()));
    }
  }
  return samples;
}

Csls controller_failure_system() {
  const SquareMatrix a(2, {0.47, 0.28, 0.07, 0.23});
  const double k1 = -0.245;
  const double k2 = 0.135;
  // B = (0, 1)^T, so B K only touches the second row.
  auto closed_loop = [&](double g1, double g2) {
    SquareMatrix m = a;
    m(1, 0) += g1;
    m(1, 1) += g2;
    return m;
  };
  return Csls(controller_failure_automaton(),
              {closed_loop(k1, k2), closed_loop(0.0, k2), closed_loop(k1, 0.0), closed_loop(0.0, 0.0)});
}

}  // namespace csls
