#pragma once

// Ground-truth constrained switching linear system and the black-box
// observation oracle built on it.
//
// Only the oracle side (this header's Csls, OracleSamples) ever sees the
// mode matrices or the sampled labels. Solvers and bounds consume SampleSet,
// whose observations carry (x, u, y, v) and nothing else.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "csls/automaton.hpp"
#include "csls/matrix.hpp"

namespace csls {

class Rng;

/// Public structural constants of the system: the only facts about it a
/// black-box solver is allowed to know besides the observations.
struct StructuralConstants {
  int n = 0;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  int label_count = 0;

  friend bool operator==(const StructuralConstants&, const StructuralConstants&) = default;
};

class Csls {
 public:
  /// Validates the automaton and that there is one n x n matrix per label.
  /// Throws InputError listing every violation.
  Csls(Automaton automaton, std::vector<SquareMatrix> matrices);

  [[nodiscard]] const Automaton& automaton() const { return automaton_; }
  [[nodiscard]] const std::vector<SquareMatrix>& matrices() const { return matrices_; }
  [[nodiscard]] const SquareMatrix& matrix(Label label) const { return matrices_.at(static_cast<std::size_t>(label - 1)); }
  [[nodiscard]] int dim() const { return n_; }
  [[nodiscard]] StructuralConstants structure() const;

 private:
  Automaton automaton_;
  std::vector<SquareMatrix> matrices_;
  int n_ = 0;
};

/// One observation ((x, u), (y, v)) with y = A_sigma x for a hidden sigma.
struct Observation {
  std::span<const double> x;
  NodeId u = 0;
  std::span<const double> y;
  NodeId v = 0;
};

/// N observations stored column-wise. Immutable once handed to a solver.
class SampleSet {
 public:
  explicit SampleSet(StructuralConstants structure);

  /// Throws InputError on dimension mismatch or node out of range.
  void append(std::span<const double> x, NodeId u, std::span<const double> y, NodeId v);

  [[nodiscard]] std::size_t size() const { return u_.size(); }
  [[nodiscard]] bool empty() const { return u_.empty(); }
  [[nodiscard]] int dim() const { return structure_.n; }
  [[nodiscard]] const StructuralConstants& structure() const { return structure_; }
  [[nodiscard]] Observation operator[](std::size_t i) const;

  /// The first k observations.
  [[nodiscard]] SampleSet prefix(std::size_t k) const;

 private:
  StructuralConstants structure_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<NodeId> u_;
  std::vector<NodeId> v_;
};

/// Oracle-side draw: the solver-facing samples plus what generated them.
struct OracleSamples {
  SampleSet samples;
  std::vector<std::size_t> edge_indices;  // hidden; index into automaton edges
  std::vector<Label> hidden_labels;       // hidden
};

/// A_label(edge) x. Throws InputError on dimension mismatch.
Vector step(const Csls& csls, std::span<const double> x, std::size_t edge_index);

/// Standard normal vector normalized to the unit sphere.
Vector sample_unit_sphere(int n, Rng& rng);

/// Observation i is drawn from Rng::stream(seed, i): first a uniform edge,
/// then a uniform point on the sphere. Throws InputError for N = 0.
OracleSamples draw_observations(const Csls& csls, std::size_t count, std::uint64_t seed);

/// max_i |y_i|, i.e. the sampled maximal one-step amplification (the x_i
/// are unit vectors). Throws InputError on an empty set.
double eta_sampled(const SampleSet& samples);

/// max over modes of the spectral norm (white-box).
double max_norm_whitebox(const Csls& csls);

/// x0, A_w0 x0, A_w1 A_w0 x0, ... Throws InputError if the word is not
/// accepted by the automaton.
std::vector<Vector> simulate(const Csls& csls, std::span<const double> x0, std::span<const Label> word);

/// Audit CSV: idx,u,v,x_1..x_n,y_1..y_n with node indices. Labels are never
/// written.
void write_samples_csv(std::ostream& out, const SampleSet& samples);
/// Inverse of write_samples_csv. Throws ConfigError with a line number on
/// malformed input.
SampleSet read_samples_csv(std::istream& in, const StructuralConstants& structure);

/// The controller-failure example: A_s = A + B K_s with the gains of the
/// nominal, two partial-failure and full-failure modes, on
/// controller_failure_automaton().
Csls controller_failure_system();

}  // namespace csls
