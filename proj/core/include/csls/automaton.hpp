#pragma once

// Labeled directed graph constraining the switching sequence.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace csls {

class Rng;

using NodeId = int;  // dense index 0..|V|-1
using Label = int;   // 1..m

struct Edge {
  NodeId source = 0;
  NodeId target = 0;
  Label label = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct ValidationReport {
  std::vector<std::string> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// A closed path, stored as indices into Automaton::edges(). Reported in
/// canonical rotation (lexicographically smallest index sequence).
struct Cycle {
  std::vector<std::size_t> edge_sequence;
  [[nodiscard]] std::size_t length() const { return edge_sequence.size(); }
};

/// Immutable after construction. Construction does not validate; call
/// validate() (Csls construction and the config parser do).
class Automaton {
 public:
  Automaton(std::vector<std::string> node_names, std::vector<Edge> edges, int label_count);

  [[nodiscard]] std::size_t node_count() const { return names_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
  [[nodiscard]] int label_count() const { return label_count_; }
  [[nodiscard]] const std::vector<std::string>& node_names() const { return names_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const Edge& edge(std::size_t i) const { return edges_.at(i); }

  /// Index of a node by name; throws InputError when unknown.
  [[nodiscard]] NodeId node_index(const std::string& name) const;

  [[nodiscard]] ValidationReport validate() const;

  /// True iff some path (any start node) carries the label sequence.
  /// Throws InputError for labels outside 1..m.
  [[nodiscard]] bool accepts_word(std::span<const Label> labels) const;

  /// Uniform over edges: each with probability 1/|E|.
  [[nodiscard]] std::size_t sample_edge(Rng& rng) const;

  /// All primitive cycles of length <= max_length, one per rotation class,
  /// ordered by (length, canonical sequence).
  [[nodiscard]] std::vector<Cycle> enumerate_cycles(std::size_t max_length) const;

  /// Whether a sequence of edge indices chains into a closed path.
  [[nodiscard]] bool is_closed_path(std::span<const std::size_t> edge_sequence) const;

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  int label_count_ = 0;
  std::vector<std::vector<std::size_t>> out_edges_;  // node -> edge indices
};

/// The four-node automaton where no controller part fails twice in a row:
/// nodes {i, j, k, l}, labels 1 (nominal), 2, 3 (partial failures) and 4
/// (full failure).
Automaton controller_failure_automaton();

}  // namespace csls
