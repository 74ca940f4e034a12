#include "csls/automaton.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "csls/errors.hpp"
#include "csls/random.hpp"

namespace csls {

namespace {

std::vector<bool> reachable(std::size_t node_count, const std::vector<Edge>& edges, bool reverse) {
  std::vector<bool> seen(node_count, false);
  if (node_count == 0) return seen;
  std::vector<std::vector<NodeId>> adj(node_count);
  for (const Edge& e : edges) {
    const NodeId from = reverse ? e.target : e.source;
    const NodeId to = reverse ? e.source : e.target;
    adj[static_cast<std::size_t>(from)].push_back(to);
  }
  std::vector<NodeId> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

// True iff seq is its own lexicographically smallest rotation and is not a
// repetition of a shorter sequence.
bool canonical_primitive(const std::vector<std::size_t>& seq) {
  const std::size_t len = seq.size();
  for (std::size_t r = 1; r < len; ++r) {
    // Compare rotation starting at r with seq.
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t a = seq[(r + k) % len];
      const std::size_t b = seq[k];
      if (a < b) return false;  // a smaller rotation exists
      if (a > b) break;
      if (k + 1 == len) return false;  // rotation equals seq: periodic
    }
  }
  return true;
}

}  // namespace

Automaton::Automaton(std::vector<std::string> node_names, std::vector<Edge> edges, int label_count)
    : names_(std::move(node_names)), edges_(std::move(edges)), label_count_(label_count) {
  out_edges_.resize(names_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto src = static_cast<std::size_t>(edges_[i].source);
    if (edges_[i].source >= 0 && src < names_.size()) out_edges_[src].push_back(i);
  }
}

NodeId Automaton::node_index(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw InputError("unknown node '" + name + "'");
  return static_cast<NodeId>(it - names_.begin());
}

ValidationReport Automaton::validate() const {
  ValidationReport report;
  auto& v = report.violations;
  const auto nv = static_cast<NodeId>(names_.size());
  if (names_.empty()) v.emplace_back("automaton has no nodes");
  if (edges_.empty()) v.emplace_back("automaton has no edges");
  if (label_count_ < 1) v.push_back(fmt::format("label count {} must be >= 1", label_count_));

  std::set<std::string> unique_names(names_.begin(), names_.end());
  if (unique_names.size() != names_.size()) v.emplace_back("duplicate node names");

  bool endpoints_ok = true;
  std::set<std::tuple<NodeId, NodeId, Label>> seen;
  std::vector<bool> used(static_cast<std::size_t>(std::max(label_count_, 0)), false);
  for (const Edge& e : edges_) {
    if (e.source < 0 || e.source >= nv || e.target < 0 || e.target >= nv) {
      v.push_back(fmt::format("edge ({}, {}, {}) references a missing node", e.source, e.target, e.label));
      endpoints_ok = false;
      continue;
    }
    if (e.label < 1 || e.label > label_count_) {
      v.push_back(fmt::format("edge {} -> {} has label {} outside 1..{}", names_[static_cast<std::size_t>(e.source)],
                              names_[static_cast<std::size_t>(e.target)], e.label, label_count_));
    } else {
      used[static_cast<std::size_t>(e.label - 1)] = true;
    }
    if (!seen.emplace(e.source, e.target, e.label).second) {
      v.push_back(fmt::format("duplicate edge {} -> {} label {}", names_[static_cast<std::size_t>(e.source)],
                              names_[static_cast<std::size_t>(e.target)], e.label));
    }
  }
  for (std::size_t l = 0; l < used.size(); ++l) {
    if (!used[l]) v.push_back(fmt::format("label {} appears on no edge", l + 1));
  }
  if (endpoints_ok && !names_.empty()) {
    const auto fwd = reachable(names_.size(), edges_, false);
    const auto bwd = reachable(names_.size(), edges_, true);
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!fwd[i] || !bwd[i]) {
        v.push_back(fmt::format("graph is not strongly connected (node '{}' {})", names_[i],
                                !fwd[i] ? "unreachable from the first node" : "cannot reach the first node"));
        break;
      }
    }
  }
  return report;
}

bool Automaton::accepts_word(std::span<const Label> labels) const {
  for (Label l : labels) {
    if (l < 1 || l > label_count_) throw InputError(fmt::format("label {} outside 1..{}", l, label_count_));
  }
  std::vector<bool> current(names_.size(), true);
  std::vector<bool> next(names_.size());
  for (Label l : labels) {
    std::fill(next.begin(), next.end(), false);
    bool any = false;
    for (const Edge& e : edges_) {
      if (e.label == l && current[static_cast<std::size_t>(e.source)]) {
        next[static_cast<std::size_t>(e.target)] = true;
        any = true;
      }
    }
    if (!any) return false;
    current.swap(next);
  }
  return true;
}

std::size_t Automaton::sample_edge(Rng& rng) const {
  if (edges_.empty()) throw InputError("sample_edge: automaton has no edges");
  return static_cast<std::size_t>(rng.uniform_index(edges_.size()));
}

bool Automaton::is_closed_path(std::span<const std::size_t> seq) const {
  if (seq.empty()) return false;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (seq[k] >= edges_.size()) return false;
    const Edge& a = edges_[seq[k]];
    const Edge& b = edges_[seq[(k + 1) % seq.size()]];
    if (a.target != b.source) return false;
  }
  return true;
}

std::vector<Cycle> Automaton::enumerate_cycles(std::size_t max_length) const {
  std::vector<Cycle> cycles;
  if (max_length == 0) return cycles;
  std::vector<std::size_t> path;
  // Depth-first over paths whose first edge has the smallest index; the
  // canonical rotation of any cycle starts with its minimum edge index.
  for (std::size_t first = 0; first < edges_.size(); ++first) {
    const NodeId start = edges_[first].source;
    path.assign(1, first);
    auto extend = [&](auto&& self, NodeId at) -> void {
      if (at == start && canonical_primitive(path)) cycles.push_back(Cycle{path});
      if (path.size() == max_length) return;
      for (std::size_t e : out_edges_[static_cast<std::size_t>(at)]) {
        if (e < first) continue;
        path.push_back(e);
        self(self, edges_[e].target);
        path.pop_back();
      }
    };
    extend(extend, edges_[first].target);
  }
  std::sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.edge_sequence < b.edge_sequence;
  });
  return cycles;
}

Automaton controller_failure_automaton() {
  // i = 0, j = 1, k = 2, l = 3.
  return Automaton({"i", "j", "k", "l"},
                   {{0, 0, 1}, {0, 1, 2}, {1, 0, 1}, {0, 2, 3}, {2, 0, 1}, {1, 2, 3}, {2, 1, 2}, {0, 3, 4}, {3, 0, 1}},
                   4);
}

}  // namespace csls
