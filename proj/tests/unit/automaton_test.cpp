#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "csls/automaton.hpp"
#include "csls/errors.hpp"
#include "csls/random.hpp"

namespace csls {
namespace {

Automaton self_loop() { return Automaton({"a"}, {{0, 0, 1}}, 1); }

std::vector<Label> labels_of(const Automaton& g, const Cycle& c) {
  std::vector<Label> out;
  for (std::size_t e : c.edge_sequence) out.push_back(g.edge(e).label);
  return out;
}

// Every closed walk of length <= L, reduced to primitive walks in their
// smallest rotation.
std::set<std::vector<std::size_t>> brute_force_cycles(const Automaton& g, std::size_t max_len) {
  std::set<std::vector<std::size_t>> out;
  const std::size_t e = g.edge_count();
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::size_t> seq(len, 0);
    while (true) {
      if (g.is_closed_path(seq)) {
        bool primitive = true;
        for (std::size_t p = 1; p < len && primitive; ++p) {
          if (len % p != 0) continue;
          bool periodic = true;
          for (std::size_t k = 0; k < len; ++k) periodic = periodic && seq[k] == seq[(k + p) % len];
          if (periodic) primitive = false;
        }
        if (primitive) {
          std::vector<std::size_t> best = seq;
          for (std::size_t r = 1; r < len; ++r) {
            std::vector<std::size_t> rot(seq.begin() + static_cast<std::ptrdiff_t>(r), seq.end());
            rot.insert(rot.end(), seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(r));
            best = std::min(best, rot);
          }
          out.insert(best);
        }
      }
      std::size_t k = 0;
      while (k < len && ++seq[k] == e) seq[k++] = 0;
      if (k == len) break;
    }
  }
  return out;
}

TEST(Validate, ControllerFailureAutomatonIsValid) {
  const Automaton g = controller_failure_automaton();
  EXPECT_TRUE(g.validate().ok());
  EXPECT_EQ(g.node_count(), 4u);
  EXPECT_EQ(g.edge_count(), 9u);
  EXPECT_EQ(g.label_count(), 4);
  EXPECT_EQ(g.node_index("i"), 0);
  EXPECT_EQ(g.node_index("l"), 3);
  EXPECT_THROW((void)g.node_index("z"), InputError);
}

TEST(Validate, SingleSelfLoop) { EXPECT_TRUE(self_loop().validate().ok()); }

TEST(Validate, NotStronglyConnected) {
  const Automaton g({"u", "v"}, {{0, 1, 1}}, 1);
  const ValidationReport r = g.validate();
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.violations.front().find("strongly connected"), std::string::npos);
}

TEST(Validate, ReportsEveryProblem) {
  // Duplicate edge, label 3 out of range, label 2 unused.
  const Automaton g({"u", "v"}, {{0, 1, 1}, {1, 0, 1}, {1, 0, 1}, {0, 0, 3}}, 2);
  const ValidationReport r = g.validate();
  EXPECT_GE(r.violations.size(), 3u);
}

TEST(Validate, EmptyGraph) { EXPECT_FALSE(Automaton({}, {}, 0).validate().ok()); }

TEST(AcceptsWord, Examples) {
  const Automaton g = controller_failure_automaton();
  const std::vector<Label> nominal{1, 1, 1};
  const std::vector<Label> double_failure{4, 4};
  EXPECT_TRUE(g.accepts_word(nominal));
  EXPECT_FALSE(g.accepts_word(double_failure));
  EXPECT_TRUE(g.accepts_word(std::vector<Label>{}));
  EXPECT_TRUE(g.accepts_word(std::vector<Label>{3, 2, 1, 4, 1}));
  EXPECT_FALSE(g.accepts_word(std::vector<Label>{2, 2}));
  EXPECT_THROW((void)g.accepts_word(std::vector<Label>{5}), InputError);
  EXPECT_THROW((void)g.accepts_word(std::vector<Label>{0}), InputError);
}

TEST(AcceptsWord, RandomWalksAreAccepted) {
  const Automaton g = controller_failure_automaton();
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    NodeId at = static_cast<NodeId>(rng.uniform_index(g.node_count()));
    std::vector<Label> word;
    for (int step = 0; step < 25; ++step) {
      std::vector<std::size_t> out;
      for (std::size_t e = 0; e < g.edge_count(); ++e)
        if (g.edge(e).source == at) out.push_back(e);
      const Edge& pick = g.edge(out[rng.uniform_index(out.size())]);
      word.push_back(pick.label);
      at = pick.target;
    }
    EXPECT_TRUE(g.accepts_word(word));
  }
}

TEST(SampleEdge, UniformOverEdges) {
  const Automaton g = controller_failure_automaton();
  Rng rng(12345);
  std::vector<int> counts(g.edge_count(), 0);
  for (int k = 0; k < 90000; ++k) ++counts[g.sample_edge(rng)];
  double chi2 = 0.0;
  for (int c : counts) {
    EXPECT_NEAR(c, 10000, 500);
    chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
  }
  EXPECT_LT(chi2, 26.12);  // chi-square, 8 dof, p = 0.001
}

TEST(SampleEdge, SingleEdgeAndDeterminism) {
  const Automaton one = self_loop();
  Rng r0(1);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(one.sample_edge(r0), 0u);

  const Automaton g = controller_failure_automaton();
  Rng a(77);
  Rng b(77);
  for (int k = 0; k < 1000; ++k) EXPECT_EQ(g.sample_edge(a), g.sample_edge(b));
}

TEST(EnumerateCycles, LengthOne) {
  const Automaton g = controller_failure_automaton();
  const auto cycles = g.enumerate_cycles(1);
  ASSERT_EQ(cycles.size(), 1u);
  EXPECT_EQ(cycles[0].edge_sequence, (std::vector<std::size_t>{0}));
}

TEST(EnumerateCycles, LengthTwo) {
  const Automaton g = controller_failure_automaton();
  const auto cycles = g.enumerate_cycles(2);
  ASSERT_EQ(cycles.size(), 5u);
  std::set<std::vector<Label>> words;
  for (const auto& c : cycles) words.insert(labels_of(g, c));
  const std::set<std::vector<Label>> expected{{1}, {2, 1}, {3, 1}, {4, 1}, {3, 2}};
  EXPECT_EQ(words, expected);
}

TEST(EnumerateCycles, SelfLoopHasOnePrimitiveCycle) { EXPECT_EQ(self_loop().enumerate_cycles(3).size(), 1u); }

TEST(EnumerateCycles, MatchesBruteForce) {
  const Automaton g = controller_failure_automaton();
  for (std::size_t len = 1; len <= 6; ++len) {
    const auto cycles = g.enumerate_cycles(len);
    std::set<std::vector<std::size_t>> got;
    for (const auto& c : cycles) got.insert(c.edge_sequence);
    EXPECT_EQ(got.size(), cycles.size()) << "duplicates at length " << len;
    EXPECT_EQ(got, brute_force_cycles(g, len)) << "max length " << len;
  }
}

TEST(EnumerateCycles, ChainAcceptedAndOrdered) {
  const Automaton g = controller_failure_automaton();
  const auto cycles = g.enumerate_cycles(8);
  for (std::size_t k = 0; k < cycles.size(); ++k) {
    const Cycle& c = cycles[k];
    EXPECT_TRUE(g.is_closed_path(c.edge_sequence));
    EXPECT_TRUE(g.accepts_word(labels_of(g, c)));
    if (k > 0) {
      const Cycle& p = cycles[k - 1];
      EXPECT_TRUE(p.length() < c.length() || (p.length() == c.length() && p.edge_sequence < c.edge_sequence));
    }
  }
}

TEST(IsClosedPath, Examples) {
  const Automaton g = controller_failure_automaton();
  EXPECT_TRUE(g.is_closed_path(std::vector<std::size_t>{1, 2}));
  EXPECT_FALSE(g.is_closed_path(std::vector<std::size_t>{1}));
  EXPECT_FALSE(g.is_closed_path(std::vector<std::size_t>{}));
  EXPECT_FALSE(g.is_closed_path(std::vector<std::size_t>{42}));
}

}  // namespace
}  // namespace csls
