#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "csls/errors.hpp"
#include "csls/random.hpp"
#include "csls/system.hpp"

namespace csls {
namespace {

Csls single_mode(const SquareMatrix& a) { return Csls(Automaton({"a"}, {{0, 0, 1}}, 1), {a}); }

TEST(Csls, ExampleMatricesAreClosedLoops) {
  const Csls sys = controller_failure_system();
  // A + B K with B = (0, 1)^T: only the second row moves.
  const SquareMatrix& a1 = sys.matrix(1);
  EXPECT_DOUBLE_EQ(a1(0, 0), 0.47);
  EXPECT_DOUBLE_EQ(a1(0, 1), 0.28);
  EXPECT_NEAR(a1(1, 0), 0.07 - 0.245, 1e-15);
  EXPECT_NEAR(a1(1, 1), 0.23 + 0.135, 1e-15);
  EXPECT_NEAR(sys.matrix(2)(1, 0), 0.07, 1e-15);
  EXPECT_NEAR(sys.matrix(3)(1, 1), 0.23, 1e-15);
  EXPECT_EQ(sys.matrix(4), SquareMatrix(2, {0.47, 0.28, 0.07, 0.23}));
  const StructuralConstants s = sys.structure();
  EXPECT_EQ(s.n, 2);
  EXPECT_EQ(s.node_count, 4u);
  EXPECT_EQ(s.edge_count, 9u);
  EXPECT_EQ(s.label_count, 4);
}

TEST(Csls, RejectsBadInput) {
  const Automaton g = controller_failure_automaton();
  EXPECT_THROW(Csls(g, {SquareMatrix::identity(2)}), InputError);
  EXPECT_THROW(Csls(g, {SquareMatrix::identity(2), SquareMatrix::identity(2), SquareMatrix::identity(3),
                        SquareMatrix::identity(2)}),
               InputError);
  EXPECT_THROW(Csls(Automaton({"u", "v"}, {{0, 1, 1}}, 1), {SquareMatrix::identity(2)}), InputError);
  EXPECT_THROW(single_mode(SquareMatrix(2, {1.0, NAN, 0.0, 1.0})), InputError);
}

TEST(Step, Examples) {
  const Csls sys = controller_failure_system();
  const Vector zero{0.0, 0.0};
  for (std::size_t e = 0; e < 9; ++e) EXPECT_EQ(step(sys, zero, e), zero);
  // Edge 7 is (i, l, 4), A_4 = A.
  const Vector y = step(sys, Vector{1.0, 0.0}, 7);
  EXPECT_DOUBLE_EQ(y[0], 0.47);
  EXPECT_DOUBLE_EQ(y[1], 0.07);
  const Vector x{0.3, -0.8};
  const Vector x2{0.6, -1.6};
  for (std::size_t e = 0; e < 9; ++e) {
    const Vector a = step(sys, x, e);
    const Vector b = step(sys, x2, e);
    EXPECT_DOUBLE_EQ(b[0], 2.0 * a[0]);
    EXPECT_DOUBLE_EQ(b[1], 2.0 * a[1]);
  }
  EXPECT_THROW(step(sys, Vector{1.0}, 0), InputError);
  EXPECT_THROW(step(sys, x, 9), InputError);
}

TEST(SampleUnitSphere, UnitNormAndReproducible) {
  Rng a(9);
  Rng b(9);
  for (int n : {2, 3, 5}) {
    for (int k = 0; k < 1000; ++k) {
      const Vector x = sample_unit_sphere(n, a);
      ASSERT_EQ(x.size(), static_cast<std::size_t>(n));
      EXPECT_NEAR(norm2(x), 1.0, 1e-15);
      EXPECT_EQ(x, sample_unit_sphere(n, b));
    }
  }
}

TEST(SampleUnitSphere, AnglesUniformOnCircle) {
  Rng rng(4242);
  constexpr int kBins = 36;
  constexpr int kDraws = 100000;
  int counts[kBins] = {};
  for (int k = 0; k < kDraws; ++k) {
    const Vector x = sample_unit_sphere(2, rng);
    double theta = std::atan2(x[1], x[0]);
    if (theta < 0) theta += 2.0 * std::numbers::pi;
    ++counts[std::min(kBins - 1, static_cast<int>(theta / (2.0 * std::numbers::pi) * kBins))];
  }
  const double expect = static_cast<double>(kDraws) / kBins;
  const double sd = std::sqrt(expect * (1.0 - 1.0 / kBins));
  double chi2 = 0.0;
  for (int c : counts) {
    EXPECT_NEAR(c, expect, 3.5 * sd);
    chi2 += (c - expect) * (c - expect) / expect;
  }
  EXPECT_LT(chi2, 66.62);  // chi-square, 35 dof, p = 0.001
}

TEST(DrawObservations, ConsistentWithHiddenEdges) {
  const Csls sys = controller_failure_system();
  const OracleSamples d = draw_observations(sys, 5000, 3);
  ASSERT_EQ(d.samples.size(), 5000u);
  ASSERT_EQ(d.edge_indices.size(), 5000u);
  std::vector<int> counts(9, 0);
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    const Observation o = d.samples[i];
    const Edge& e = sys.automaton().edge(d.edge_indices[i]);
    EXPECT_EQ(o.u, e.source);
    EXPECT_EQ(o.v, e.target);
    EXPECT_EQ(d.hidden_labels[i], e.label);
    const Vector y = sys.matrix(e.label) * o.x;
    EXPECT_EQ(y[0], o.y[0]);
    EXPECT_EQ(y[1], o.y[1]);
    EXPECT_NEAR(norm2(o.x), 1.0, 1e-15);
    ++counts[d.edge_indices[i]];
  }
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - 5000.0 / 9) * (c - 5000.0 / 9) / (5000.0 / 9);
  EXPECT_LT(chi2, 26.12);
}

TEST(DrawObservations, NestedAndDeterministic) {
  const Csls sys = controller_failure_system();
  const OracleSamples big = draw_observations(sys, 1000, 11);
  const OracleSamples small = draw_observations(sys, 100, 11);
  const OracleSamples other = draw_observations(sys, 100, 12);
  std::ostringstream a;
  std::ostringstream b;
  std::ostringstream c;
  write_samples_csv(a, big.samples.prefix(100));
  write_samples_csv(b, small.samples);
  write_samples_csv(c, other.samples);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(b.str(), c.str());
}

TEST(DrawObservations, ZeroRejected) {
  EXPECT_THROW(draw_observations(controller_failure_system(), 0, 1), InputError);
}

TEST(EtaSampled, Examples) {
  SampleSet z({2, 1, 1, 1});
  const Vector x{1.0, 0.0};
  const Vector zero{0.0, 0.0};
  z.append(x, 0, zero, 0);
  z.append(Vector{0.0, 1.0}, 0, zero, 0);
  EXPECT_EQ(eta_sampled(z), 0.0);

  SampleSet one({2, 1, 1, 1});
  one.append(x, 0, Vector{3.0, 4.0}, 0);
  EXPECT_DOUBLE_EQ(eta_sampled(one), 5.0);

  EXPECT_THROW(eta_sampled(SampleSet({2, 1, 1, 1})), InputError);
}

TEST(EtaSampled, BoundedByWhiteboxAndMonotone) {
  const Csls sys = controller_failure_system();
  const double white = max_norm_whitebox(sys);
  const OracleSamples d = draw_observations(sys, 50000, 5);
  double prev = 0.0;
  for (std::size_t n : {10u, 100u, 1000u, 10000u, 50000u}) {
    const double eta = eta_sampled(d.samples.prefix(n));
    EXPECT_GE(eta, prev);
    EXPECT_LE(eta, white);
    prev = eta;
  }
  EXPECT_NEAR(prev, white, 1e-4);
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    EXPECT_LE(norm2(d.samples[i].y), white * norm2(d.samples[i].x) * (1.0 + 1e-15));
  }
}

TEST(MaxNormWhitebox, Examples) {
  EXPECT_DOUBLE_EQ(max_norm_whitebox(single_mode(SquareMatrix::identity(2))), 1.0);
  const Automaton two({"a"}, {{0, 0, 1}, {0, 0, 2}}, 2);
  const Csls s(two, {SquareMatrix(2, {0.5, 0.0, 0.0, 2.0}), SquareMatrix(2, {3.0, 0.0, 0.0, 0.0})});
  EXPECT_DOUBLE_EQ(max_norm_whitebox(s), 3.0);
  // Largest singular value over the four modes (numpy oracle, mode 2).
  EXPECT_NEAR(max_norm_whitebox(controller_failure_system()), 0.6132065253445537, 1e-13);
}

TEST(Simulate, Examples) {
  const Csls sys = controller_failure_system();
  const Vector x0{1.0, 1.0};
  const auto still = simulate(sys, x0, std::vector<Label>{});
  ASSERT_EQ(still.size(), 1u);
  EXPECT_EQ(still[0], x0);

  const std::vector<Label> nominal(30, 1);
  const auto traj = simulate(sys, x0, nominal);
  ASSERT_EQ(traj.size(), 31u);
  EXPECT_LT(norm2(traj.back()), 1e-6 * norm2(x0));

  const std::vector<Label> word{1, 4, 1, 3, 2, 1};
  const auto t1 = simulate(sys, x0, word);
  const auto t2 = simulate(sys, Vector{-3.0, -3.0}, word);
  for (std::size_t k = 0; k < t1.size(); ++k) {
    EXPECT_NEAR(t2[k][0], -3.0 * t1[k][0], 1e-15);
    EXPECT_NEAR(t2[k][1], -3.0 * t1[k][1], 1e-15);
  }
  EXPECT_THROW(simulate(sys, x0, std::vector<Label>{4, 4}), InputError);
}

TEST(SampleSet, AppendChecksShape) {
  SampleSet s({2, 2, 2, 1});
  EXPECT_THROW(s.append(Vector{1.0}, 0, Vector{1.0, 0.0}, 0), InputError);
  EXPECT_THROW(s.append(Vector{1.0, 0.0}, 2, Vector{1.0, 0.0}, 0), InputError);
  EXPECT_THROW(s.append(Vector{1.0, 0.0}, 0, Vector{1.0, 0.0}, -1), InputError);
  s.append(Vector{1.0, 0.0}, 1, Vector{0.5, 0.5}, 0);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].u, 1);
  EXPECT_EQ(s[0].y[1], 0.5);
}

TEST(SamplesCsv, RoundTripIsExact) {
  const Csls sys = controller_failure_system();
  const OracleSamples d = draw_observations(sys, 300, 8);
  std::stringstream io;
  write_samples_csv(io, d.samples);
  const SampleSet back = read_samples_csv(io, sys.structure());
  ASSERT_EQ(back.size(), d.samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].u, d.samples[i].u);
    EXPECT_EQ(back[i].v, d.samples[i].v);
    for (int k = 0; k < 2; ++k) {
      EXPECT_EQ(back[i].x[k], d.samples[i].x[k]);
      EXPECT_EQ(back[i].y[k], d.samples[i].y[k]);
    }
  }
  EXPECT_EQ(io.str().find("label"), std::string::npos);
}

TEST(SamplesCsv, MalformedInputNamesTheLine) {
  std::istringstream bad("idx,u,v,x_1,x_2,y_1,y_2\n0,0,1,1,0,0.5,0.5\n1,0,1,oops,0,0,0\n");
  try {
    (void)read_samples_csv(bad, controller_failure_system().structure());
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace csls
