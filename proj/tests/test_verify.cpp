#include <gtest/gtest.h>

#include <cmath>

#include "qent/verify.hpp"

namespace {

qent::VerifyConfig config(std::size_t trials, std::uint64_t seed = 7) {
  qent::VerifyConfig c;
  c.trials = trials;
  c.seed = seed;
  return c;
}

const qent::PropertyStats* find(const qent::SuiteReport& r, const std::string& name) {
  for (const auto& p : r.properties)
    if (p.name == name) return &p;
  return nullptr;
}

TEST(SuiteRecorder, MarginsAndFailures) {
  qent::SuiteRecorder rec("demo");
  rec.set_trial(3, 10);
  rec.at_most("le", 0.5, 1.0);
  rec.at_least("ge", 0.5, 1.0);
  rec.set_trial(1, 8);
  rec.at_most("le", NAN, 1.0);
  const auto r = rec.finish(0.0);
  ASSERT_EQ(r.failures.size(), 2u);
  EXPECT_EQ(r.failures[0].trial, 1u);  // sorted by trial
  EXPECT_EQ(r.failures[1].property, "ge");
  EXPECT_DOUBLE_EQ(r.failures[1].slack, -0.5);
  EXPECT_EQ(find(r, "le")->checks, 2);
  EXPECT_EQ(find(r, "le")->passed, 1);
}

TEST(CommutingTsallis, ScalarOracle) {
  EXPECT_NEAR(qent::commuting_tsallis({0.5, 0.5}, {0.25, 0.75}, 0.5), 0.068148347421863427, 1e-15);
}

TEST(RunSuites, UnknownSuite) {
  EXPECT_THROW(qent::run_suites("no-such-suite", config(1)), qent::OutOfRange);
}

TEST(RunSuites, Deterministic) {
  const auto a = qent::run_suites("unitary-invariance", config(5));
  const auto b = qent::run_suites("unitary-invariance", config(5));
  ASSERT_EQ(a.size(), 1u);
  ASSERT_EQ(a[0].properties.size(), b[0].properties.size());
  for (std::size_t i = 0; i < a[0].properties.size(); ++i) {
    EXPECT_EQ(a[0].properties[i].worst_slack, b[0].properties[i].worst_slack);
  }
}

TEST(RunSuites, QGridOverrideRestrictsToDomain) {
  auto c = config(2);
  c.q_grid = {0.5, 1.5, 3.0};
  const auto r = qent::run_suites("nonnegativity", c);
  // two q values inside (0, 2] for three dimensions per trial
  EXPECT_EQ(find(r[0], "D_q-nonnegative")->checks, 2 * 2 * 3);
}

TEST(Suites, Nonnegativity) { EXPECT_TRUE(qent::run_suites("nonnegativity", config(200))[0].ok()); }

TEST(Suites, PseudoadditivityResidual) {
  const auto r = qent::run_suites("pseudoadditivity", config(100))[0];
  EXPECT_TRUE(r.ok());
  // worst slack is 1e-9 minus the largest residual
  EXPECT_GT(find(r, "pseudoadditivity-residual")->worst_slack, 0.0);
}

TEST(Suites, UnitaryInvariance) { EXPECT_TRUE(qent::run_suites("unitary-invariance", config(200))[0].ok()); }
TEST(Suites, Monotonicity) { EXPECT_TRUE(qent::run_suites("monotonicity", config(200))[0].ok()); }
TEST(Suites, CommutingOracle) { EXPECT_TRUE(qent::run_suites("commuting-oracle", config(100))[0].ok()); }
TEST(Suites, ArakiLieb) { EXPECT_TRUE(qent::run_suites("araki-lieb", config(200))[0].ok()); }
TEST(Suites, PureStates) { EXPECT_TRUE(qent::run_suites("pure-states", config(200))[0].ok()); }
TEST(Suites, ProductZero) { EXPECT_TRUE(qent::run_suites("product-zero", config(200))[0].ok()); }
TEST(Suites, LocalUnitary) { EXPECT_TRUE(qent::run_suites("local-unitary", config(200))[0].ok()); }
TEST(Suites, LocalChannel) { EXPECT_TRUE(qent::run_suites("local-channel", config(200))[0].ok()); }
TEST(Suites, Subadditivity) { EXPECT_TRUE(qent::run_suites("subadditivity", config(50))[0].ok()); }
TEST(Suites, Werner) { EXPECT_TRUE(qent::run_suites("werner", config(1))[0].ok()); }
TEST(Suites, ErOrdering) { EXPECT_TRUE(qent::run_suites("er-ordering", config(20))[0].ok()); }
TEST(Suites, Linalg) { EXPECT_TRUE(qent::run_suites("linalg", config(50))[0].ok()); }
TEST(Suites, States) { EXPECT_TRUE(qent::run_suites("states", config(50))[0].ok()); }
TEST(Suites, Channels) { EXPECT_TRUE(qent::run_suites("channels", config(50))[0].ok()); }

TEST(Suites, LemmaBoundAboveOne) {
  const auto r = qent::run_suites("lemma-bounds", config(200))[0];
  EXPECT_EQ(find(r, "D_q-above-umegaki")->passed, find(r, "D_q-above-umegaki")->checks);
  EXPECT_EQ(find(r, "umegaki-above-pinsker")->passed, find(r, "umegaki-above-pinsker")->checks);
}

// The trace-distance bound for q in (0,1) as stated; see README for the
// counterexample that keeps it red.
TEST(Suites, LemmaBoundBelowOne) {
  const auto r = qent::run_suites("lemma-bounds", config(200))[0];
  EXPECT_EQ(find(r, "D_q-above-trace-distance")->passed, find(r, "D_q-above-trace-distance")->checks);
}

TEST(Suites, EqualityCondition) { EXPECT_TRUE(qent::run_suites("equality", config(200))[0].ok()); }
TEST(Suites, QContinuity) { EXPECT_TRUE(qent::run_suites("q-continuity", config(200))[0].ok()); }

}  // namespace
