//
// Copyright 2026 The OTAFL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "otafl/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "otafl/aircomp.hpp"
#include "otafl/convergence.hpp"

namespace otafl {
namespace {

// c = [0.5, 1, 2], cap 1.5, d sigma^2 = 9.
SchedulingProblem WorkedExample() {
  return SchedulingProblem::Create({0.5, 1.0, 2.0}, 9, 1.0, 1.5);
}

SchedulingProblem RandomProblem(std::mt19937_64& rng, int max_n) {
  std::uniform_int_distribution<int> n_dist(1, max_n);
  std::uniform_real_distribution<double> c_dist(0.05, 5.0);
  std::uniform_int_distribution<int> d_dist(1, 60);
  std::uniform_real_distribution<double> sigma_dist(0.1, 3.0);
  std::uniform_real_distribution<double> cap_dist(0.05, 5.0);
  const int n = n_dist(rng);
  std::vector<double> c(static_cast<std::size_t>(n));
  for (double& v : c) v = c_dist(rng);
  std::sort(c.begin(), c.end());
  return SchedulingProblem::Create(c, d_dist(rng), sigma_dist(rng), cap_dist(rng));
}

TEST(ObjectivePsiTest, FullParticipationDropsDeficitTerm) {
  const SchedulingProblem p = WorkedExample();
  EXPECT_DOUBLE_EQ(ObjectivePsi(3, 0.7, p), 9.0 / (9.0 * 0.49));
}

TEST(ObjectivePsiTest, WorkedValue) {
  EXPECT_NEAR(ObjectivePsi(2, 1.0, WorkedExample()), 4.0 / 9.0 + 9.0 / 4.0, 1e-15);
}

TEST(ObjectivePsiTest, NoiseFreeReducesToDeficit) {
  const SchedulingProblem p = SchedulingProblem::Create({1, 2, 3, 4}, 5, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(ObjectivePsi(2, 1.0, p), 1.0);
  EXPECT_EQ(ObjectivePsi(4, 1.0, p), 0.0);
}

TEST(ObjectivePsiTest, RejectsInvalidArguments) {
  const SchedulingProblem p = WorkedExample();
  EXPECT_THROW(ObjectivePsi(2, 0.0, p), InvalidArgument);
  EXPECT_THROW(ObjectivePsi(0, 1.0, p), InvalidArgument);
  EXPECT_THROW(ObjectivePsi(4, 1.0, p), InvalidArgument);
}

TEST(SchedulingProblemTest, RejectsUnsortedOrNonpositive) {
  EXPECT_THROW(SchedulingProblem::Create({2.0, 1.0}, 1, 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(SchedulingProblem::Create({0.0, 1.0}, 1, 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(SchedulingProblem::Create({1.0}, 1, 1.0, 0.0), InvalidArgument);
  EXPECT_THROW(SchedulingProblem::Create({}, 1, 1.0, 1.0), InvalidArgument);
}

TEST(QSetTest, Cases) {
  EXPECT_EQ(QSet(WorkedExample()), (std::vector<int>{1, 2}));
  EXPECT_TRUE(QSet(SchedulingProblem::Create({2.0, 3.0}, 1, 1.0, 1.5)).empty());
  EXPECT_EQ(QSet(SchedulingProblem::Create({0.1, 0.2, 0.3}, 1, 1.0, 1.0)),
            (std::vector<int>{1, 2, 3}));
  // c_1 equal to the cap is not strictly below it.
  EXPECT_TRUE(QSet(SchedulingProblem::Create({1.5, 3.0}, 1, 1.0, 1.5)).empty());
}

TEST(EnumerateCandidatesTest, WorkedExample) {
  const auto cands = EnumerateCandidates(WorkedExample());
  ASSERT_EQ(cands.size(), 3u);
  EXPECT_EQ(cands[0].theta, 0.5);
  EXPECT_EQ(cands[0].k_size, 3);
  EXPECT_EQ(cands[1].theta, 1.0);
  EXPECT_EQ(cands[1].k_size, 2);
  EXPECT_EQ(cands[2].theta, 1.5);
  EXPECT_EQ(cands[2].k_size, 1);
  EXPECT_NEAR(cands[0].objective, 4.0, 1e-15);
  EXPECT_NEAR(cands[1].objective, 2.69444444444444, 1e-13);
  EXPECT_NEAR(cands[2].objective, 5.77777777777778, 1e-13);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(cands[i].index, i + 1);
}

TEST(EnumerateCandidatesTest, EmptyQYieldsSingleCapCandidate) {
  const auto cands = EnumerateCandidates(SchedulingProblem::Create({2.0, 3.0}, 4, 1.0, 1.5));
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_EQ(cands[0].theta, 1.5);
  EXPECT_EQ(cands[0].k_size, 2);
}

TEST(EnumerateCandidatesTest, DuplicatesCollapseToLargerSet) {
  const SchedulingProblem p = SchedulingProblem::Create({0.5, 0.5, 1.0, 3.0}, 4, 1.0, 2.0);
  const auto cands = EnumerateCandidates(p);
  ASSERT_EQ(cands.size(), 3u);
  EXPECT_EQ(cands[0].theta, 0.5);
  EXPECT_EQ(cands[0].k_size, 4);
  EXPECT_EQ(cands[1].theta, 1.0);
  EXPECT_EQ(cands[1].index, 3);
  EXPECT_EQ(cands[2].theta, 2.0);
  EXPECT_EQ(cands[2].index, 4);
}

TEST(EnumerateCandidatesTest, CapCornerOmittedWhenNobodyReachesCap) {
  const auto cands = EnumerateCandidates(SchedulingProblem::Create({0.1, 0.2}, 1, 1.0, 5.0));
  ASSERT_EQ(cands.size(), 2u);
  EXPECT_EQ(cands.back().theta, 0.2);
}

TEST(EnumerateCandidatesTest, EveryCandidateFeasible) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const SchedulingProblem p = RandomProblem(rng, 15);
    for (const Candidate& cand : EnumerateCandidates(p)) {
      EXPECT_LE(cand.theta, p.theta_cap);
      EXPECT_LE(cand.theta, p.c[cand.first_position]);
      EXPECT_EQ(cand.k_size, p.size() - cand.first_position);
    }
  }
}

TEST(SolveTest, WorkedExample) {
  const SchedulingDecision d = Solve(WorkedExample());
  EXPECT_EQ(d.scheduled, (std::vector<int>{2, 3}));
  EXPECT_EQ(d.theta, 1.0);
  EXPECT_NEAR(d.objective, 2.69444444444444, 1e-13);
  EXPECT_EQ(d.candidate_index, 2);
}

TEST(SolveTest, LemmaTwoRegime) {
  const SchedulingDecision d = Solve(SchedulingProblem::Create({2.0, 3.0}, 4, 1.0, 1.5));
  EXPECT_EQ(d.scheduled, (std::vector<int>{1, 2}));
  EXPECT_EQ(d.theta, 1.5);
}

TEST(SolveTest, SingleDevice) {
  EXPECT_EQ(Solve(SchedulingProblem::Create({0.7}, 3, 1.0, 2.0)).theta, 0.7);
  const SchedulingDecision d = Solve(SchedulingProblem::Create({3.0}, 3, 1.0, 2.0));
  EXPECT_EQ(d.scheduled, (std::vector<int>{1}));
  EXPECT_EQ(d.theta, 2.0);
}

TEST(SolveTest, ReportsFleetIds) {
  const Fleet fleet({{10, 0.5, 0.0, 1.0}, {20, 2.0, 0.0, 1.0}, {30, 1.0, 0.0, 1.0}});
  const SchedulingDecision d = Solve(SchedulingProblem::FromFleet(fleet, 9, 1.0, 1.5));
  EXPECT_EQ(d.scheduled, (std::vector<int>{20, 30}));
}

TEST(SolveTest, NoiseFreeSchedulesEveryone) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    SchedulingProblem p = RandomProblem(rng, 12);
    p.noise_std = 0.0;
    EXPECT_EQ(Solve(p).k_size(), p.size());
  }
}

TEST(SolveTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 400; ++trial) {
    const SchedulingProblem p = RandomProblem(rng, 10);
    const SchedulingDecision fast = Solve(p);
    const SchedulingDecision slow = BruteForceOracle(p);
    EXPECT_NEAR(fast.objective, slow.objective, 1e-12 * slow.objective);
    EXPECT_EQ(fast.k_size(), slow.k_size());
    EXPECT_EQ(fast.theta, slow.theta);
  }
}

TEST(SolveTest, DecisionsAreFeasible) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 20;
    const Fleet fleet = SampleFleet(n, 4.0, 0.1, static_cast<std::uint64_t>(trial));
    const SchedulingProblem p = SchedulingProblem::FromFleet(fleet, 10, 1.0, 1.0 + trial % 3);
    const SchedulingDecision d = Solve(p);
    EXPECT_LE(d.theta, p.theta_cap * (1.0 + kFeasibilityTolerance));
    double min_c = 1e300;
    for (int id : d.scheduled) min_c = std::min(min_c, fleet.Find(id).Coefficient());
    EXPECT_LE(d.theta, min_c * (1.0 + kFeasibilityTolerance));
    const double grad_bound = 0.5 + trial % 4;
    const AggregationSpec spec{AlignmentFor(d, grad_bound), 1.0, 10, d.scheduled};
    const PowerScaling scaling = ComputePowerScaling(fleet, spec, grad_bound);
    for (const auto& [id, phi] : scaling.factors) {
      EXPECT_GE(phi, 0.0);
      EXPECT_LE(phi, 1.0 + kFeasibilityTolerance);
    }
    EXPECT_NEAR(d.objective,
                ObjectivePsi(d.k_size(), d.theta, p), 1e-12 * d.objective);
  }
}

TEST(SolveTest, PenaltyFormAgreesWithNormalizedObjective) {
  // Phi(K, theta / grad_bound) = grad_bound^2 * Psi(K, theta).
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const SchedulingProblem p = RandomProblem(rng, 12);
    const SchedulingDecision d = Solve(p);
    const double grad_bound = 0.3 + trial % 7;
    LearningConstants constants;
    constants.grad_bound = grad_bound;
    const double phi = PhiPenalty(d.k_size(), p.size(), AlignmentFor(d, grad_bound),
                                  constants, p.dimension, p.noise_std);
    EXPECT_NEAR(phi, grad_bound * grad_bound * d.objective, 1e-11 * phi);
  }
}

TEST(BruteForceOracleTest, WorkedExampleAndLimits) {
  const SchedulingDecision d = BruteForceOracle(WorkedExample());
  EXPECT_EQ(d.scheduled, (std::vector<int>{2, 3}));
  EXPECT_EQ(d.theta, 1.0);
  EXPECT_EQ(d.candidate_index, 2);
  const SchedulingProblem single = SchedulingProblem::Create({0.4}, 2, 1.0, 1.0);
  EXPECT_EQ(BruteForceOracle(single).objective, Solve(single).objective);
  EXPECT_THROW(BruteForceOracle(SchedulingProblem::Create(std::vector<double>(21, 1.0), 1, 1.0, 1.0)),
               InvalidArgument);
}

TEST(BeatsFullParticipationTest, BeatsExample) {
  const SchedulingProblem p = SchedulingProblem::Create({0.5, 4.0}, 16, 1.0, 3.0);
  SchedulingDecision d;
  d.scheduled = {2};
  d.theta = 2.0;
  const Lemma5Report r = BeatsFullParticipation(d, p);
  EXPECT_EQ(r.verdict, Lemma5Verdict::kBeats);
  EXPECT_NEAR(r.radicand, 0.75, 1e-15);
  EXPECT_NEAR(r.threshold, 1.15470053837925, 1e-13);
  EXPECT_NEAR(r.decision_objective, 5.0, 1e-15);
  EXPECT_NEAR(r.baseline_objective, 16.0, 1e-15);
}

TEST(BeatsFullParticipationTest, ZeroRadicandIsVacuous) {
  const SchedulingProblem p = SchedulingProblem::Create({0.5, 1.0, 2.0}, 9, 1.0, 1.5);
  const Lemma5Report r = BeatsFullParticipation(Solve(p), p);
  EXPECT_EQ(r.radicand, 0.0);
  EXPECT_EQ(r.verdict, Lemma5Verdict::kConditionVacuous);
}

TEST(BeatsFullParticipationTest, SamePointIsEquivalent) {
  const SchedulingProblem p = SchedulingProblem::Create({0.5, 1.0, 2.0}, 9, 1.0, 1.5);
  EXPECT_EQ(BeatsFullParticipation(FullParticipation(p), p).verdict,
            Lemma5Verdict::kEquivalent);
  const SchedulingProblem lemma2 = SchedulingProblem::Create({2.0, 3.0}, 4, 1.0, 1.5);
  EXPECT_EQ(BeatsFullParticipation(Solve(lemma2), lemma2).verdict,
            Lemma5Verdict::kEquivalent);
}

TEST(BeatsFullParticipationTest, NotBeatsBelowThreshold) {
  const SchedulingProblem p = SchedulingProblem::Create({0.5, 0.6, 4.0}, 100, 1.0, 3.0);
  SchedulingDecision d;
  d.scheduled = {2, 3};
  d.theta = 0.6;
  const Lemma5Report r = BeatsFullParticipation(d, p);
  ASSERT_GT(r.radicand, 0.0);
  EXPECT_LT(2 * 0.6, r.threshold);
  EXPECT_EQ(r.verdict, Lemma5Verdict::kNotBeats);
}

TEST(BeatsFullParticipationTest, VerdictIsSound) {
  std::mt19937_64 rng(77);
  int beats = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const SchedulingProblem p = RandomProblem(rng, 12);
    const Lemma5Report r = BeatsFullParticipation(Solve(p), p);
    if (r.verdict == Lemma5Verdict::kBeats) {
      ++beats;
      EXPECT_LE(r.decision_objective, r.baseline_objective);
    }
  }
  EXPECT_GT(beats, 0);
}

TEST(VerdictNamesTest, StableStrings) {
  EXPECT_EQ(ToString(Lemma5Verdict::kBeats), "beats");
  EXPECT_EQ(ToString(Lemma5Verdict::kNotBeats), "not_beats");
  EXPECT_EQ(ToString(Lemma5Verdict::kEquivalent), "equivalent");
  EXPECT_EQ(ToString(Lemma5Verdict::kConditionVacuous), "condition_vacuous");
}

}  // namespace
}  // namespace otafl
