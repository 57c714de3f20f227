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

#include "otafl/dpcore.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

namespace otafl {
namespace {

// Values below were evaluated independently from sqrt(2 ln(1.25/delta)).
constexpr double kMultiplierAt0p1 = 2.24754472449749;
constexpr double kMultiplierAt0p05 = 2.53727248235904;

TEST(PrivacyMultiplierTest, KnownValues) {
  EXPECT_NEAR(PrivacyMultiplier(0.1), kMultiplierAt0p1, 1e-13);
  EXPECT_NEAR(PrivacyMultiplier(0.05), kMultiplierAt0p05, 1e-13);
  EXPECT_NEAR(PrivacyMultiplier(1.25 * std::exp(-0.5)), 1.0, 1e-15);
}

TEST(PrivacyMultiplierTest, RejectsDeltaOutsideUnitInterval) {
  EXPECT_THROW(PrivacyMultiplier(0.0), InvalidArgument);
  EXPECT_THROW(PrivacyMultiplier(1.0), InvalidArgument);
  EXPECT_THROW(PrivacyMultiplier(-0.1), InvalidArgument);
  EXPECT_THROW(PrivacyMultiplier(1.1), InvalidArgument);
}

TEST(PrivacySpecTest, CachesMultiplier) {
  const PrivacySpec spec = PrivacySpec::Create(10.0, 0.1);
  EXPECT_NEAR(spec.multiplier / std::sqrt(2.0 * std::log(12.5)), 1.0, 1e-12);
  EXPECT_THROW(PrivacySpec::Create(0.0, 0.1), InvalidArgument);
  EXPECT_THROW(PrivacySpec::Create(1.0, 1.5), InvalidArgument);
}

TEST(EpsilonPerRoundTest, KnownValue) {
  EXPECT_NEAR(EpsilonPerRound(1.0, 1.0, 1.0, 0.1), 4.49508944899499, 1e-12);
}

TEST(EpsilonPerRoundTest, ZeroAlignmentLeaksNothing) {
  EXPECT_EQ(EpsilonPerRound(1.0, 0.0, 1.0, 0.1), 0.0);
}

TEST(EpsilonPerRoundTest, DoublingNoiseHalvesEpsilon) {
  const double e1 = EpsilonPerRound(0.7, 1.3, 0.5, 0.1);
  const double e2 = EpsilonPerRound(0.7, 1.3, 1.0, 0.1);
  EXPECT_NEAR(e2, e1 / 2.0, 1e-14 * e1);
}

TEST(EpsilonPerRoundTest, ZeroNoiseRejected) {
  EXPECT_THROW(EpsilonPerRound(1.0, 1.0, 0.0, 0.1), InvalidArgument);
}

TEST(EpsilonPerRoundTest, Monotonicity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double b = u(rng), nu = u(rng), s = u(rng), f = 1.0 + u(rng);
    const double base = EpsilonPerRound(b, nu, s, 0.1);
    EXPECT_GT(EpsilonPerRound(b, nu * f, s, 0.1), base);
    EXPECT_GT(EpsilonPerRound(b * f, nu, s, 0.1), base);
    EXPECT_LT(EpsilonPerRound(b, nu, s * f, 0.1), base);
  }
}

TEST(SensitivityTest, Formula) {
  EXPECT_EQ(Sensitivity(1.0, 1.0), 2.0);
  EXPECT_EQ(Sensitivity(0.5, 2.0), 2.0);
}

TEST(MaxThetaTest, KnownValueAndLinearity) {
  const PrivacySpec spec = PrivacySpec::Create(10.0, 0.1);
  EXPECT_NEAR(MaxThetaForPrivacy(spec, 1.0), 2.22464983477377, 1e-12);
  const PrivacySpec tripled = PrivacySpec::Create(30.0, 0.1);
  EXPECT_NEAR(MaxThetaForPrivacy(tripled, 1.0), 3.0 * MaxThetaForPrivacy(spec, 1.0),
              1e-12);
}

TEST(MaxThetaTest, RoundTripRecoversEpsilon) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.01, 50.0);
  std::uniform_real_distribution<double> ud(1e-6, 0.99);
  for (int trial = 0; trial < 1000; ++trial) {
    const PrivacySpec spec = PrivacySpec::Create(u(rng), ud(rng));
    const double sigma = u(rng);
    const double grad_bound = u(rng);
    const double nu = MaxThetaForPrivacy(spec, sigma) / grad_bound;
    const double eps = EpsilonPerRound(grad_bound, nu, sigma, spec.delta);
    EXPECT_NEAR(eps / spec.epsilon, 1.0, 1e-12);
  }
}

TEST(BudgetComplianceTest, AnyAlignmentBelowCeilingComplies) {
  const PrivacySpec spec = PrivacySpec::Create(10.0, 0.1);
  const double grad_bound = 3.0;
  const double nu_max = MaxThetaForPrivacy(spec, 1.0) / grad_bound;
  EXPECT_TRUE(IsBudgetCompliant(spec, grad_bound, nu_max, 1.0));
  EXPECT_TRUE(IsBudgetCompliant(spec, grad_bound, 0.5 * nu_max, 1.0));
  EXPECT_TRUE(IsBudgetCompliant(spec, grad_bound, 1e-9, 1.0));
  EXPECT_FALSE(IsBudgetCompliant(spec, grad_bound, 1.001 * nu_max, 1.0));
}

}  // namespace
}  // namespace otafl
