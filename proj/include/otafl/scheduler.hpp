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

// Device scheduling for aligned, channel-noise-private aggregation.
//
// Working in theta = grad_bound * nu, the scheduler solves
//
//   min_{K, theta}  4 (1 - |K|/N)^2 + d sigma^2 / (|K|^2 theta^2)
//   s.t.            theta <= min(min_{k in K} c_k, theta_cap)
//
// with c sorted ascending and theta_cap = epsilon sigma / (2 multiplier).
// For a fixed threshold theta the best set is every device with c_k >= theta,
// and the objective is strictly decreasing in theta, so the optimum is one of
// at most |Q| + 1 staircase corners where Q = {k : c_1 <= c_k < theta_cap}:
// theta_i = c_i for i in Q, plus theta = theta_cap. Solve() scores those
// corners; BruteForceOracle() scores every subset and exists for testing.

#ifndef OTAFL_SCHEDULER_HPP_
#define OTAFL_SCHEDULER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "otafl/common.hpp"
#include "otafl/fleet.hpp"

namespace otafl {

struct SchedulingProblem {
  std::vector<double> c;  // ascending effective coefficients
  std::vector<int> ids;   // device id owning each entry of c
  int dimension = 1;
  double noise_std = 0.0;
  double theta_cap = 0.0;

  // Validates the problem. Empty `ids` means ids 1..N in sorted order.
  static SchedulingProblem Create(std::vector<double> c, int dimension,
                                  double noise_std, double theta_cap,
                                  std::vector<int> ids = {}) {
    internal::Require(!c.empty(), "scheduling problem needs at least one device");
    internal::Require(dimension >= 1, "dimension must be at least 1");
    internal::Require(std::isfinite(noise_std) && noise_std >= 0.0,
                      "noise_std must be nonnegative");
    internal::Require(std::isfinite(theta_cap) && theta_cap > 0.0,
                      "theta_cap must be positive");
    for (std::size_t i = 0; i < c.size(); ++i) {
      internal::Require(std::isfinite(c[i]) && c[i] > 0.0,
                        "coefficients must be positive");
      internal::Require(i == 0 || c[i - 1] <= c[i],
                        "coefficients must be sorted ascending");
    }
    if (ids.empty()) {
      ids.resize(c.size());
      std::iota(ids.begin(), ids.end(), 1);
    }
    internal::Require(ids.size() == c.size(), "ids and coefficients differ in length");
    return SchedulingProblem{std::move(c), std::move(ids), dimension, noise_std,
                             theta_cap};
  }

  static SchedulingProblem FromFleet(const Fleet& fleet, int dimension,
                                     double noise_std, double theta_cap) {
    EffectiveCoefficients coeffs = ComputeEffectiveCoefficients(fleet);
    return Create(std::move(coeffs.values), dimension, noise_std, theta_cap,
                  std::move(coeffs.ids));
  }

  int size() const { return static_cast<int>(c.size()); }
  double noise_energy() const { return dimension * noise_std * noise_std; }
};

struct SchedulingDecision {
  std::vector<int> scheduled;  // ascending device ids
  double theta = 0.0;
  double objective = 0.0;
  int candidate_index = 0;  // 1-based corner index, |Q| + 1 is the cap corner

  int k_size() const { return static_cast<int>(scheduled.size()); }
};

// One staircase corner: theta and the suffix of the sorted order it admits.
struct Candidate {
  int index = 0;           // 1-based
  double theta = 0.0;
  int first_position = 0;  // 0-based position into problem.c
  int k_size = 0;
  double objective = 0.0;
};

// Psi(|K|, theta) = 4 (1 - |K|/N)^2 + d sigma^2 / (|K|^2 theta^2).
inline double ObjectivePsi(int k_size, double theta,
                           const SchedulingProblem& problem) {
  const int n = problem.size();
  internal::Require(k_size >= 1 && k_size <= n, "k_size must lie in [1, N]");
  internal::Require(theta > 0.0, "theta must be positive");
  const double deficit = 1.0 - static_cast<double>(k_size) / n;
  const double k = static_cast<double>(k_size);
  return 4.0 * deficit * deficit + problem.noise_energy() / (k * k * theta * theta);
}

// 1-based positions k with c_1 <= c_k < theta_cap.
inline std::vector<int> QSet(const SchedulingProblem& problem) {
  std::vector<int> q;
  for (int k = 0; k < problem.size(); ++k) {
    if (problem.c[k] < problem.theta_cap) q.push_back(k + 1);
  }
  return q;
}

// Corners of the theta/|K| staircase. A corner whose c duplicates an earlier
// one admits the same set, so only the first is kept; the cap corner is
// dropped when no device reaches the cap. Indices keep the 1..|Q|+1 numbering.
inline std::vector<Candidate> EnumerateCandidates(
    const SchedulingProblem& problem) {
  const std::vector<double>& c = problem.c;
  const int q_size = static_cast<int>(QSet(problem).size());
  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(q_size) + 1);
  for (int i = 0; i < q_size; ++i) {
    if (i > 0 && c[i] == c[i - 1]) continue;
    Candidate cand;
    cand.index = i + 1;
    cand.theta = c[i];
    cand.first_position = i;
    cand.k_size = problem.size() - i;
    cand.objective = ObjectivePsi(cand.k_size, cand.theta, problem);
    out.push_back(cand);
  }
  const auto first_at_cap =
      std::lower_bound(c.begin(), c.end(), problem.theta_cap) - c.begin();
  if (first_at_cap < problem.size()) {
    Candidate cand;
    cand.index = q_size + 1;
    cand.theta = problem.theta_cap;
    cand.first_position = static_cast<int>(first_at_cap);
    cand.k_size = problem.size() - cand.first_position;
    cand.objective = ObjectivePsi(cand.k_size, cand.theta, problem);
    out.push_back(cand);
  }
  return out;
}

namespace internal {

inline SchedulingDecision DecisionFromCandidate(const Candidate& cand,
                                                const SchedulingProblem& problem) {
  SchedulingDecision d;
  d.scheduled.assign(problem.ids.begin() + cand.first_position, problem.ids.end());
  std::sort(d.scheduled.begin(), d.scheduled.end());
  d.theta = cand.theta;
  d.objective = cand.objective;
  d.candidate_index = cand.index;
  return d;
}

// Strict preference: lower objective, then more devices, then larger theta.
inline bool Preferred(double obj, int k_size, double theta, double best_obj,
                      int best_k, double best_theta) {
  if (obj != best_obj) return obj < best_obj;
  if (k_size != best_k) return k_size > best_k;
  return theta > best_theta;
}

}  // namespace internal

// Global optimum by one-dimensional search over the staircase corners. Ties
// go to the larger |K|, then to the smaller corner index.
inline SchedulingDecision Solve(const SchedulingProblem& problem) {
  const std::vector<Candidate> candidates = EnumerateCandidates(problem);
  // c_1 <= theta_cap always yields corner 1; c_1 > theta_cap yields the cap
  // corner with every device, so the list is never empty.
  const Candidate* best = &candidates.front();
  for (const Candidate& cand : candidates) {
    if (cand.objective < best->objective ||
        (cand.objective == best->objective && cand.k_size > best->k_size)) {
      best = &cand;
    }
  }
  return internal::DecisionFromCandidate(*best, problem);
}

// Exhaustive search over every non-empty subset, theta pinned to the largest
// feasible value min(min selected c, theta_cap).
inline SchedulingDecision BruteForceOracle(const SchedulingProblem& problem) {
  const int n = problem.size();
  internal::Require(n <= 20, "brute-force oracle limited to N <= 20");
  double best_obj = std::numeric_limits<double>::infinity();
  int best_k = 0;
  double best_theta = 0.0;
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    double min_c = std::numeric_limits<double>::infinity();
    int k_size = 0;
    for (int k = 0; k < n; ++k) {
      if (mask & (std::uint32_t{1} << k)) {
        min_c = std::min(min_c, problem.c[k]);
        ++k_size;
      }
    }
    const double theta = std::min(min_c, problem.theta_cap);
    const double obj = ObjectivePsi(k_size, theta, problem);
    if (internal::Preferred(obj, k_size, theta, best_obj, best_k, best_theta)) {
      best_obj = obj;
      best_k = k_size;
      best_theta = theta;
      best_mask = mask;
    }
  }
  SchedulingDecision d;
  for (int k = 0; k < n; ++k) {
    if (best_mask & (std::uint32_t{1} << k)) d.scheduled.push_back(problem.ids[k]);
  }
  std::sort(d.scheduled.begin(), d.scheduled.end());
  d.theta = best_theta;
  d.objective = best_obj;
  const int q_size = static_cast<int>(QSet(problem).size());
  if (best_theta == problem.theta_cap) {
    d.candidate_index = q_size + 1;
  } else {
    d.candidate_index = static_cast<int>(
        std::lower_bound(problem.c.begin(), problem.c.end(), best_theta) -
        problem.c.begin()) + 1;
  }
  return d;
}

// The no-scheduling baseline: every device, theta pinned to min(c_1, cap).
inline SchedulingDecision FullParticipation(const SchedulingProblem& problem) {
  SchedulingDecision d;
  d.scheduled = problem.ids;
  std::sort(d.scheduled.begin(), d.scheduled.end());
  d.theta = std::min(problem.c.front(), problem.theta_cap);
  d.objective = ObjectivePsi(problem.size(), d.theta, problem);
  d.candidate_index = problem.c.front() < problem.theta_cap
                          ? 1
                          : static_cast<int>(QSet(problem).size()) + 1;
  return d;
}

enum class Lemma5Verdict { kBeats, kNotBeats, kEquivalent, kConditionVacuous };

inline std::string_view ToString(Lemma5Verdict v) {
  switch (v) {
    case Lemma5Verdict::kBeats:
      return "beats";
    case Lemma5Verdict::kNotBeats:
      return "not_beats";
    case Lemma5Verdict::kEquivalent:
      return "equivalent";
    case Lemma5Verdict::kConditionVacuous:
      return "condition_vacuous";
  }
  return "unknown";
}

struct Lemma5Report {
  Lemma5Verdict verdict = Lemma5Verdict::kEquivalent;
  double radicand = 0.0;   // 1/(N^2 c_1^2) - 4/(d sigma^2)
  double threshold = 0.0;  // 1/sqrt(radicand) when radicand > 0
  double decision_objective = 0.0;
  double baseline_objective = 0.0;  // Psi(N, min(c_1, cap))
};

// Sufficient condition for the scheduled decision to beat full participation
// at theta = c_1: |K| theta >= 1 / sqrt(1/(N^2 c_1^2) - 4/(d sigma^2)). The
// exact objectives are reported alongside as ground truth.
inline Lemma5Report BeatsFullParticipation(const SchedulingDecision& decision,
                                           const SchedulingProblem& problem) {
  const int n = problem.size();
  const double c1 = problem.c.front();
  Lemma5Report report;
  report.decision_objective = ObjectivePsi(decision.k_size(), decision.theta, problem);
  report.baseline_objective =
      ObjectivePsi(n, std::min(c1, problem.theta_cap), problem);

  const double n_c1_sq = static_cast<double>(n) * n * c1 * c1;
  const double energy = problem.noise_energy();
  // Common-denominator form keeps an exactly-zero radicand exact.
  report.radicand = energy > 0.0 ? (energy - 4.0 * n_c1_sq) / (n_c1_sq * energy)
                                 : -std::numeric_limits<double>::infinity();
  if (report.radicand > 0.0) report.threshold = 1.0 / std::sqrt(report.radicand);

  if (c1 > problem.theta_cap ||
      (decision.k_size() == n && decision.theta == c1)) {
    report.verdict = Lemma5Verdict::kEquivalent;
  } else if (report.radicand <= 0.0) {
    report.verdict = Lemma5Verdict::kConditionVacuous;
  } else if (decision.k_size() * decision.theta >= report.threshold) {
    report.verdict = Lemma5Verdict::kBeats;
  } else {
    report.verdict = Lemma5Verdict::kNotBeats;
  }
  return report;
}

// nu = theta / grad_bound.
inline double AlignmentFor(const SchedulingDecision& decision, double grad_bound) {
  internal::Require(grad_bound > 0.0, "grad_bound must be positive");
  return decision.theta / grad_bound;
}

}  // namespace otafl

#endif  // OTAFL_SCHEDULER_HPP_
