// Copyright 2026 The revmap Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <gtest/gtest.h>

#include "../oracles.hpp"
#include "revmap/optimize.hpp"

namespace revmap {
namespace {

TEST(MinimizeTest, NelderMeadOneDimensionalBowl) {
  Objective f(1, [](std::span<const double> x) { return (x[0] - 3) * (x[0] - 3); });
  MinimizeOptions o;
  o.budget = 200;
  const auto r = minimize(f, {0.0}, o);
  EXPECT_LT(std::abs(r.best_params[0] - 3.0), 1e-2);
  EXPECT_LE(r.evals_used, 200u);
  EXPECT_EQ(f.eval_count(), r.evals_used);
}

TEST(MinimizeTest, SpsaAnisotropicBowl) {
  Objective f(2, [](std::span<const double> x) { return x[0] * x[0] + 10 * x[1] * x[1]; });
  MinimizeOptions o;
  o.method = Method::kSpsa;
  o.budget = 500;
  o.seed = 1;
  const auto r = minimize(f, {5.0, 5.0}, o);
  EXPECT_LT(r.best_loss, 0.1);
  EXPECT_LE(r.evals_used, 500u);
}

TEST(MinimizeTest, ConstantObjectiveKeepsStart) {
  for (auto m : {Method::kNelderMead, Method::kSpsa}) {
    Objective f(3, [](std::span<const double>) { return 4.0; });
    MinimizeOptions o;
    o.method = m;
    o.budget = 50;
    const std::vector<double> x0{1.0, -2.0, 0.5};
    const auto r = minimize(f, x0, o);
    EXPECT_EQ(r.best_params, x0);
    EXPECT_EQ(r.best_loss, 4.0);
  }
}

TEST(MinimizeTest, HistoryInvariants) {
  for (auto m : {Method::kNelderMead, Method::kSpsa}) {
    Objective f(4, [](std::span<const double> x) {
      double s = 0;
      for (double v : x) s += std::cos(3 * v) + v * v;
      return s;
    });
    MinimizeOptions o;
    o.method = m;
    o.budget = 120;
    o.seed = 7;
    const auto r = minimize(f, {1, 1, 1, 1}, o);
    ASSERT_FALSE(r.history.empty());
    double best = INFINITY;
    for (std::size_t k = 0; k < r.history.size(); ++k) {
      EXPECT_EQ(r.history[k].iteration, k + 1);
      best = std::min(best, r.history[k].loss);
    }
    EXPECT_EQ(best, r.best_loss);
    EXPECT_EQ(r.running_min().back(), r.best_loss);
    EXPECT_LE(r.evals_used, 120u);
  }
}

TEST(MinimizeTest, DeterministicGivenSeed) {
  auto run = [](std::uint64_t seed) {
    Objective f(3, [](std::span<const double> x) { return std::sin(x[0]) + x[1] * x[2] + x[2] * x[2]; });
    MinimizeOptions o;
    o.method = Method::kSpsa;
    o.budget = 80;
    o.seed = seed;
    return minimize(f, {0.1, 0.2, 0.3}, o).best_params;
  };
  EXPECT_EQ(run(3), run(3));
  EXPECT_NE(run(3), run(4));
}

TEST(MinimizeTest, BudgetTooSmall) {
  Objective f(5, [](std::span<const double>) { return 0.0; });
  MinimizeOptions o;
  o.budget = 6;
  EXPECT_THROW(minimize(f, std::vector<double>(5, 0.0), o), Error);
  EXPECT_THROW(parse_method("cobyla"), Error);
}

TEST(CrossEntropyTest, Examples) {
  const std::vector<int> y{1, 0};
  EXPECT_NEAR(cross_entropy(std::vector<double>{0.9, 0.2}, y), -(std::log(0.9) + std::log(0.8)) / 2, 1e-15);
  EXPECT_NEAR(cross_entropy(std::vector<double>{0.5, 0.5}, y), std::log(2.0), 1e-15);
  const double eps = kCrossEntropyClamp;
  EXPECT_LT(cross_entropy(std::vector<double>{1 - eps, eps}, y), 2e-7);
  EXPECT_TRUE(std::isfinite(cross_entropy(std::vector<double>{0.0, 1.0}, y)));
  EXPECT_NEAR(cross_entropy(std::vector<double>{0.0, 1.0}, y), oracle::cross_entropy({0.0, 1.0}, {1, 0}), 1e-12);
  EXPECT_THROW(cross_entropy(std::vector<double>{0.5}, y), Error);
  EXPECT_THROW(cross_entropy(std::vector<double>{}, std::vector<int>{}), Error);
}

}  // namespace
}  // namespace revmap
