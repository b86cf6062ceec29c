// Copyright (c) 2026 The emics authors
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
#include <random>

#include <gtest/gtest.h>

#include "emics/error_signal.hpp"

using namespace emics;

namespace
{

// E_n for constant input e from E_0 = 0.
double closed_form(double e, double alpha, int n)
{
  return e * (1.0 - std::pow(1.0 - alpha, n));
}

}  // namespace

TEST(RawError, Examples)
{
  EXPECT_NEAR(raw_error(0.35, 0.30), 0.05, 1e-15);
  EXPECT_EQ(raw_error(0.1, 0.0), 0.1);
  EXPECT_EQ(raw_error(0.2, 0.4), 0.0);
  EXPECT_EQ(raw_error(0.4, -0.3), 0.1);
}

TEST(ErrorFilter, FirstUpdate)
{
  ErrorFilter f;
  EXPECT_NEAR(f.update(0.1, 0.0), 0.006, 1e-15);
}

TEST(ErrorFilter, ConstantInputCrossesSevenHundredthsOnStepTwenty)
{
  ErrorFilter f;
  for (int n = 1; n <= 20; ++n) {
    f.update(0.1, 0.1 * n);
    ASSERT_NEAR(f.filtered(), closed_form(0.1, 0.06, n), 1e-9) << n;
    if (n == 19) {
      EXPECT_LT(f.filtered(), 0.07);
      EXPECT_NEAR(f.filtered(), 0.06913, 1e-5);
    }
  }
  EXPECT_GE(f.filtered(), 0.07);
  EXPECT_NEAR(f.filtered(), 0.07099, 1e-5);
}

TEST(ErrorFilter, ClosedFormProperty)
{
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = 0.01 + 0.99 * u(rng);
    const double e = 0.1 * u(rng);
    ErrorFilter f({alpha, 0.1, 2.0});
    for (int n = 1; n <= 300; ++n) {
      f.update(e, 0.1 * n);
      ASSERT_LE(std::abs(f.filtered() - closed_form(e, alpha, n)), 1e-9);
    }
  }
}

TEST(ErrorFilter, BoundedForAnyInputProperty)
{
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ErrorFilter f;
  for (int n = 0; n < 100000; ++n) {
    const double e = u(rng);
    f.update(e, 0.1 * n);
    ASSERT_GE(f.filtered(), 0.0);
    ASSERT_LE(f.filtered(), 0.1);
    ASSERT_GE(f.state().e_raw, 0.0);
    ASSERT_LE(f.state().e_raw, 0.1);
  }
}

TEST(ErrorFilter, ZeroInputDecaysMonotonically)
{
  ErrorFilter f;
  for (int n = 0; n < 50; ++n) {
    f.update(0.1, 0.1 * n);
  }
  double prev = f.filtered();
  for (int n = 50; n < 400; ++n) {
    f.update(0.0, 0.1 * n);
    ASSERT_LT(f.filtered(), prev);
    prev = f.filtered();
  }
}

TEST(ErrorFilter, HalvesEveryTwelveSteps)
{
  const int half_life = static_cast<int>(std::ceil(std::log(0.5) / std::log(1.0 - 0.06)));
  EXPECT_EQ(half_life, 12);
  ErrorFilter f;
  for (int n = 0; n < 100; ++n) {
    f.update(0.1, 0.1 * n);
  }
  const double start = f.filtered();
  for (int n = 0; n < 12; ++n) {
    f.update(0.0, 10.0 + 0.1 * n);
  }
  EXPECT_LE(f.filtered(), 0.5 * start);
  EXPECT_GT(f.filtered() / std::pow(0.94, 1), 0.5 * start);  // 11 steps would not suffice
}

TEST(ErrorFilter, ResetOnSwitchSetsLockout)
{
  ErrorFilter f;
  for (int n = 0; n < 30; ++n) {
    f.update(0.1, 0.1 * n);
  }
  f.reset_on_switch(10.0);
  EXPECT_EQ(f.filtered(), 0.0);
  EXPECT_DOUBLE_EQ(f.state().suppressed_until, 12.0);
  EXPECT_TRUE(f.in_lockout(11.9));
  EXPECT_EQ(f.update(0.1, 10.5), 0.0);
  EXPECT_EQ(f.update(0.1, 11.9), 0.0);
  EXPECT_FALSE(f.in_lockout(120 * 0.1));
  EXPECT_NEAR(f.update(0.1, 120 * 0.1), 0.006, 1e-15);
}

TEST(ErrorFilter, RejectsBadAlpha)
{
  EXPECT_THROW(ErrorFilter({0.0, 0.1, 2.0}), std::invalid_argument);
  EXPECT_THROW(ErrorFilter({1.5, 0.1, 2.0}), std::invalid_argument);
}
