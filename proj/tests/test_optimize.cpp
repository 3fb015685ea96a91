// Copyright 2026 The vqinit Authors
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

#include "vqinit/optimize.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "vqinit/oracles.hpp"

using namespace vqinit;
namespace vt = vqinit::testing;

TEST(Loss, Anchors) {
  EXPECT_NEAR(loss(build_hea(15, 10), build_heisenberg(15), std::vector<double>(300, 0.0), StateVector(15)), 14.0,
              1e-12);
  // RY(pi) on qubit 0 of two qubits: |10>, <ZZ> = -1, <XX> = <YY> = 0.
  const std::vector<double> p = {0.0, 0.0, std::numbers::pi, 0.0};
  EXPECT_NEAR(loss(build_hea(2, 1), build_heisenberg(2), p, StateVector(2)), -1.0, 1e-14);
}

TEST(Adjoint, MatchesFiniteDifferenceOnHea) {
  Rng rng(21);
  const auto c = build_hea(4, 2);
  const auto h = build_heisenberg(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = vt::random_angles(c.n_params(), rng);
    const auto vg = value_and_gradient(c, h, p, StateVector(4));
    EXPECT_NEAR(vg.value, loss(c, h, p, StateVector(4)), 1e-13);
    EXPECT_LT(vt::max_abs_diff(vg.gradient, gradient_fd(c, h, p, StateVector(4))), 1e-6);
    EXPECT_LT(vt::max_abs_diff(vg.gradient, gradient_paramshift(c, h, p, StateVector(4))), 1e-10);
  }
}

TEST(Adjoint, MatchesFiniteDifferenceWithComplexHamiltonianAndInput) {
  Rng rng(22);
  const auto c = build_hea(5, 2);
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = vt::random_hamiltonian(5, 12, rng);
    const auto in = vt::random_state(5, rng);
    const auto p = vt::random_angles(c.n_params(), rng);
    EXPECT_LT(vt::max_abs_diff(gradient_adjoint(c, h, p, in), gradient_fd(c, h, p, in)), 1e-6);
  }
}

TEST(Adjoint, MatchesFiniteDifferenceOnGivens) {
  Rng rng(23);
  const auto c = build_givens_default(2, 6);
  const auto in = hf_state(2, 6);
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = vt::random_hamiltonian(6, 20, rng);
    const auto p = vt::random_angles(c.n_params(), rng);
    EXPECT_LT(vt::max_abs_diff(gradient_adjoint(c, h, p, in), gradient_fd(c, h, p, in)), 1e-6);
  }
}

TEST(Adjoint, ZeroGradientAtAllZeroEigenstate) {
  const auto g = gradient_adjoint(build_hea(6, 2), build_heisenberg(6), std::vector<double>(24, 0.0), StateVector(6));
  EXPECT_LT(l2_norm(g), 1e-14);
}

TEST(Noise, AdaptiveVarianceExample) {
  NoiseSpec spec{NoiseMode::Adaptive, 0.0, kAdaptiveNoisePrefactor, 1.0};
  EXPECT_NEAR(adaptive_noise_variance(spec, 0.1), 6.78168e-8, 1e-12);
  EXPECT_DOUBLE_EQ(kAdaptiveNoisePrefactor, 1.0 / 147456.0);
}

TEST(Noise, AdaptiveLeavesZeroGradientUntouched) {
  Rng rng(1);
  NoiseSpec spec{NoiseMode::Adaptive, 0.0, kAdaptiveNoisePrefactor, 42.0 * 42.0};
  const std::vector<double> g(10, 0.0);
  EXPECT_EQ(perturb_gradient(g, spec, rng), g);
}

TEST(Noise, ConstantVarianceEmpirical) {
  Rng rng(2);
  NoiseSpec spec{NoiseMode::Constant, 0.001};
  const std::vector<double> g(1000, 0.5);
  std::vector<double> diffs;
  for (int rep = 0; rep < 1000; ++rep) {
    const auto noisy = perturb_gradient(g, spec, rng);
    for (double x : noisy) diffs.push_back(x - 0.5);
  }
  EXPECT_NEAR(vt::sample_variance(diffs) / 0.001, 1.0, 0.01);
}

TEST(Noise, NoneIsIdentityAndNonFiniteRejected) {
  Rng rng(3);
  const std::vector<double> g = {1.0, -2.0};
  EXPECT_EQ(perturb_gradient(g, NoiseSpec{}, rng), g);
  const std::vector<double> bad = {std::nan("")};
  EXPECT_THROW(perturb_gradient(bad, NoiseSpec{}, rng), ValidationError);
}

TEST(GdStep, Example) {
  const std::vector<double> p = {1.0, 2.0}, g = {0.5, -1.0};
  EXPECT_EQ(gd_step(p, g, 0.1), (std::vector<double>{0.95, 2.1}));
  EXPECT_THROW(gd_step(p, g, 0.0), ValidationError);
  EXPECT_THROW(gd_step(p, std::vector<double>{1.0}, 0.1), ValidationError);
}

TEST(AdamStep, FirstStepIsLearningRateTimesSign) {
  const std::vector<double> p = {0.0}, g = {1.0};
  const auto r = adam_step(AdamState::fresh(1), p, g, 0.01);
  EXPECT_NEAR(r.params[0], -0.01 / (1.0 + 1e-8), 1e-15);
  EXPECT_EQ(r.state.t, 1u);
}

TEST(AdamStep, ConvergesOnQuadratic) {
  // f(x) = (x + 1)^2
  std::vector<double> x = {0.0};
  auto st = AdamState::fresh(1);
  for (int i = 0; i < 2000; ++i) {
    const std::vector<double> g = {2.0 * (x[0] + 1.0)};
    auto r = adam_step(std::move(st), x, g, 0.01);
    x = std::move(r.params);
    st = std::move(r.state);
  }
  EXPECT_NEAR(x[0], -1.0, 1e-4);
}

TEST(AdamStep, Errors) {
  const std::vector<double> p = {0.0};
  EXPECT_THROW(adam_step(AdamState::fresh(2), p, p, 0.01), ValidationError);
  EXPECT_THROW(adam_step(AdamState::fresh(1), p, p, -1.0), ValidationError);
}

namespace {

struct Small {
  Circuit c = build_hea(3, 1);
  Hamiltonian h = build_heisenberg(3);
  StateVector in = StateVector(3);
  double fstar = -4.0;
};

}  // namespace

TEST(Train, OneIterationGivesTwoRows) {
  Small s;
  Rng rng(1);
  const auto rec = train(s.c, s.h, s.in, std::vector<double>(6, 0.1), {OptimizerKind::GD, 0.05}, {}, 1, s.fstar, rng);
  ASSERT_EQ(rec.rows.size(), 2u);
  EXPECT_EQ(rec.rows[0].iteration, 0u);
  EXPECT_EQ(rec.rows[1].iteration, 1u);
  EXPECT_EQ(rec.seed, 1u);
  EXPECT_FALSE(rec.diverged);
}

TEST(Train, RowMetricsMatchDirectEvaluation) {
  Small s;
  Rng rng(2);
  Rng init_rng(3);
  const auto init = vt::random_angles(6, init_rng);
  const auto rec = train(s.c, s.h, s.in, init, {OptimizerKind::Adam, 0.01}, {}, 3, s.fstar, rng);
  const auto vg = value_and_gradient(s.c, s.h, init, s.in);
  EXPECT_EQ(rec.rows[0].loss, vg.value);
  EXPECT_EQ(rec.rows[0].loss_minus_fstar, vg.value - s.fstar);
  EXPECT_EQ(rec.rows[0].grad_l2, l2_norm(vg.gradient));
  EXPECT_EQ(rec.rows[0].wall_ms, 0.0);
}

TEST(Train, NoiselessGdWithSmallStepIsMonotone) {
  Small s;
  Rng rng(4), init_rng(5);
  const auto rec =
      train(s.c, s.h, s.in, vt::random_angles(6, init_rng), {OptimizerKind::GD, 0.01}, {}, 100, s.fstar, rng);
  for (std::size_t i = 1; i < rec.rows.size(); ++i) EXPECT_LE(rec.rows[i].loss, rec.rows[i - 1].loss + 1e-12);
}

TEST(Property, LossNeverBelowGroundEnergy) {
  Small s;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed), init_rng(100 + seed);
    const auto rec = train(s.c, s.h, s.in, vt::random_angles(6, init_rng), {OptimizerKind::Adam, 0.05},
                           {NoiseMode::Constant, 0.001}, 50, s.fstar, rng);
    for (const auto& row : rec.rows) EXPECT_GE(row.loss_minus_fstar, -1e-9);
  }
}

TEST(Train, SameSeedSameRecord) {
  Small s;
  auto run = [&](std::uint64_t seed) {
    Rng rng(seed);
    return train(s.c, s.h, s.in, std::vector<double>(6, 0.2), {OptimizerKind::Adam, 0.01},
                 {NoiseMode::Constant, 0.001}, 20, s.fstar, rng);
  };
  EXPECT_EQ(run(7), run(7));
  EXPECT_NE(run(7).rows.back().loss, run(8).rows.back().loss);
}

TEST(Train, FlagsDivergence) {
  Small s;
  Rng rng(1);
  TrainOptions opts;
  opts.divergence_factor = 0.1;  // bound 0.9 < initial loss 3
  const auto rec =
      train(s.c, s.h, s.in, std::vector<double>(6, 0.0), {OptimizerKind::GD, 0.1}, {}, 10, s.fstar, rng, opts);
  EXPECT_TRUE(rec.diverged);
  EXPECT_EQ(rec.rows.size(), 1u);
}

TEST(Train, WallTimeRecordedWhenRequested) {
  Small s;
  Rng rng(1);
  TrainOptions opts;
  opts.record_wall_time = true;
  const auto rec =
      train(s.c, s.h, s.in, std::vector<double>(6, 0.1), {OptimizerKind::GD, 0.1}, {}, 5, s.fstar, rng, opts);
  EXPECT_GT(rec.rows.back().wall_ms, 0.0);
}

TEST(Train, Errors) {
  Small s;
  Rng rng(1);
  EXPECT_THROW(train(s.c, s.h, s.in, std::vector<double>(6, 0.0), {}, {}, 0, s.fstar, rng), ValidationError);
  EXPECT_THROW(train(s.c, s.h, s.in, std::vector<double>(5, 0.0), {}, {}, 1, s.fstar, rng), ValidationError);
  EXPECT_THROW(train(s.c, s.h, s.in, std::vector<double>(6, 0.0), {}, {}, 1, std::nan(""), rng), ValidationError);
}
