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

#include "vqinit/init_schemes.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_util.hpp"

using namespace vqinit;
using vqinit::testing::sample_variance;

namespace {

constexpr double kGammaSq = 1.0 / 160.0;

InitSpec spec_for(InitScheme s) {
  InitSpec spec;
  spec.scheme = s;
  spec.gamma = std::sqrt(kGammaSq);
  spec.n_qubits = 15;
  spec.chunks = build_hea(15, 10).layer_chunks();
  return spec;
}

// Pools many independent 300-parameter draws.
std::vector<double> pooled(InitScheme s, std::size_t total, std::uint64_t seed) {
  const auto spec = spec_for(s);
  Rng rng(seed);
  std::vector<double> all;
  all.reserve(total);
  while (all.size() < total) {
    const auto p = sample(spec, 300, rng);
    all.insert(all.end(), p.begin(), p.end());
  }
  return all;
}

RealMatrix random_matrix(std::size_t n, Rng& rng) {
  RealMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (double& x : a.row(i)) x = rng.normal();
  return a;
}

double orthonormality_error(const RealMatrix& q) {
  return max_abs_diff(matmul(transpose(q), q), RealMatrix::identity(q.cols()));
}

}  // namespace

TEST(SchemeNames, RoundTripAndUnknown) {
  for (const auto& [scheme, name] : kSchemeNames) EXPECT_EQ(parse_scheme(name), scheme);
  try {
    parse_scheme("xavierish");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("xavier_chunked"), std::string::npos);
  }
}

TEST(TargetDistribution, HeisenbergValues) {
  const auto v = [](InitScheme s) { return target_distribution(spec_for(s), 300).variance; };
  EXPECT_DOUBLE_EQ(v(InitScheme::Gaussian), 1.0 / 160.0);
  EXPECT_DOUBLE_EQ(v(InitScheme::XavierNormalGlobal), 2.0 / (160.0 * 300.0));
  EXPECT_DOUBLE_EQ(v(InitScheme::HeNormal), 2.0 / (160.0 * 300.0));
  EXPECT_NEAR(v(InitScheme::LeCunNormal), 1.0 / 48000.0, 1e-20);
  EXPECT_NEAR(v(InitScheme::XavierUniformGlobal), 2.0 / 48000.0, 1e-20);
  EXPECT_NEAR(v(InitScheme::LeCunUniform), 1.0 / 48000.0, 1e-20);
  EXPECT_NEAR(v(InitScheme::UniformBaseline), std::numbers::pi * std::numbers::pi / 3.0, 1e-14);
  EXPECT_DOUBLE_EQ(v(InitScheme::XavierChunked), 1.0 / 15.0);
  EXPECT_NEAR(target_distribution(spec_for(InitScheme::XavierUniformGlobal), 300).bound,
              std::sqrt(6.0 / (160.0 * 300.0)), 1e-15);
  EXPECT_THROW(target_distribution(spec_for(InitScheme::Orthogonal), 300), ValidationError);
}

TEST(Sample, EmpiricalVarianceMatchesTarget) {
  const InitScheme schemes[] = {InitScheme::UniformBaseline, InitScheme::Gaussian, InitScheme::XavierNormalGlobal,
                                InitScheme::XavierUniformGlobal, InitScheme::XavierChunked, InitScheme::HeNormal,
                                InitScheme::HeUniform, InitScheme::LeCunNormal, InitScheme::LeCunUniform};
  std::uint64_t seed = 100;
  for (auto s : schemes) {
    const auto draws = pooled(s, 1'000'000, seed++);
    const double target = target_distribution(spec_for(s), 300).variance;
    EXPECT_NEAR(sample_variance(draws) / target, 1.0, 0.01) << scheme_name(s);
  }
}

TEST(Sample, ZeroIsAllZeros) {
  Rng rng(1);
  for (double x : sample(spec_for(InitScheme::Zero), 300, rng)) EXPECT_EQ(x, 0.0);
}

TEST(Sample, UniformBoundsRespected) {
  Rng rng(3);
  const double bound = std::sqrt(kGammaSq) * std::sqrt(6.0 / 300.0);
  for (int i = 0; i < 1000; ++i) {
    for (double x : sample(spec_for(InitScheme::XavierUniformGlobal), 300, rng)) {
      EXPECT_GE(x, -bound);
      EXPECT_LT(x, bound);
    }
    for (double x : sample(spec_for(InitScheme::UniformBaseline), 300, rng)) {
      EXPECT_GE(x, 0.0);
      EXPECT_LT(x, 2.0 * std::numbers::pi);
    }
  }
}

TEST(Sample, XavierNormalAndHeNormalCoincide) {
  Rng a(77), b(77);
  EXPECT_EQ(sample(spec_for(InitScheme::XavierNormalGlobal), 300, a),
            sample(spec_for(InitScheme::HeNormal), 300, b));
}

TEST(Sample, ChunkedUsesQubitCountNotParameterCount) {
  const auto draws = pooled(InitScheme::XavierChunked, 600'000, 9);
  EXPECT_NEAR(std::sqrt(sample_variance(draws)), std::sqrt(1.0 / 15.0), 0.01 * std::sqrt(1.0 / 15.0));
}

TEST(Sample, ChunkCoverageMustMatch) {
  Rng rng(1);
  auto spec = spec_for(InitScheme::XavierChunked);
  EXPECT_THROW(sample(spec, 299, rng), ValidationError);
  spec.chunks.clear();
  EXPECT_THROW(sample(spec, 300, rng), ValidationError);
}

TEST(Sample, SameSeedSameVector) {
  for (const auto& [scheme, name] : kSchemeNames) {
    if (scheme == InitScheme::Orthogonal) continue;
    Rng a(5), b(5), c(6);
    const auto x = sample(spec_for(scheme), 300, a);
    EXPECT_EQ(x, sample(spec_for(scheme), 300, b)) << name;
    if (scheme != InitScheme::Zero) {
      EXPECT_NE(x, sample(spec_for(scheme), 300, c)) << name;
    }
  }
}

TEST(Sample, Errors) {
  Rng rng(1);
  EXPECT_THROW(sample(spec_for(InitScheme::Gaussian), 0, rng), ValidationError);
  auto spec = spec_for(InitScheme::Gaussian);
  spec.gamma = 0.0;
  EXPECT_THROW(sample(spec, 10, rng), ValidationError);
  EXPECT_THROW(sample(spec_for(InitScheme::Orthogonal), 10, rng), ValidationError);
}

TEST(Qr, IdentityAndPermutation) {
  const auto qi = qr_decompose(RealMatrix::identity(4));
  EXPECT_EQ(qi.q, RealMatrix::identity(4));
  EXPECT_EQ(qi.r, RealMatrix::identity(4));

  RealMatrix p(3, 3);
  p(0, 1) = 1.0;
  p(1, 2) = 1.0;
  p(2, 0) = 1.0;
  const auto qp = qr_decompose(p);
  EXPECT_LT(max_abs_diff(qp.q, p), 1e-15);
  EXPECT_LT(max_abs_diff(qp.r, RealMatrix::identity(3)), 1e-15);
}

TEST(Qr, ReconstructsAndHasNonNegativeDiagonal) {
  Rng rng(12);
  const auto a = random_matrix(50, rng);
  const auto qr = qr_decompose(a);
  EXPECT_LT(max_abs_diff(matmul(qr.q, qr.r), a), 1e-12);
  EXPECT_LT(orthonormality_error(qr.q), 1e-12);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_GE(qr.r(i, i), 0.0);
    for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(qr.r(i, j), 0.0);
  }
}

TEST(Qr, MatchesEigenHouseholderAfterSignFix) {
  Rng rng(13);
  const std::size_t n = 40;
  const auto a = random_matrix(n, rng);
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
  Eigen::HouseholderQR<Eigen::MatrixXd> hh(m);
  Eigen::MatrixXd q = hh.householderQ();
  Eigen::MatrixXd r = hh.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
    if (r(i, i) < 0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  const auto ours = qr_decompose(a);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(ours.q(i, j) - q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
  EXPECT_LT(worst, 1e-10);
}

TEST(Property, QrOrthonormalAcrossSizes) {
  Rng rng(14);
  for (std::size_t n : {1u, 2u, 3u, 7u, 16u, 64u, 150u, 300u}) {
    const auto qr = qr_decompose(random_matrix(n, rng));
    EXPECT_LT(orthonormality_error(qr.q), 1e-10) << "n=" << n;
  }
}

TEST(Qr, Errors) {
  EXPECT_THROW(qr_decompose(RealMatrix(2, 3)), ValidationError);
  RealMatrix bad(2, 2);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(qr_decompose(bad), ValidationError);
}

TEST(OrthogonalBank, RowsAreOrthonormalAfterScaling) {
  Rng rng(2);
  const double gamma = std::sqrt(kGammaSq);
  const auto bank = orthogonal_bank(5, 300, gamma, 1.0, rng);
  ASSERT_EQ(bank.n_times(), 5u);
  ASSERT_EQ(bank.n_params(), 300u);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < 300; ++k) dot += bank.rows(i, k) * bank.rows(j, k);
      EXPECT_NEAR(dot / kGammaSq, i == j ? 1.0 : 0.0, 1e-10) << i << "," << j;
    }
}

TEST(OrthogonalBank, LambdaScalesRows) {
  Rng a(4), b(4);
  const auto one = orthogonal_bank(2, 10, 0.5, 1.0, a);
  const auto three = orthogonal_bank(2, 10, 0.5, 3.0, b);
  for (std::size_t k = 0; k < 10; ++k) EXPECT_NEAR(three.rows(1, k), 3.0 * one.rows(1, k), 1e-15);
}

TEST(OrthogonalBank, OneByOneIsPlusGamma) {
  Rng rng(8);
  const auto bank = orthogonal_bank(1, 1, 0.25, 1.0, rng);
  EXPECT_EQ(bank.rows(0, 0), 0.25);
}

TEST(OrthogonalBank, Errors) {
  Rng rng(1);
  EXPECT_THROW(orthogonal_bank(301, 300, 1.0, 1.0, rng), ValidationError);
  EXPECT_THROW(orthogonal_bank(0, 3, 1.0, 1.0, rng), ValidationError);
  EXPECT_THROW(orthogonal_bank(1, 3, 0.0, 1.0, rng), ValidationError);
  EXPECT_THROW(orthogonal_bank(1, 3, 1.0, 1.0, rng).row(1), ValidationError);
}

TEST(Property, OrthogonalBankEntriesAreSignSymmetric) {
  // Haar-distributed Q: every entry is symmetric about zero.
  Rng rng(31);
  const int trials = 100'000;
  int positive = 0;
  for (int t = 0; t < trials; ++t) positive += orthogonal_bank(1, 3, 1.0, 1.0, rng).rows(0, 1) > 0.0;
  EXPECT_NEAR(static_cast<double>(positive) / trials, 0.5, 0.01);
}

TEST(OrthogonalBank, Deterministic) {
  Rng a(9), b(9);
  EXPECT_EQ(orthogonal_bank(3, 20, 1.0, 1.0, a).rows, orthogonal_bank(3, 20, 1.0, 1.0, b).rows);
}
