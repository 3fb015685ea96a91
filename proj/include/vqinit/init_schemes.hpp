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

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vqinit/ansatz.hpp"
#include "vqinit/error.hpp"
#include "vqinit/linalg.hpp"
#include "vqinit/random.hpp"

namespace vqinit {

enum class InitScheme {
  Zero,
  UniformBaseline,
  Gaussian,
  XavierNormalGlobal,
  XavierUniformGlobal,
  XavierChunked,
  HeNormal,
  HeUniform,
  LeCunNormal,
  LeCunUniform,
  Orthogonal,
};

inline constexpr std::array<std::pair<InitScheme, std::string_view>, 11> kSchemeNames{{
    {InitScheme::Zero, "zero"},
    {InitScheme::UniformBaseline, "uniform"},
    {InitScheme::Gaussian, "gaussian"},
    {InitScheme::XavierNormalGlobal, "xavier_normal"},
    {InitScheme::XavierUniformGlobal, "xavier_uniform"},
    {InitScheme::XavierChunked, "xavier_chunked"},
    {InitScheme::HeNormal, "he_normal"},
    {InitScheme::HeUniform, "he_uniform"},
    {InitScheme::LeCunNormal, "lecun_normal"},
    {InitScheme::LeCunUniform, "lecun_uniform"},
    {InitScheme::Orthogonal, "orthogonal"},
}};

inline std::string_view scheme_name(InitScheme s) {
  for (const auto& [scheme, name] : kSchemeNames)
    if (scheme == s) return name;
  return "?";
}

inline std::string valid_scheme_names() {
  std::string out;
  for (const auto& [scheme, name] : kSchemeNames) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

inline InitScheme parse_scheme(std::string_view name) {
  for (const auto& [scheme, n] : kSchemeNames)
    if (n == name) return scheme;
  throw ValidationError("unknown init scheme '" + std::string(name) + "'; valid: " + valid_scheme_names());
}

struct InitSpec {
  InitScheme scheme = InitScheme::Gaussian;
  /// Scale factor; variances below are written in terms of gamma^2.
  double gamma = 1.0;
  /// Orthonormal rate, Orthogonal only.
  double lambda = 1.0;
  /// Rows in the orthogonal bank, Orthogonal only.
  std::size_t n_times = 1;
  /// Layer chunks and qubit count, XavierChunked only.
  std::vector<ParamChunk> chunks;
  std::size_t n_qubits = 0;
  /// Range of UniformBaseline.
  double uniform_low = 0.0;
  double uniform_high = 2.0 * std::numbers::pi;
};

enum class Family { Constant, Normal, Uniform };

/// Distribution a global scheme draws each parameter from: N(0, variance)
/// or U(-bound, bound), or U[uniform_low, uniform_high) for the baseline.
struct TargetDistribution {
  Family family = Family::Constant;
  double variance = 0.0;
  double bound = 0.0;
};

inline TargetDistribution target_distribution(const InitSpec& spec, std::size_t n_params) {
  detail::require(n_params >= 1, "sample: n_params must be positive");
  const double g2 = spec.gamma * spec.gamma;
  const double n = static_cast<double>(n_params);
  switch (spec.scheme) {
    case InitScheme::Zero:
      return {Family::Constant, 0.0, 0.0};
    case InitScheme::UniformBaseline: {
      const double w = spec.uniform_high - spec.uniform_low;
      return {Family::Uniform, w * w / 12.0, 0.0};
    }
    case InitScheme::Gaussian:
      return {Family::Normal, g2, 0.0};
    // Global Xavier (fan_in = n_params, fan_out = 1) and He reduce to the
    // same normal/uniform pair.
    case InitScheme::XavierNormalGlobal:
    case InitScheme::HeNormal:
      return {Family::Normal, g2 * 2.0 / n, 0.0};
    case InitScheme::XavierUniformGlobal:
    case InitScheme::HeUniform: {
      const double b = spec.gamma * std::sqrt(6.0 / n);
      return {Family::Uniform, b * b / 3.0, b};
    }
    case InitScheme::LeCunNormal:
      return {Family::Normal, g2 / n, 0.0};
    case InitScheme::LeCunUniform: {
      const double b = spec.gamma * std::sqrt(3.0 / n);
      return {Family::Uniform, b * b / 3.0, b};
    }
    case InitScheme::XavierChunked:
      detail::require(spec.n_qubits >= 1, "xavier_chunked: n_qubits must be positive");
      return {Family::Normal, 1.0 / static_cast<double>(spec.n_qubits), 0.0};
    case InitScheme::Orthogonal:
      throw ValidationError("sample: orthogonal init draws from a bank; use orthogonal_bank");
  }
  throw ValidationError("sample: unknown scheme");
}

/// Fills each chunk from N(0, 1/n_qubits), chunk by chunk.
inline std::vector<double> sample_xavier_chunked(std::span<const ParamChunk> chunks, std::size_t n_qubits,
                                                 Rng& rng) {
  detail::require(!chunks.empty(), "sample_xavier_chunked: empty chunk list");
  detail::require(n_qubits >= 1, "sample_xavier_chunked: n_qubits must be positive");
  const double sigma = std::sqrt(1.0 / static_cast<double>(n_qubits));
  std::size_t total = 0;
  for (const auto& c : chunks) total += c.length;
  std::vector<double> out(total);
  for (const auto& c : chunks) {
    detail::require(c.start + c.length <= total, "sample_xavier_chunked: chunk out of range");
    for (std::size_t i = 0; i < c.length; ++i) out[c.start + i] = sigma * rng.normal();
  }
  return out;
}

inline std::vector<double> sample(const InitSpec& spec, std::size_t n_params, Rng& rng) {
  detail::require(n_params >= 1, "sample: n_params must be positive");
  if (spec.scheme != InitScheme::Zero && spec.scheme != InitScheme::UniformBaseline &&
      spec.scheme != InitScheme::XavierChunked)
    detail::require(spec.gamma > 0.0 && std::isfinite(spec.gamma), "sample: gamma must be positive");

  if (spec.scheme == InitScheme::XavierChunked) {
    auto out = sample_xavier_chunked(spec.chunks, spec.n_qubits, rng);
    detail::require(out.size() == n_params, "sample: xavier_chunked chunks cover " +
                                                std::to_string(out.size()) + " parameters, expected " +
                                                std::to_string(n_params));
    return out;
  }

  const auto target = target_distribution(spec, n_params);
  std::vector<double> out(n_params, 0.0);
  switch (target.family) {
    case Family::Constant:
      break;
    case Family::Normal: {
      const double sd = std::sqrt(target.variance);
      for (auto& x : out) x = sd * rng.normal();
      break;
    }
    case Family::Uniform:
      if (spec.scheme == InitScheme::UniformBaseline) {
        detail::require(spec.uniform_high > spec.uniform_low, "sample: empty uniform range");
        for (auto& x : out) x = rng.uniform(spec.uniform_low, spec.uniform_high);
      } else {
        for (auto& x : out) x = rng.uniform(-target.bound, target.bound);
      }
      break;
  }
  return out;
}

/// n_times x n_params matrix; row r initializes round r.
struct ParamBank {
  RealMatrix rows;

  std::size_t n_times() const { return rows.rows(); }
  std::size_t n_params() const { return rows.cols(); }
  std::vector<double> row(std::size_t r) const {
    detail::require(r < n_times(), "ParamBank: row " + std::to_string(r) + " out of range");
    const auto s = rows.row(r);
    return {s.begin(), s.end()};
  }
};

/// Draws A ~ N(0,1)^{n_params x n_params} row by row, factors A = QR with
/// diag(R) >= 0, and returns the first n_times rows of Q scaled by
/// gamma * lambda.
inline ParamBank orthogonal_bank(std::size_t n_times, std::size_t n_params, double gamma, double lambda,
                                 Rng& rng) {
  detail::require(n_params >= 1, "orthogonal_bank: n_params must be positive");
  detail::require(n_times >= 1, "orthogonal_bank: n_times must be positive");
  detail::require(n_times <= n_params, "orthogonal_bank: n_times (" + std::to_string(n_times) +
                                           ") exceeds n_params (" + std::to_string(n_params) +
                                           "); rows cannot be mutually orthogonal");
  detail::require(gamma > 0.0 && lambda > 0.0, "orthogonal_bank: gamma and lambda must be positive");
  RealMatrix a(n_params, n_params);
  for (std::size_t i = 0; i < n_params; ++i)
    for (double& x : a.row(i)) x = rng.normal();
  const auto qr = qr_decompose(a);
  ParamBank bank{RealMatrix(n_times, n_params)};
  const double scale = gamma * lambda;
  for (std::size_t r = 0; r < n_times; ++r)
    for (std::size_t j = 0; j < n_params; ++j) bank.rows(r, j) = scale * qr.q(r, j);
  return bank;
}

}  // namespace vqinit
