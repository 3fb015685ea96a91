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

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vqinit/ansatz.hpp"
#include "vqinit/error.hpp"
#include "vqinit/hamiltonian.hpp"
#include "vqinit/random.hpp"
#include "vqinit/statevector.hpp"

namespace vqinit {

/// <V(params) input| H |V(params) input>.
inline double loss(const Circuit& c, const Hamiltonian& h, std::span<const double> params,
                   const StateVector& input) {
  return expectation(evaluate(c, params, input), h);
}

struct ValueAndGradient {
  double value = 0.0;
  std::vector<double> gradient;
};

/// Loss and its exact gradient by adjoint differentiation: one forward sweep,
/// then one backward sweep that un-applies each gate from both the state and
/// the co-state H|psi>.
inline ValueAndGradient value_and_gradient(const Circuit& c, const Hamiltonian& h,
                                           std::span<const double> params, const StateVector& input) {
  detail::require(h.n_qubits() == c.n_qubits(), "gradient_adjoint: Hamiltonian/circuit qubit count mismatch");
  StateVector phi = evaluate(c, params, input);
  StateVector lambda = hamiltonian_matvec(h, phi);
  const Complex e = inner(phi.amplitudes(), lambda.amplitudes());
  // Non-finite values pass through so train() can flag divergence.
  if (std::isfinite(e.imag()) && std::abs(e.imag()) > 1e-8)
    throw NumericalError("gradient_adjoint: imaginary energy residual " + std::to_string(e.imag()));

  ValueAndGradient out{e.real(), std::vector<double>(c.n_params(), 0.0)};
  const auto& slots = c.slots();
  for (std::size_t k = slots.size(); k-- > 0;) {
    const auto& s = slots[k];
    const double theta = detail::slot_angle(s, params);
    detail::apply_unchecked(phi, s.kind, s.qubits, -theta);
    if (s.param_index) {
      out.gradient[*s.param_index] =
          2.0 * detail::derivative_overlap_unchecked(lambda, phi, s.kind, s.qubits, theta);
    }
    detail::apply_unchecked(lambda, s.kind, s.qubits, -theta);
  }
  return out;
}

inline std::vector<double> gradient_adjoint(const Circuit& c, const Hamiltonian& h,
                                            std::span<const double> params, const StateVector& input) {
  return value_and_gradient(c, h, params, input).gradient;
}

inline double l2_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

enum class NoiseMode { None, Constant, Adaptive };

/// Multiplier in the adaptive noise variance, 1 / (96 * 24 * 8^2).
inline constexpr double kAdaptiveNoisePrefactor = 1.0 / (96.0 * 24.0 * 64.0);

struct NoiseSpec {
  NoiseMode mode = NoiseMode::None;
  /// Constant: variance of the additive N(0, variance) per component.
  double variance = 0.0;
  /// Adaptive: component k gets variance prefactor * h_norm_sq * g_k^2.
  double adaptive_prefactor = kAdaptiveNoisePrefactor;
  double h_norm_sq = 1.0;
};

inline double adaptive_noise_variance(const NoiseSpec& spec, double grad_component) {
  return spec.adaptive_prefactor * spec.h_norm_sq * grad_component * grad_component;
}

inline std::vector<double> perturb_gradient(std::span<const double> grad, const NoiseSpec& spec, Rng& rng) {
  std::vector<double> out(grad.begin(), grad.end());
  for (double g : grad) detail::require(std::isfinite(g), "perturb_gradient: non-finite gradient");
  switch (spec.mode) {
    case NoiseMode::None:
      break;
    case NoiseMode::Constant: {
      detail::require(spec.variance >= 0.0, "perturb_gradient: negative variance");
      if (spec.variance == 0.0) break;
      const double sd = std::sqrt(spec.variance);
      for (double& g : out) g += sd * rng.normal();
      break;
    }
    case NoiseMode::Adaptive:
      detail::require(spec.adaptive_prefactor > 0.0, "perturb_gradient: adaptive prefactor must be positive");
      detail::require(spec.h_norm_sq >= 0.0, "perturb_gradient: negative ||H||^2");
      for (double& g : out) g += std::sqrt(adaptive_noise_variance(spec, g)) * rng.normal();
      break;
  }
  return out;
}

inline std::vector<double> gd_step(std::span<const double> params, std::span<const double> grad, double lr) {
  detail::require(params.size() == grad.size(), "gd_step: length mismatch");
  detail::require(lr > 0.0, "gd_step: learning rate must be positive");
  std::vector<double> out(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) out[i] = params[i] - lr * grad[i];
  return out;
}

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState fresh(std::size_t n, double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8) {
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0, beta1, beta2, epsilon};
  }
};

struct AdamResult {
  std::vector<double> params;
  AdamState state;
};

/// Bias-corrected Adam.
inline AdamResult adam_step(AdamState state, std::span<const double> params, std::span<const double> grad,
                            double lr) {
  detail::require(params.size() == grad.size() && state.m.size() == params.size() &&
                      state.v.size() == params.size(),
                  "adam_step: length mismatch");
  detail::require(lr > 0.0, "adam_step: learning rate must be positive");
  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  std::vector<double> out(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    out[i] = params[i] - lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
  return {std::move(out), std::move(state)};
}

enum class OptimizerKind { GD, Adam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct RunRow {
  std::size_t iteration = 0;
  double loss = 0.0;
  double loss_minus_fstar = 0.0;
  double grad_l2 = 0.0;
  double wall_ms = 0.0;

  friend bool operator==(const RunRow&, const RunRow&) = default;
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<RunRow> rows;
  bool diverged = false;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct TrainOptions {
  /// Stamp rows with elapsed milliseconds. Off by default so records stay
  /// bit-reproducible; when off, wall_ms is 0.
  bool record_wall_time = false;
  /// A run is flagged diverged once |loss| exceeds this multiple of the
  /// Hamiltonian's coefficient 1-norm.
  double divergence_factor = 1e3;
};

/// Trains from `init_params`. Row 0 holds the initial iterate; row t the
/// iterate after t steps. grad_l2 is the norm of the noiseless gradient.
/// Noise draws continue `rng`.
inline RunRecord train(const Circuit& c, const Hamiltonian& h, const StateVector& input,
                       std::vector<double> init_params, const OptimizerConfig& opt, const NoiseSpec& noise,
                       std::size_t iters, double fstar, Rng& rng, const TrainOptions& options = {}) {
  detail::require(iters >= 1, "train: iterations must be at least 1");
  detail::require(std::isfinite(fstar), "train: fstar must be finite");
  detail::require(init_params.size() == c.n_params(), "train: initial parameter count mismatch");
  detail::require(opt.lr > 0.0, "train: learning rate must be positive");

  const auto t0 = std::chrono::steady_clock::now();
  const double bound = options.divergence_factor * h.one_norm();
  RunRecord rec;
  rec.seed = rng.seed();
  rec.rows.reserve(iters + 1);

  std::vector<double> params = std::move(init_params);
  AdamState adam = AdamState::fresh(params.size(), opt.beta1, opt.beta2, opt.epsilon);

  auto record = [&](std::size_t it, const ValueAndGradient& vg) {
    double ms = 0.0;
    if (options.record_wall_time)
      ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rec.rows.push_back({it, vg.value, vg.value - fstar, l2_norm(vg.gradient), ms});
    return std::isfinite(vg.value) && std::abs(vg.value) <= bound;
  };

  ValueAndGradient vg = value_and_gradient(c, h, params, input);
  if (!record(0, vg)) {
    rec.diverged = true;
    return rec;
  }
  for (std::size_t it = 1; it <= iters; ++it) {
    const auto noisy = perturb_gradient(vg.gradient, noise, rng);
    if (opt.kind == OptimizerKind::GD) {
      params = gd_step(params, noisy, opt.lr);
    } else {
      auto step = adam_step(std::move(adam), params, noisy, opt.lr);
      params = std::move(step.params);
      adam = std::move(step.state);
    }
    vg = value_and_gradient(c, h, params, input);
    if (!record(it, vg)) {
      rec.diverged = true;
      break;
    }
  }
  return rec;
}

}  // namespace vqinit
