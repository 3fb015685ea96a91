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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "vqinit/ansatz.hpp"
#include "vqinit/error.hpp"
#include "vqinit/hamiltonian.hpp"
#include "vqinit/optimize.hpp"
#include "vqinit/random.hpp"
#include "vqinit/statevector.hpp"

namespace vqinit {

enum class EigenMethod { Dense, Lanczos };

struct GroundEnergyResult {
  double energy = 0.0;
  EigenMethod method = EigenMethod::Dense;
  /// ||H v - E v|| for the returned normalized eigenvector.
  double residual = 0.0;
};

struct LanczosOptions {
  std::size_t max_krylov = 300;
  /// Converged once the Ritz residual beta_k |y_k| drops below this.
  double tolerance = 1e-9;
  std::uint64_t seed = 0x5eed;
};

struct GroundEnergyOptions {
  std::size_t dense_max_qubits = 12;
  LanczosOptions lanczos;
};

namespace detail {

inline double residual_norm(const Hamiltonian& h, std::span<const Complex> v, double energy) {
  std::vector<Complex> hv(v.size());
  hamiltonian_matvec(h, v, hv);
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += std::norm(hv[i] - energy * v[i]);
  return std::sqrt(acc);
}

inline bool has_real_matrix(const Hamiltonian& h) {
  for (const auto& t : h.terms())
    if (std::count(t.letters.begin(), t.letters.end(), 'Y') % 2 != 0) return false;
  return true;
}

// Lowest eigenpair of the tridiagonal matrix with diagonal `a` and
// off-diagonal `b` (b.size() == a.size() - 1).
struct RitzPair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

inline RitzPair lowest_ritz(const std::vector<double>& a, const std::vector<double>& b) {
  const auto k = static_cast<Eigen::Index>(a.size());
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(a.data(), k);
  Eigen::VectorXd sub(std::max<Eigen::Index>(k - 1, 0));
  for (Eigen::Index i = 0; i + 1 < k; ++i) sub(i) = b[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

struct LanczosAttempt {
  bool converged = false;
  double energy = 0.0;
  double ritz_residual = std::numeric_limits<double>::infinity();
  std::vector<Complex> vector;
};

inline LanczosAttempt lanczos_attempt(const Hamiltonian& h, const LanczosOptions& opt, std::uint64_t seed) {
  const std::size_t dim = std::size_t{1} << h.n_qubits();
  const std::size_t cap = std::min(opt.max_krylov, dim);
  Rng rng(seed);

  std::vector<std::vector<Complex>> basis;
  basis.reserve(cap);
  std::vector<Complex> q(dim);
  for (auto& x : q) x = {rng.normal(), rng.normal()};
  double n0 = 0.0;
  for (const auto& x : q) n0 += std::norm(x);
  n0 = std::sqrt(n0);
  for (auto& x : q) x /= n0;

  std::vector<double> alpha, beta;
  std::vector<Complex> w(dim);
  LanczosAttempt best;
  RitzPair ritz;

  for (std::size_t j = 0; j < cap; ++j) {
    basis.push_back(q);
    const auto& qj = basis.back();
    hamiltonian_matvec(h, qj, w);
    alpha.push_back(inner(qj, w).real());
    // Full reorthogonalization, two passes of classical Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qi : basis) {
        const Complex proj = inner(qi, w);
        for (std::size_t i = 0; i < dim; ++i) w[i] -= detail::mul(proj, qi[i]);
      }
    }
    double b = 0.0;
    for (const auto& x : w) b += std::norm(x);
    b = std::sqrt(b);

    const bool last = j + 1 == cap;
    const bool check = j < 50 || j % 5 == 0 || last || b < 1e-12;
    if (check) {
      ritz = lowest_ritz(alpha, beta);
      const double res = b * std::abs(ritz.vector(static_cast<Eigen::Index>(j)));
      if (res < best.ritz_residual) {
        best.ritz_residual = res;
        best.energy = ritz.value;
      }
      if (res < opt.tolerance || b < 1e-12 || last) {
        best.converged = res < opt.tolerance || b < 1e-12;
        best.energy = ritz.value;
        best.ritz_residual = res;
        best.vector.assign(dim, Complex{0.0, 0.0});
        for (std::size_t i = 0; i < basis.size(); ++i) {
          const double yi = ritz.vector(static_cast<Eigen::Index>(i));
          for (std::size_t k = 0; k < dim; ++k) best.vector[k] += yi * basis[i][k];
        }
        return best;
      }
    }
    beta.push_back(b);
    for (std::size_t i = 0; i < dim; ++i) q[i] = w[i] / b;
  }
  return best;
}

}  // namespace detail

/// Lowest eigenvalue by diagonalizing the materialized 2^n x 2^n matrix.
inline GroundEnergyResult ground_energy_dense(const Hamiltonian& h) {
  detail::require(h.n_qubits() <= 14, "ground_energy_dense: at most 14 qubits");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << h.n_qubits());
  std::vector<Complex> v(static_cast<std::size_t>(dim));
  double energy = 0.0;
  if (detail::has_real_matrix(h)) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& t : h.terms()) {
      const auto pm = detail::pauli_masks(t.letters);
      const double w = t.coefficient * pm.y_phase.real();
      for (Eigen::Index j = 0; j < dim; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        m(static_cast<Eigen::Index>(ju ^ pm.x), j) += w * detail::parity_sign(ju & pm.z);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("ground_energy_dense: eigensolver failed");
    energy = es.eigenvalues()(0);
    for (Eigen::Index i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] = es.eigenvectors()(i, 0);
  } else {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& t : h.terms()) {
      const auto pm = detail::pauli_masks(t.letters);
      const Complex w = t.coefficient * pm.y_phase;
      for (Eigen::Index j = 0; j < dim; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        m(static_cast<Eigen::Index>(ju ^ pm.x), j) += w * detail::parity_sign(ju & pm.z);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("ground_energy_dense: eigensolver failed");
    energy = es.eigenvalues()(0);
    for (Eigen::Index i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] = es.eigenvectors()(i, 0);
  }
  return {energy, EigenMethod::Dense, detail::residual_norm(h, v, energy)};
}

/// Lowest eigenvalue by Lanczos with full reorthogonalization from a seeded
/// random start vector. Restarts once with a fresh seed if the Krylov cap is
/// reached without convergence.
inline GroundEnergyResult ground_energy_lanczos(const Hamiltonian& h, const LanczosOptions& opt = {}) {
  detail::require(h.n_qubits() <= 20, "ground_energy_lanczos: at most 20 qubits");
  auto attempt = detail::lanczos_attempt(h, opt, opt.seed);
  if (!attempt.converged) {
    auto retry = detail::lanczos_attempt(h, opt, opt.seed + 0x9e3779b97f4a7c15ULL);
    if (!retry.converged) {
      const double best = std::min(attempt.ritz_residual, retry.ritz_residual);
      throw NumericalError("ground_energy_lanczos: no convergence within " + std::to_string(opt.max_krylov) +
                           " Krylov vectors; best Ritz residual " + std::to_string(best));
    }
    attempt = std::move(retry);
  }
  return {attempt.energy, EigenMethod::Lanczos, detail::residual_norm(h, attempt.vector, attempt.energy)};
}

/// Dense for small systems, Lanczos above `dense_max_qubits`.
inline GroundEnergyResult ground_energy(const Hamiltonian& h, const GroundEnergyOptions& opt = {}) {
  detail::require(h.n_qubits() <= 20, "ground_energy: at most 20 qubits");
  auto r = h.n_qubits() <= opt.dense_max_qubits ? ground_energy_dense(h) : ground_energy_lanczos(h, opt.lanczos);
  if (!(r.residual < 1e-8))
    throw NumericalError("ground_energy: eigenvector residual " + std::to_string(r.residual) + " exceeds 1e-8");
  return r;
}

inline Hamiltonian negated(const Hamiltonian& h) {
  auto terms = h.terms();
  for (auto& t : terms) t.coefficient = -t.coefficient;
  return Hamiltonian(h.n_qubits(), std::move(terms));
}

/// Largest |eigenvalue| of H.
inline double spectral_norm(const Hamiltonian& h, const GroundEnergyOptions& opt = {}) {
  const double lo = ground_energy(h, opt).energy;
  const double hi = -ground_energy(negated(h), opt).energy;
  return std::max(std::abs(lo), std::abs(hi));
}

/// Central differences (f(p + h e_k) - f(p - h e_k)) / 2h.
inline std::vector<double> gradient_fd(const Circuit& c, const Hamiltonian& h, std::span<const double> params,
                                       const StateVector& input, double step = 1e-5) {
  detail::require(step > 0.0, "gradient_fd: step must be positive");
  std::vector<double> p(params.begin(), params.end());
  std::vector<double> g(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double orig = p[k];
    p[k] = orig + step;
    const double fp = loss(c, h, p, input);
    p[k] = orig - step;
    const double fm = loss(c, h, p, input);
    p[k] = orig;
    g[k] = (fp - fm) / (2.0 * step);
  }
  return g;
}

/// Two-term shift rule, exact for RX/RY parameters.
inline std::vector<double> gradient_paramshift(const Circuit& c, const Hamiltonian& h,
                                               std::span<const double> params, const StateVector& input) {
  detail::require(c.only_rotations(),
                  "gradient_paramshift: circuit contains Givens gates; the two-term shift rule does not apply");
  constexpr double shift = std::numbers::pi / 2.0;
  std::vector<double> p(params.begin(), params.end());
  std::vector<double> g(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double orig = p[k];
    p[k] = orig + shift;
    const double fp = loss(c, h, p, input);
    p[k] = orig - shift;
    const double fm = loss(c, h, p, input);
    p[k] = orig;
    g[k] = 0.5 * (fp - fm);
  }
  return g;
}

}  // namespace vqinit
