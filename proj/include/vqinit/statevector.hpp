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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vqinit/error.hpp"

namespace vqinit {

using Complex = std::complex<double>;

/// Pure state of `n_qubits` qubits stored as 2^n contiguous amplitudes.
///
/// Basis indexing is big-endian: qubit 0 is the most significant bit of the
/// amplitude index, so |q0 q1 ... q_{n-1}> sits at index sum q_i 2^{n-1-i}.
class StateVector {
 public:
  static constexpr std::size_t kMaxQubits = 30;

  explicit StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    detail::require(n_qubits >= 1 && n_qubits <= kMaxQubits,
                    "StateVector: qubit count must be in [1, 30], got " +
                        std::to_string(n_qubits));
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
  }

  StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
      : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    detail::require(n_qubits >= 1 && n_qubits <= kMaxQubits,
                    "StateVector: qubit count must be in [1, 30]");
    detail::require(amps_.size() == (std::size_t{1} << n_qubits),
                    "StateVector: amplitude count must be 2^n_qubits");
  }

  /// Computational basis state |index>.
  static StateVector basis(std::size_t n_qubits, std::size_t index) {
    StateVector s(n_qubits);
    detail::require(index < s.dim(), "StateVector::basis: index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
  }

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }

  std::span<Complex> amplitudes() { return amps_; }
  std::span<const Complex> amplitudes() const { return amps_; }

  Complex& operator[](std::size_t i) { return amps_[i]; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm_sq() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return acc;
  }

  void normalize() {
    const double n = std::sqrt(norm_sq());
    detail::require(n > 0.0, "StateVector::normalize: zero vector");
    for (auto& a : amps_) a /= n;
  }

  /// Bit mask of `qubit` within an amplitude index.
  std::size_t mask(std::size_t qubit) const { return std::size_t{1} << (n_qubits_ - 1 - qubit); }

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  std::size_t n_qubits_;
  std::vector<Complex> amps_;
};

namespace detail {

// Plain complex products. std::complex multiplication routes through the
// C99 Annex G NaN-recovery path unless -fcx-limited-range is set.
inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// Re(conj(a) * b)
inline double re_conj_mul(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

}  // namespace detail

/// <a|b>, conjugating the left argument.
inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  detail::require(a.size() == b.size(), "inner: dimension mismatch");
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

enum class GateKind { RX, RY, CZ, GivensSingle, GivensDouble };

inline bool is_parameterized(GateKind kind) { return kind != GateKind::CZ; }

inline std::size_t gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
      return 1;
    case GateKind::CZ:
    case GateKind::GivensSingle:
      return 2;
    case GateKind::GivensDouble:
      return 4;
  }
  return 0;
}

inline std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::CZ: return "CZ";
    case GateKind::GivensSingle: return "GivensSingle";
    case GateKind::GivensDouble: return "GivensDouble";
  }
  return "?";
}

namespace detail {

inline void check_gate_args(std::size_t n_qubits, GateKind kind, std::span<const std::size_t> qubits,
                            bool has_angle) {
  const std::string name(gate_name(kind));
  require(qubits.size() == gate_arity(kind),
          name + ": expected " + std::to_string(gate_arity(kind)) + " qubit(s), got " +
              std::to_string(qubits.size()));
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    require(qubits[i] < n_qubits, name + ": qubit index " + std::to_string(qubits[i]) +
                                      " out of range for " + std::to_string(n_qubits) + " qubits");
    for (std::size_t j = 0; j < i; ++j)
      require(qubits[i] != qubits[j], name + ": duplicate qubit index " + std::to_string(qubits[i]));
  }
  if (is_parameterized(kind))
    require(has_angle, name + ": angle required");
  else
    require(!has_angle, name + ": fixed gate takes no angle");
}

// Rotates every pair (i, i ^ flip) whose bits under pattern_mask equal
// `pattern` by [[c, -s], [s, c]].
inline void rotate_pairs(std::span<Complex> amps, std::size_t pattern_mask, std::size_t pattern,
                         std::size_t flip, double c, double s) {
  const std::size_t dim = amps.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & pattern_mask) != pattern) continue;
    const std::size_t j = i ^ flip;
    const Complex a = amps[i];
    const Complex b = amps[j];
    amps[i] = c * a - s * b;
    amps[j] = s * a + c * b;
  }
}

// Calls f(i0, i1) for every index pair differing only in `bit`, with the
// bit clear in i0. The inner loop is contiguous.
template <class F>
inline void for_each_pair(std::size_t dim, std::size_t bit, F&& f) {
  for (std::size_t base = 0; base < dim; base += 2 * bit)
    for (std::size_t i0 = base; i0 < base + bit; ++i0) f(i0, i0 + bit);
}

inline void apply_rx(std::span<Complex> amps, std::size_t bit, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Complex* a = amps.data();
  for_each_pair(amps.size(), bit, [=](std::size_t i0, std::size_t i1) {
    const Complex x = a[i0];
    const Complex y = a[i1];
    // [[c, -is], [-is, c]]
    a[i0] = {c * x.real() + s * y.imag(), c * x.imag() - s * y.real()};
    a[i1] = {c * y.real() + s * x.imag(), c * y.imag() - s * x.real()};
  });
}

inline void apply_ry(std::span<Complex> amps, std::size_t bit, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Complex* a = amps.data();
  for_each_pair(amps.size(), bit, [=](std::size_t i0, std::size_t i1) {
    const Complex x = a[i0];
    const Complex y = a[i1];
    a[i0] = {c * x.real() - s * y.real(), c * x.imag() - s * y.imag()};
    a[i1] = {s * x.real() + c * y.real(), s * x.imag() + c * y.imag()};
  });
}

inline void apply_cz(std::span<Complex> amps, std::size_t bit_a, std::size_t bit_b) {
  const std::size_t hi = std::max(bit_a, bit_b);
  const std::size_t lo = std::min(bit_a, bit_b);
  const std::size_t dim = amps.size();
  // Visit only indices with both bits set.
  for (std::size_t outer = hi; outer < dim; outer += 2 * hi)
    for (std::size_t mid = outer + lo; mid < outer + hi; mid += 2 * lo)
      for (std::size_t i = mid; i < mid + lo; ++i) amps[i] = -amps[i];
}

// Masks for the two-dimensional subspace a Givens gate rotates. `lo` is the
// pattern of the first basis vector (|01> or |0011>), `all` covers every
// qubit the gate touches; the second basis vector is lo ^ all.
struct GivensMasks {
  std::size_t all = 0;
  std::size_t lo = 0;
};

inline GivensMasks givens_masks(const StateVector& s, GateKind kind, std::span<const std::size_t> q) {
  GivensMasks m;
  if (kind == GateKind::GivensSingle) {
    m.all = s.mask(q[0]) | s.mask(q[1]);
    m.lo = s.mask(q[1]);
  } else {
    m.all = s.mask(q[0]) | s.mask(q[1]) | s.mask(q[2]) | s.mask(q[3]);
    m.lo = s.mask(q[2]) | s.mask(q[3]);
  }
  return m;
}

inline void apply_unchecked(StateVector& state, GateKind kind, std::span<const std::size_t> q,
                            double theta) {
  auto amps = state.amplitudes();
  switch (kind) {
    case GateKind::RX:
      apply_rx(amps, state.mask(q[0]), theta);
      break;
    case GateKind::RY:
      apply_ry(amps, state.mask(q[0]), theta);
      break;
    case GateKind::CZ:
      apply_cz(amps, state.mask(q[0]), state.mask(q[1]));
      break;
    case GateKind::GivensSingle:
    case GateKind::GivensDouble: {
      const auto m = givens_masks(state, kind, q);
      rotate_pairs(amps, m.all, m.lo, m.all, std::cos(0.5 * theta), std::sin(0.5 * theta));
      break;
    }
  }
}

// Re <lhs| dU(theta)/dtheta |rhs> for a parameterized gate, without forming
// dU|rhs>. Derivative blocks (c = cos(theta/2), s = sin(theta/2)):
//   RX:     1/2 [[-s, -ic], [-ic, -s]]
//   RY:     1/2 [[-s, -c], [c, -s]]
//   Givens: 1/2 [[-s, -c], [c, -s]] on the rotated pair, zero elsewhere.
inline double derivative_overlap_unchecked(const StateVector& lhs, const StateVector& rhs, GateKind kind,
                                           std::span<const std::size_t> q, double theta) {
  const double c = 0.5 * std::cos(0.5 * theta);
  const double s = 0.5 * std::sin(0.5 * theta);
  const auto l = lhs.amplitudes();
  const auto r = rhs.amplitudes();
  const std::size_t dim = r.size();
  double acc = 0.0;
  switch (kind) {
    case GateKind::RX:
      for_each_pair(dim, rhs.mask(q[0]), [&](std::size_t i0, std::size_t i1) {
        // -ic * z = (c z.imag, -c z.real)
        const Complex d0{-s * r[i0].real() + c * r[i1].imag(), -s * r[i0].imag() - c * r[i1].real()};
        const Complex d1{c * r[i0].imag() - s * r[i1].real(), -c * r[i0].real() - s * r[i1].imag()};
        acc += re_conj_mul(l[i0], d0) + re_conj_mul(l[i1], d1);
      });
      return acc;
    case GateKind::RY:
      for_each_pair(dim, rhs.mask(q[0]), [&](std::size_t i0, std::size_t i1) {
        acc += re_conj_mul(l[i0], -s * r[i0] - c * r[i1]) + re_conj_mul(l[i1], c * r[i0] - s * r[i1]);
      });
      return acc;
    case GateKind::GivensSingle:
    case GateKind::GivensDouble: {
      const auto m = givens_masks(rhs, kind, q);
      for (std::size_t i = 0; i < dim; ++i) {
        if ((i & m.all) != m.lo) continue;
        const std::size_t j = i ^ m.all;
        acc += re_conj_mul(l[i], -s * r[i] - c * r[j]) + re_conj_mul(l[j], c * r[i] - s * r[j]);
      }
      return acc;
    }
    case GateKind::CZ:
      break;
  }
  throw ValidationError("derivative_overlap: gate " + std::string(gate_name(kind)) + " has no parameter");
}

}  // namespace detail

/// Applies a gate in place. RX(t) = exp(-i t X / 2), RY(t) = exp(-i t Y / 2),
/// CZ flips the sign of |11>. GivensSingle on (a, b) rotates the pair
/// (|01>, |10>) by [[cos t/2, -sin t/2], [sin t/2, cos t/2]]; GivensDouble on
/// (a, b, c, d) does the same on (|0011>, |1100>). Identity elsewhere.
inline void apply_gate_inplace(StateVector& state, GateKind kind, std::span<const std::size_t> qubits,
                               std::optional<double> angle = std::nullopt) {
  detail::check_gate_args(state.n_qubits(), kind, qubits, angle.has_value());
  detail::apply_unchecked(state, kind, qubits, angle.value_or(0.0));
}

inline StateVector apply_gate(StateVector state, GateKind kind, std::span<const std::size_t> qubits,
                              std::optional<double> angle = std::nullopt) {
  apply_gate_inplace(state, kind, qubits, angle);
  return state;
}

inline StateVector apply_gate(StateVector state, GateKind kind, std::initializer_list<std::size_t> qubits,
                              std::optional<double> angle = std::nullopt) {
  const std::vector<std::size_t> q(qubits);
  apply_gate_inplace(state, kind, q, angle);
  return state;
}

/// Dense 2^k x 2^k unitary of a gate acting on its own k qubits, row-major,
/// in the same big-endian ordering as StateVector.
inline std::vector<Complex> gate_matrix(GateKind kind, std::optional<double> angle = std::nullopt) {
  const std::size_t k = gate_arity(kind);
  const std::size_t d = std::size_t{1} << k;
  std::vector<std::size_t> q(k);
  for (std::size_t i = 0; i < k; ++i) q[i] = i;
  std::vector<Complex> u(d * d);
  for (std::size_t col = 0; col < d; ++col) {
    auto s = apply_gate(StateVector::basis(k, col), kind, q, angle);
    for (std::size_t row = 0; row < d; ++row) u[row * d + col] = s[row];
  }
  return u;
}

}  // namespace vqinit
