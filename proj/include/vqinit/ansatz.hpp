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

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "vqinit/error.hpp"
#include "vqinit/statevector.hpp"

namespace vqinit {

struct GateSlot {
  GateKind kind = GateKind::CZ;
  std::vector<std::size_t> qubits;
  std::optional<std::size_t> param_index;

  friend bool operator==(const GateSlot&, const GateSlot&) = default;
};

/// Contiguous range [start, start + length) of the parameter vector.
struct ParamChunk {
  std::size_t start = 0;
  std::size_t length = 0;

  friend bool operator==(const ParamChunk&, const ParamChunk&) = default;
};

/// Ordered gate list with parameter bookkeeping. Immutable once built.
class Circuit {
 public:
  Circuit(std::size_t n_qubits, std::vector<GateSlot> slots, std::vector<ParamChunk> layer_chunks)
      : n_qubits_(n_qubits), slots_(std::move(slots)), chunks_(std::move(layer_chunks)) {
    detail::require(n_qubits_ >= 1, "Circuit: qubit count must be positive");
    std::vector<bool> seen;
    for (const auto& s : slots_) {
      detail::check_gate_args(n_qubits_, s.kind, s.qubits, s.param_index.has_value());
      if (s.param_index) {
        if (*s.param_index >= seen.size()) seen.resize(*s.param_index + 1, false);
        detail::require(!seen[*s.param_index],
                        "Circuit: parameter slot " + std::to_string(*s.param_index) + " used twice");
        seen[*s.param_index] = true;
      }
    }
    n_params_ = seen.size();
    for (std::size_t k = 0; k < n_params_; ++k)
      detail::require(seen[k], "Circuit: parameter slot " + std::to_string(k) + " never used");
    std::size_t next = 0;
    for (const auto& c : chunks_) {
      detail::require(c.start == next && c.length > 0, "Circuit: layer chunks must be contiguous and non-empty");
      next += c.length;
    }
    detail::require(next == n_params_, "Circuit: layer chunks must cover every parameter");
  }

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t n_params() const { return n_params_; }
  const std::vector<GateSlot>& slots() const { return slots_; }
  const std::vector<ParamChunk>& layer_chunks() const { return chunks_; }

  bool only_rotations() const {
    for (const auto& s : slots_)
      if (s.kind == GateKind::GivensSingle || s.kind == GateKind::GivensDouble) return false;
    return true;
  }

 private:
  std::size_t n_qubits_;
  std::vector<GateSlot> slots_;
  std::vector<ParamChunk> chunks_;
  std::size_t n_params_ = 0;
};

/// Hardware-efficient ansatz. Each layer applies CZ to the ring pairs
/// (0,1), (1,2), ..., (n-1,0), then RX on every qubit, then RY on every qubit.
/// For n = 2 the ring has a single edge. One layer chunk per layer.
inline Circuit build_hea(std::size_t n, std::size_t layers) {
  detail::require(n >= 2, "build_hea: need at least 2 qubits, got " + std::to_string(n));
  detail::require(layers >= 1, "build_hea: need at least 1 layer");
  std::vector<GateSlot> slots;
  std::vector<ParamChunk> chunks;
  const std::size_t n_edges = n == 2 ? 1 : n;
  std::size_t p = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t e = 0; e < n_edges; ++e) slots.push_back({GateKind::CZ, {e, (e + 1) % n}, std::nullopt});
    const std::size_t start = p;
    for (std::size_t q = 0; q < n; ++q) slots.push_back({GateKind::RX, {q}, p++});
    for (std::size_t q = 0; q < n; ++q) slots.push_back({GateKind::RY, {q}, p++});
    chunks.push_back({start, p - start});
  }
  return Circuit(n, std::move(slots), std::move(chunks));
}

/// An excitation in a Givens wiring: 2 entries (occ, virt) for a single,
/// 4 entries (o1, o2, v1, v2) for a double.
using Excitation = std::vector<std::size_t>;

/// Spin-conserving excitations out of the Hartree-Fock determinant with
/// orbitals 0..n_e-1 occupied. Even orbitals are spin-up, odd spin-down.
/// Singles (occ, virt) with equal parity in lexicographic order, then doubles
/// (o1 < o2, v1 < v2) whose pairs hold equally many spin-up orbitals, in
/// lexicographic order.
inline std::vector<Excitation> default_givens_wiring(std::size_t n_e, std::size_t n_orb) {
  detail::require(n_e < n_orb, "build_givens_default: need n_e < n_orb (got " + std::to_string(n_e) +
                                   ", " + std::to_string(n_orb) + ")");
  std::vector<Excitation> out;
  for (std::size_t o = 0; o < n_e; ++o)
    for (std::size_t v = n_e; v < n_orb; ++v)
      if (o % 2 == v % 2) out.push_back({o, v});
  for (std::size_t o1 = 0; o1 < n_e; ++o1)
    for (std::size_t o2 = o1 + 1; o2 < n_e; ++o2)
      for (std::size_t v1 = n_e; v1 < n_orb; ++v1)
        for (std::size_t v2 = v1 + 1; v2 < n_orb; ++v2) {
          const auto ups = [](std::size_t a, std::size_t b) { return (a % 2 == 0) + (b % 2 == 0); };
          if (ups(o1, o2) == ups(v1, v2)) out.push_back({o1, o2, v1, v2});
        }
  return out;
}

/// Parses a wiring file: `single <occ> <virt>` or `double <o1> <o2> <v1> <v2>`
/// per line; blank and `#` lines are skipped.
inline std::vector<Excitation> parse_givens_wiring(std::istream& in) {
  std::vector<Excitation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    const std::string where = "parse_givens_wiring: line " + std::to_string(line_no);
    std::size_t count = 0;
    if (kind == "single") count = 2;
    else if (kind == "double") count = 4;
    else throw ValidationError(where + ": expected 'single' or 'double', got '" + kind + "'");
    Excitation e(count);
    for (auto& q : e) {
      long long v = -1;
      detail::require(static_cast<bool>(fields >> v) && v >= 0, where + ": expected non-negative qubit index");
      q = static_cast<std::size_t>(v);
    }
    std::string extra;
    detail::require(!(fields >> extra), where + ": trailing field '" + extra + "'");
    out.push_back(std::move(e));
  }
  detail::require(!out.empty(), "parse_givens_wiring: no gates");
  return out;
}

/// One Givens gate per excitation, one parameter per gate, all parameters in
/// a single chunk.
inline Circuit build_givens(std::size_t n_orb, const std::vector<Excitation>& wiring) {
  std::vector<GateSlot> slots;
  std::size_t p = 0;
  for (const auto& e : wiring) {
    detail::require(e.size() == 2 || e.size() == 4, "build_givens: excitation must name 2 or 4 qubits");
    slots.push_back({e.size() == 2 ? GateKind::GivensSingle : GateKind::GivensDouble, e, p++});
  }
  detail::require(p > 0, "build_givens: empty wiring");
  return Circuit(n_orb, std::move(slots), {{0, p}});
}

inline Circuit build_givens_default(std::size_t n_e, std::size_t n_orb) {
  return build_givens(n_orb, default_givens_wiring(n_e, n_orb));
}

/// |1>^{n_e} (x) |0>^{n_orb - n_e}.
inline StateVector hf_state(std::size_t n_e, std::size_t n_orb) {
  detail::require(n_e <= n_orb, "hf_state: more electrons than orbitals");
  std::size_t index = 0;
  for (std::size_t q = 0; q < n_e; ++q) index |= std::size_t{1} << (n_orb - 1 - q);
  return StateVector::basis(n_orb, index);
}

namespace detail {

inline void check_evaluate_args(const Circuit& c, std::span<const double> params, const StateVector& input) {
  require(params.size() == c.n_params(), "evaluate: expected " + std::to_string(c.n_params()) +
                                              " parameters, got " + std::to_string(params.size()));
  require(input.n_qubits() == c.n_qubits(), "evaluate: input has " + std::to_string(input.n_qubits()) +
                                                " qubits, circuit has " + std::to_string(c.n_qubits()));
}

inline double slot_angle(const GateSlot& s, std::span<const double> params) {
  return s.param_index ? params[*s.param_index] : 0.0;
}

}  // namespace detail

/// V(params) |input>, applying slots in order.
inline StateVector evaluate(const Circuit& c, std::span<const double> params, StateVector input) {
  detail::check_evaluate_args(c, params, input);
  for (const auto& s : c.slots()) detail::apply_unchecked(input, s.kind, s.qubits, detail::slot_angle(s, params));
  return input;
}

}  // namespace vqinit
