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

#include <bit>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vqinit/error.hpp"
#include "vqinit/statevector.hpp"

namespace vqinit {

/// Real-weighted tensor product of single-qubit Paulis. `letters[i]` acts on
/// qubit i and is one of I, X, Y, Z.
struct PauliTerm {
  double coefficient = 0.0;
  std::string letters;

  friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
};

namespace detail {

// Bit-level form of a Pauli string: P|j> = i^{n_y} (-1)^{popcount(j & z)} |j ^ x>.
struct PauliMasks {
  std::size_t x = 0;
  std::size_t z = 0;
  Complex y_phase{1.0, 0.0};
};

inline PauliMasks pauli_masks(std::string_view letters) {
  PauliMasks m;
  const std::size_t n = letters.size();
  unsigned n_y = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    switch (letters[q]) {
      case 'X': m.x |= bit; break;
      case 'Y': m.x |= bit; m.z |= bit; ++n_y; break;
      case 'Z': m.z |= bit; break;
      default: break;
    }
  }
  static constexpr Complex kPowI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  m.y_phase = kPowI[n_y % 4];
  return m;
}

inline double parity_sign(std::size_t bits) { return (std::popcount(bits) & 1U) ? -1.0 : 1.0; }

}  // namespace detail

/// Sum of Pauli terms over a fixed number of qubits.
class Hamiltonian {
 public:
  Hamiltonian(std::size_t n_qubits, std::vector<PauliTerm> terms)
      : n_qubits_(n_qubits), terms_(std::move(terms)) {
    detail::require(n_qubits_ >= 1, "Hamiltonian: qubit count must be positive");
    detail::require(!terms_.empty(), "Hamiltonian: term list is empty");
    for (const auto& t : terms_) {
      detail::require(t.letters.size() == n_qubits_,
                      "Hamiltonian: term '" + t.letters + "' has length " +
                          std::to_string(t.letters.size()) + ", expected " + std::to_string(n_qubits_));
      detail::require(std::isfinite(t.coefficient), "Hamiltonian: non-finite coefficient");
      for (char c : t.letters)
        detail::require(c == 'I' || c == 'X' || c == 'Y' || c == 'Z',
                        std::string("Hamiltonian: invalid Pauli letter '") + c + "'");
    }
  }

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

  /// Sum of |coefficient| over terms; an upper bound on the spectral norm.
  double one_norm() const {
    double acc = 0.0;
    for (const auto& t : terms_) acc += std::abs(t.coefficient);
    return acc;
  }

  friend bool operator==(const Hamiltonian&, const Hamiltonian&) = default;

 private:
  std::size_t n_qubits_;
  std::vector<PauliTerm> terms_;
};

/// Open-chain Heisenberg model sum_{i<n-1} X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1}.
/// Terms are grouped by letter: all XX bonds, then YY, then ZZ.
inline Hamiltonian build_heisenberg(std::size_t n) {
  detail::require(n >= 2, "build_heisenberg: need at least 2 qubits, got " + std::to_string(n));
  std::vector<PauliTerm> terms;
  terms.reserve(3 * (n - 1));
  for (char p : {'X', 'Y', 'Z'}) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      std::string letters(n, 'I');
      letters[i] = letters[i + 1] = p;
      terms.push_back({1.0, std::move(letters)});
    }
  }
  return Hamiltonian(n, std::move(terms));
}

/// Parses the text Hamiltonian format: `#` comment lines, blank lines, and
/// data lines `<coefficient> <letters>`.
inline Hamiltonian parse_hamiltonian(std::istream& in) {
  std::vector<PauliTerm> terms;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string coeff_text, letters, extra;
    fields >> coeff_text >> letters;
    const std::string where = "line " + std::to_string(line_no);
    detail::require(!letters.empty(), "parse_hamiltonian: " + where + ": expected '<coefficient> <letters>'");
    detail::require(!(fields >> extra), "parse_hamiltonian: " + where + ": trailing field '" + extra + "'");

    double coeff = 0.0;
    const char* end = coeff_text.data() + coeff_text.size();
    auto [ptr, ec] = std::from_chars(coeff_text.data(), end, coeff);
    detail::require(ec == std::errc() && ptr == end && std::isfinite(coeff),
                    "parse_hamiltonian: " + where + ": unparseable coefficient '" + coeff_text + "'");
    for (char c : letters)
      detail::require(c == 'I' || c == 'X' || c == 'Y' || c == 'Z',
                      "parse_hamiltonian: " + where + ": invalid letter '" + std::string(1, c) + "'");
    if (!terms.empty())
      detail::require(letters.size() == terms.front().letters.size(),
                      "parse_hamiltonian: " + where + ": inconsistent lengths (" +
                          std::to_string(letters.size()) + " vs " +
                          std::to_string(terms.front().letters.size()) + ")");
    terms.push_back({coeff, std::move(letters)});
  }
  detail::require(!terms.empty(), "parse_hamiltonian: no terms");
  const std::size_t n = terms.front().letters.size();
  return Hamiltonian(n, std::move(terms));
}

inline Hamiltonian parse_hamiltonian(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_hamiltonian(in);
}

inline std::string format_hamiltonian(const Hamiltonian& h) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& t : h.terms()) out << t.coefficient << ' ' << t.letters << '\n';
  return out.str();
}

/// out = H v, accumulated term by term in file order. `out` is overwritten.
inline void hamiltonian_matvec(const Hamiltonian& h, std::span<const Complex> v, std::span<Complex> out) {
  const std::size_t dim = std::size_t{1} << h.n_qubits();
  detail::require(v.size() == dim && out.size() == dim,
                  "hamiltonian_matvec: dimension mismatch (" + std::to_string(v.size()) +
                      " vs 2^" + std::to_string(h.n_qubits()) + ")");
  std::fill(out.begin(), out.end(), Complex{0.0, 0.0});
  for (const auto& t : h.terms()) {
    const auto m = detail::pauli_masks(t.letters);
    // y_phase is one of 1, i, -1, -i: the weight is purely real or imaginary.
    const double wr = t.coefficient * m.y_phase.real();
    const double wi = t.coefficient * m.y_phase.imag();
    if (wi == 0.0) {
      for (std::size_t j = 0; j < dim; ++j) out[j ^ m.x] += (wr * detail::parity_sign(j & m.z)) * v[j];
    } else {
      for (std::size_t j = 0; j < dim; ++j) {
        const double f = wi * detail::parity_sign(j & m.z);
        out[j ^ m.x] += Complex{-f * v[j].imag(), f * v[j].real()};
      }
    }
  }
}

inline StateVector hamiltonian_matvec(const Hamiltonian& h, const StateVector& v) {
  detail::require(v.n_qubits() == h.n_qubits(), "hamiltonian_matvec: qubit count mismatch");
  StateVector out(v.n_qubits());
  hamiltonian_matvec(h, v.amplitudes(), out.amplitudes());
  return out;
}

/// Complex <psi|H|psi> before the Hermiticity check.
inline Complex expectation_complex(const StateVector& psi, const Hamiltonian& h) {
  detail::require(psi.n_qubits() == h.n_qubits(),
                  "expectation: state has " + std::to_string(psi.n_qubits()) +
                      " qubits, Hamiltonian has " + std::to_string(h.n_qubits()));
  const auto a = psi.amplitudes();
  const std::size_t dim = a.size();
  Complex total{0.0, 0.0};
  for (const auto& t : h.terms()) {
    const auto m = detail::pauli_masks(t.letters);
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const Complex l = a[j ^ m.x];
      const Complex r = detail::parity_sign(j & m.z) * a[j];
      re += l.real() * r.real() + l.imag() * r.imag();
      im += l.real() * r.imag() - l.imag() * r.real();
    }
    total += t.coefficient * detail::mul(m.y_phase, Complex{re, im});
  }
  return total;
}

/// Real energy <psi|H|psi>. Throws NumericalError if the imaginary residual
/// exceeds 1e-8, which only a corrupted operator or state can produce.
inline double expectation(const StateVector& psi, const Hamiltonian& h) {
  const Complex e = expectation_complex(psi, h);
  if (!(std::abs(e.imag()) <= 1e-8))
    throw NumericalError("expectation: imaginary residual " + std::to_string(e.imag()) +
                         " (non-Hermitian input?)");
  return e.real();
}

}  // namespace vqinit
