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

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "vqinit/vqinit.hpp"

namespace vqinit::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kNumerical = 2 };

namespace detail {

inline Hamiltonian load_hamiltonian(const std::string& spec) {
  constexpr std::string_view prefix = "heisenberg:";
  if (spec.rfind(prefix, 0) == 0) {
    const auto n = vqinit::detail::parse_uint("hamiltonian", spec.substr(prefix.size()));
    return build_heisenberg(n);
  }
  return parse_hamiltonian(vqinit::detail::read_file(spec, "hamiltonian"));
}

inline void print_row(std::ostream& out, std::span<const double> v) {
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << vqinit::detail::fmt17(v[i]);
  out << '\n';
}

inline double max_dev(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace detail

/// Entry point of the `vqinit` tool. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Initialization-scheme experiments for variational quantum circuits", "vqinit"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  unsigned threads = 1;
  auto* run = app.add_subcommand("run", "Run every (scheme, round) job of a config and write CSVs");
  run->add_option("--config", config_path, "Experiment config file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--threads", threads, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);

  std::string ham_spec;
  auto* ge = app.add_subcommand("ground-energy", "Print the exact ground energy of a Hamiltonian");
  ge->add_option("--hamiltonian", ham_spec, "Pauli-sum file or heisenberg:N")->required();

  std::string scheme;
  std::size_t n_params = 0, n_times = 1, n_qubits = 0, chunk_size = 0;
  std::string gamma_sq_text;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  auto* si = app.add_subcommand("sample-init", "Print initial parameters drawn by a scheme");
  si->add_option("--scheme", scheme, "Scheme name")->required();
  si->add_option("--n-params", n_params, "Parameter count")->required()->check(CLI::PositiveNumber);
  si->add_option("--gamma-sq", gamma_sq_text, "Scale gamma^2, e.g. 1/160")->required();
  si->add_option("--seed", seed, "Random seed")->required();
  si->add_option("--n-times", n_times, "Rows of the orthogonal bank")->check(CLI::PositiveNumber);
  si->add_option("--lambda", lambda, "Orthonormal rate");
  si->add_option("--n-qubits", n_qubits, "Qubit count for xavier_chunked");
  si->add_option("--chunk-size", chunk_size, "Chunk length for xavier_chunked (default: one chunk)");

  std::size_t gc_qubits = 0, gc_layers = 0;
  std::uint64_t gc_seed = 0;
  auto* gc = app.add_subcommand("gradcheck", "Compare adjoint gradients with the finite-difference and shift oracles");
  gc->add_option("--qubits", gc_qubits, "Qubit count")->required();
  gc->add_option("--layers", gc_layers, "Layer count")->required();
  gc->add_option("--seed", gc_seed, "Seed for the random parameters")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  try {
    if (*run) {
      const auto cfg = load_config(config_path);
      const auto result = run_experiment(cfg, threads);
      write_outputs(result, out_dir);
      out << "fstar " << vqinit::detail::fmt17(result.fstar) << '\n';
      for (const auto& c : summarize(result.records)) {
        out << c.scheme << " rounds=" << c.rounds << " excluded=" << c.excluded_rounds.size();
        if (!c.points.empty())
          out << " loss[0]=" << vqinit::detail::fmt17(c.points.front().loss_mean)
              << " loss[final]=" << vqinit::detail::fmt17(c.points.back().loss_mean);
        out << '\n';
      }
    } else if (*ge) {
      const auto r = ground_energy(detail::load_hamiltonian(ham_spec));
      out << "energy " << vqinit::detail::fmt17(r.energy) << '\n'
          << "method " << (r.method == EigenMethod::Dense ? "dense" : "lanczos") << '\n'
          << "residual " << vqinit::detail::fmt17(r.residual) << '\n';
    } else if (*si) {
      InitSpec spec;
      spec.scheme = parse_scheme(scheme);
      const double gamma_sq = vqinit::detail::parse_real("gamma-sq", gamma_sq_text);
      vqinit::detail::require(gamma_sq > 0.0, "sample-init: --gamma-sq must be positive");
      spec.gamma = std::sqrt(gamma_sq);
      spec.lambda = lambda;
      spec.n_times = n_times;
      spec.n_qubits = n_qubits;
      Rng rng(seed);
      if (spec.scheme == InitScheme::Orthogonal) {
        const auto bank = orthogonal_bank(n_times, n_params, spec.gamma, lambda, rng);
        for (std::size_t r = 0; r < bank.n_times(); ++r) detail::print_row(out, bank.row(r));
      } else {
        if (spec.scheme == InitScheme::XavierChunked) {
          const std::size_t len = chunk_size == 0 ? n_params : chunk_size;
          for (std::size_t s = 0; s < n_params; s += len) spec.chunks.push_back({s, std::min(len, n_params - s)});
        }
        detail::print_row(out, sample(spec, n_params, rng));
      }
    } else if (*gc) {
      const auto c = build_hea(gc_qubits, gc_layers);
      const auto h = build_heisenberg(gc_qubits);
      const StateVector in(gc_qubits);
      Rng rng(gc_seed);
      std::vector<double> p(c.n_params());
      for (auto& x : p) x = rng.uniform(-std::numbers::pi, std::numbers::pi);
      const auto adj = gradient_adjoint(c, h, p, in);
      const double fd = detail::max_dev(adj, gradient_fd(c, h, p, in));
      const double ps = detail::max_dev(adj, gradient_paramshift(c, h, p, in));
      out << "params " << c.n_params() << '\n'
          << "max_dev_fd " << vqinit::detail::fmt17(fd) << '\n'
          << "max_dev_paramshift " << vqinit::detail::fmt17(ps) << '\n';
      if (!(fd < 1e-6 && ps < 1e-9)) {
        err << "error: gradient oracles disagree beyond tolerance (fd 1e-6, shift 1e-9)\n";
        return kNumerical;
      }
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}

}  // namespace vqinit::cli
