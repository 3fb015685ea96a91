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
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "vqinit/ansatz.hpp"
#include "vqinit/error.hpp"
#include "vqinit/hamiltonian.hpp"
#include "vqinit/init_schemes.hpp"
#include "vqinit/optimize.hpp"
#include "vqinit/oracles.hpp"
#include "vqinit/random.hpp"

namespace vqinit {

enum class Task { Heisenberg, LiH };
enum class HNormMode { OneNorm, Spectral };

struct ExperimentConfig {
  Task task = Task::Heisenberg;
  // heisenberg
  std::size_t n_qubits = 0;
  std::size_t layers = 0;
  // lih
  std::filesystem::path hamiltonian_path;
  std::optional<Hamiltonian> hamiltonian;
  std::size_t n_electrons = 2;
  std::filesystem::path wiring_path;
  std::optional<std::vector<Excitation>> wiring;

  OptimizerConfig optimizer;
  std::size_t iterations = 0;
  std::size_t rounds = 5;
  std::uint64_t base_seed = 0;
  std::vector<InitScheme> schemes;
  double gamma_sq = 0.0;
  double lambda = 1.0;
  double uniform_low = 0.0;
  double uniform_high = 2.0 * std::numbers::pi;

  NoiseSpec noise;
  HNormMode h_norm = HNormMode::OneNorm;
  /// Empty means "compute the exact ground energy".
  std::optional<double> fstar;
  bool record_wall_time = false;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_real(const std::string& key, const std::string& text) {
  auto one = [&](std::string_view t) {
    double v = 0.0;
    const char* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, v);
    require(ec == std::errc() && ptr == end && std::isfinite(v),
            "config: key '" + key + "' expects a real number, got '" + text + "'");
    return v;
  };
  // Accept simple fractions such as 1/160.
  const auto slash = text.find('/');
  if (slash == std::string::npos) return one(text);
  const std::string num = trim(std::string_view(text).substr(0, slash));
  const std::string den = trim(std::string_view(text).substr(slash + 1));
  const double d = one(den);
  require(d != 0.0, "config: key '" + key + "' divides by zero");
  return one(num) / d;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  require(ec == std::errc() && ptr == end,
          "config: key '" + key + "' expects a non-negative integer, got '" + text + "'");
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ValidationError("config: key '" + key + "' expects true/false, got '" + text + "'");
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& p, const std::string& what) {
  std::ifstream in(p, std::ios::binary);
  require(static_cast<bool>(in), "config: cannot read " + what + " '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

/// Parses a flat `key = value` document. Relative file paths resolve against
/// `base_dir`. Referenced Hamiltonian and wiring files are loaded here.
inline ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {}) {
  static const std::set<std::string> kKeys = {
      "task", "n_qubits", "layers", "hamiltonian_path", "n_electrons", "wiring_path", "optimizer", "lr",
      "iterations", "rounds", "base_seed", "schemes", "gamma_sq", "lambda", "uniform_low", "uniform_high",
      "noise", "noise_variance", "noise_prefactor", "h_norm", "fstar", "adam_beta1", "adam_beta2",
      "adam_epsilon", "record_wall_time"};

  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string where = "config: line " + std::to_string(line_no);
    detail::require(eq != std::string::npos, where + ": expected 'key = value'");
    const auto key = detail::trim(std::string_view(t).substr(0, eq));
    const auto value = detail::trim(std::string_view(t).substr(eq + 1));
    detail::require(kKeys.count(key) == 1, where + ": unknown key '" + key + "'");
    detail::require(!value.empty(), where + ": empty value for '" + key + "'");
    detail::require(kv.emplace(key, value).second, where + ": duplicate key '" + key + "'");
  }

  auto required = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    detail::require(it != kv.end(), "config: missing required key '" + key + "'");
    return it->second;
  };
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };

  ExperimentConfig cfg;
  const auto& task = required("task");
  if (task == "heisenberg") {
    cfg.task = Task::Heisenberg;
    cfg.n_qubits = detail::parse_uint("n_qubits", required("n_qubits"));
    cfg.layers = detail::parse_uint("layers", required("layers"));
    detail::require(cfg.n_qubits >= 2 && cfg.n_qubits <= 20, "config: n_qubits must be in [2, 20]");
    detail::require(cfg.layers >= 1, "config: layers must be at least 1");
    for (const char* k : {"hamiltonian_path", "n_electrons", "wiring_path"})
      detail::require(!kv.count(k), std::string("config: key '") + k + "' only applies to task = lih");
  } else if (task == "lih") {
    cfg.task = Task::LiH;
    cfg.hamiltonian_path = resolve(required("hamiltonian_path"));
    cfg.hamiltonian = parse_hamiltonian(detail::read_file(cfg.hamiltonian_path, "hamiltonian_path"));
    cfg.n_qubits = cfg.hamiltonian->n_qubits();
    if (auto v = get("n_electrons")) cfg.n_electrons = detail::parse_uint("n_electrons", *v);
    if (auto v = get("wiring_path")) {
      cfg.wiring_path = resolve(*v);
      std::istringstream w(detail::read_file(cfg.wiring_path, "wiring_path"));
      cfg.wiring = parse_givens_wiring(w);
    }
    for (const char* k : {"n_qubits", "layers"})
      detail::require(!kv.count(k), std::string("config: key '") + k + "' only applies to task = heisenberg");
  } else {
    throw ValidationError("config: task must be 'heisenberg' or 'lih', got '" + task + "'");
  }

  const auto& opt = required("optimizer");
  if (opt == "gd") cfg.optimizer.kind = OptimizerKind::GD;
  else if (opt == "adam") cfg.optimizer.kind = OptimizerKind::Adam;
  else throw ValidationError("config: optimizer must be 'gd' or 'adam', got '" + opt + "'");
  cfg.optimizer.lr = detail::parse_real("lr", required("lr"));
  detail::require(cfg.optimizer.lr > 0.0, "config: lr must be positive");
  if (auto v = get("adam_beta1")) cfg.optimizer.beta1 = detail::parse_real("adam_beta1", *v);
  if (auto v = get("adam_beta2")) cfg.optimizer.beta2 = detail::parse_real("adam_beta2", *v);
  if (auto v = get("adam_epsilon")) cfg.optimizer.epsilon = detail::parse_real("adam_epsilon", *v);
  detail::require(cfg.optimizer.beta1 >= 0.0 && cfg.optimizer.beta1 < 1.0 && cfg.optimizer.beta2 >= 0.0 &&
                      cfg.optimizer.beta2 < 1.0 && cfg.optimizer.epsilon > 0.0,
                  "config: Adam needs beta1, beta2 in [0, 1) and epsilon > 0");

  cfg.iterations = detail::parse_uint("iterations", required("iterations"));
  detail::require(cfg.iterations >= 1, "config: iterations must be at least 1");
  if (auto v = get("rounds")) cfg.rounds = detail::parse_uint("rounds", *v);
  detail::require(cfg.rounds >= 1, "config: rounds must be at least 1");
  if (auto v = get("base_seed")) cfg.base_seed = detail::parse_uint("base_seed", *v);

  for (const auto& name : detail::split_list(required("schemes"))) {
    const auto s = parse_scheme(name);
    detail::require(std::find(cfg.schemes.begin(), cfg.schemes.end(), s) == cfg.schemes.end(),
                    "config: scheme '" + name + "' listed twice");
    cfg.schemes.push_back(s);
  }
  detail::require(!cfg.schemes.empty(), "config: schemes list is empty");

  cfg.gamma_sq = detail::parse_real("gamma_sq", required("gamma_sq"));
  detail::require(cfg.gamma_sq > 0.0, "config: gamma_sq must be positive");
  if (auto v = get("lambda")) cfg.lambda = detail::parse_real("lambda", *v);
  detail::require(cfg.lambda > 0.0, "config: lambda must be positive");
  if (auto v = get("uniform_low")) cfg.uniform_low = detail::parse_real("uniform_low", *v);
  if (auto v = get("uniform_high")) cfg.uniform_high = detail::parse_real("uniform_high", *v);
  detail::require(cfg.uniform_high > cfg.uniform_low, "config: uniform_high must exceed uniform_low");

  const std::string noise = get("noise").value_or("none");
  if (noise == "none") cfg.noise.mode = NoiseMode::None;
  else if (noise == "constant") cfg.noise.mode = NoiseMode::Constant;
  else if (noise == "adaptive") cfg.noise.mode = NoiseMode::Adaptive;
  else throw ValidationError("config: noise must be none, constant or adaptive, got '" + noise + "'");
  cfg.noise.variance = 0.001;
  if (auto v = get("noise_variance")) cfg.noise.variance = detail::parse_real("noise_variance", *v);
  detail::require(cfg.noise.variance >= 0.0, "config: noise_variance must be non-negative");
  if (auto v = get("noise_prefactor")) cfg.noise.adaptive_prefactor = detail::parse_real("noise_prefactor", *v);
  detail::require(cfg.noise.adaptive_prefactor > 0.0, "config: noise_prefactor must be positive");

  const std::string hn = get("h_norm").value_or("one_norm");
  if (hn == "one_norm") cfg.h_norm = HNormMode::OneNorm;
  else if (hn == "spectral") cfg.h_norm = HNormMode::Spectral;
  else throw ValidationError("config: h_norm must be one_norm or spectral, got '" + hn + "'");

  const std::string fs = get("fstar").value_or("oracle");
  if (fs != "oracle") cfg.fstar = detail::parse_real("fstar", fs);

  if (auto v = get("record_wall_time")) cfg.record_wall_time = detail::parse_bool("record_wall_time", *v);

  if (cfg.task == Task::LiH) {
    detail::require(cfg.n_electrons <= cfg.n_qubits, "config: n_electrons exceeds the qubit count");
    if (!cfg.wiring) detail::require(cfg.n_electrons < cfg.n_qubits, "config: default wiring needs n_electrons < n_qubits");
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(detail::read_file(path, "config"), path.parent_path());
}

/// Circuit, observable and input state of an experiment.
struct Problem {
  Circuit circuit;
  Hamiltonian hamiltonian;
  StateVector input;
};

inline Problem make_problem(const ExperimentConfig& cfg) {
  if (cfg.task == Task::Heisenberg)
    return {build_hea(cfg.n_qubits, cfg.layers), build_heisenberg(cfg.n_qubits), StateVector(cfg.n_qubits)};
  detail::require(cfg.hamiltonian.has_value(), "make_problem: lih task without a Hamiltonian");
  const std::size_t n = cfg.hamiltonian->n_qubits();
  Circuit c = cfg.wiring ? build_givens(n, *cfg.wiring) : build_givens_default(cfg.n_electrons, n);
  return {std::move(c), *cfg.hamiltonian, hf_state(cfg.n_electrons, n)};
}

struct JobRecord {
  std::string scheme;
  std::size_t round = 0;
  RunRecord record;

  friend bool operator==(const JobRecord&, const JobRecord&) = default;
};

struct ExperimentResult {
  double fstar = 0.0;
  double h_norm_sq = 0.0;
  /// Ordered by (scheme as listed in the config, round).
  std::vector<JobRecord> records;
};

/// Runs every (scheme, round) job. Round r samples and perturbs from the
/// stream seeded base_seed + r; orthogonal init takes row r of one bank per
/// scheme drawn from base_seed. Output is independent of `threads`.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads = 1) {
  const Problem prob = make_problem(cfg);
  const std::size_t n_params = prob.circuit.n_params();

  ExperimentResult result;
  result.fstar = cfg.fstar ? *cfg.fstar : ground_energy(prob.hamiltonian).energy;

  NoiseSpec noise = cfg.noise;
  if (noise.mode == NoiseMode::Adaptive) {
    const double norm =
        cfg.h_norm == HNormMode::OneNorm ? prob.hamiltonian.one_norm() : spectral_norm(prob.hamiltonian);
    noise.h_norm_sq = norm * norm;
  }
  result.h_norm_sq = noise.h_norm_sq;

  const double gamma = std::sqrt(cfg.gamma_sq);
  std::vector<InitSpec> specs;
  std::vector<std::optional<ParamBank>> banks;
  for (auto s : cfg.schemes) {
    InitSpec spec;
    spec.scheme = s;
    spec.gamma = gamma;
    spec.lambda = cfg.lambda;
    spec.n_times = cfg.rounds;
    spec.chunks = prob.circuit.layer_chunks();
    spec.n_qubits = prob.circuit.n_qubits();
    spec.uniform_low = cfg.uniform_low;
    spec.uniform_high = cfg.uniform_high;
    if (s == InitScheme::Orthogonal) {
      Rng bank_rng(cfg.base_seed);
      banks.emplace_back(orthogonal_bank(cfg.rounds, n_params, gamma, cfg.lambda, bank_rng));
    } else {
      banks.emplace_back(std::nullopt);
    }
    specs.push_back(std::move(spec));
  }

  const std::size_t n_jobs = specs.size() * cfg.rounds;
  result.records.resize(n_jobs);
  std::vector<std::exception_ptr> errors(n_jobs);
  TrainOptions topts;
  topts.record_wall_time = cfg.record_wall_time;

  auto run_job = [&](std::size_t job) {
    const std::size_t si = job / cfg.rounds;
    const std::size_t r = job % cfg.rounds;
    Rng rng = round_stream(cfg.base_seed, r);
    auto init = banks[si] ? banks[si]->row(r) : sample(specs[si], n_params, rng);
    result.records[job] = {std::string(scheme_name(specs[si].scheme)), r,
                           train(prob.circuit, prob.hamiltonian, prob.input, std::move(init), cfg.optimizer, noise,
                                 cfg.iterations, result.fstar, rng, topts)};
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job; (job = next.fetch_add(1)) < n_jobs;) {
      try {
        run_job(job);
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n_jobs)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return result;
}

struct AggregatePoint {
  std::size_t iteration = 0;
  double loss_mean = 0.0, loss_std = 0.0;
  double lmf_mean = 0.0, lmf_std = 0.0;
  double gradl2_mean = 0.0, gradl2_std = 0.0;
};

struct AggregateCurve {
  std::string scheme;
  std::size_t rounds = 0;
  std::vector<std::size_t> excluded_rounds;
  std::vector<AggregatePoint> points;
};

namespace detail {

// Mean and sample (n - 1) standard deviation; std is 0 for a single value.
inline std::pair<double, double> mean_std(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  if (x.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / static_cast<double>(x.size() - 1))};
}

}  // namespace detail

/// Per-scheme, per-iteration statistics over non-diverged rounds. Schemes
/// appear in order of first occurrence in `records`.
inline std::vector<AggregateCurve> summarize(const std::vector<JobRecord>& records) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const JobRecord*>> by_scheme;
  for (const auto& r : records) {
    if (!by_scheme.count(r.scheme)) order.push_back(r.scheme);
    by_scheme[r.scheme].push_back(&r);
  }
  std::vector<AggregateCurve> out;
  for (const auto& name : order) {
    AggregateCurve curve;
    curve.scheme = name;
    std::vector<const RunRecord*> kept;
    for (const auto* jr : by_scheme[name]) {
      if (jr->record.diverged) curve.excluded_rounds.push_back(jr->round);
      else kept.push_back(&jr->record);
    }
    curve.rounds = kept.size();
    if (!kept.empty()) {
      const std::size_t len = kept.front()->rows.size();
      for (const auto* k : kept)
        detail::require(k->rows.size() == len, "summarize: scheme '" + name + "' has rounds of unequal length");
      std::vector<double> a(kept.size()), b(kept.size()), c(kept.size());
      for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t r = 0; r < kept.size(); ++r) {
          const auto& row = kept[r]->rows[i];
          detail::require(row.iteration == kept.front()->rows[i].iteration,
                          "summarize: scheme '" + name + "' has misaligned iterations");
          a[r] = row.loss;
          b[r] = row.loss_minus_fstar;
          c[r] = row.grad_l2;
        }
        AggregatePoint p;
        p.iteration = kept.front()->rows[i].iteration;
        std::tie(p.loss_mean, p.loss_std) = detail::mean_std(a);
        std::tie(p.lmf_mean, p.lmf_std) = detail::mean_std(b);
        std::tie(p.gradl2_mean, p.gradl2_std) = detail::mean_std(c);
        curve.points.push_back(p);
      }
    }
    out.push_back(std::move(curve));
  }
  return out;
}

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline constexpr std::string_view kRawCsvHeader =
    "scheme,round,seed,iteration,loss,loss_minus_fstar,grad_l2,wall_ms";
inline constexpr std::string_view kAggregateCsvHeader =
    "scheme,iteration,loss_mean,loss_std,lmf_mean,lmf_std,gradl2_mean,gradl2_std";
inline constexpr std::string_view kRunsCsvHeader = "scheme,round,seed,diverged,rows,final_loss";

inline void write_raw_csv(const std::vector<JobRecord>& records, std::ostream& out) {
  out << kRawCsvHeader << '\n';
  for (const auto& jr : records)
    for (const auto& row : jr.record.rows)
      out << jr.scheme << ',' << jr.round << ',' << jr.record.seed << ',' << row.iteration << ','
          << detail::fmt17(row.loss) << ',' << detail::fmt17(row.loss_minus_fstar) << ','
          << detail::fmt17(row.grad_l2) << ',' << detail::fmt17(row.wall_ms) << '\n';
}

inline void write_aggregate_csv(const std::vector<AggregateCurve>& curves, std::ostream& out) {
  out << kAggregateCsvHeader << '\n';
  for (const auto& c : curves)
    for (const auto& p : c.points)
      out << c.scheme << ',' << p.iteration << ',' << detail::fmt17(p.loss_mean) << ','
          << detail::fmt17(p.loss_std) << ',' << detail::fmt17(p.lmf_mean) << ',' << detail::fmt17(p.lmf_std)
          << ',' << detail::fmt17(p.gradl2_mean) << ',' << detail::fmt17(p.gradl2_std) << '\n';
}

/// One line per run; carries the divergence flag the raw file omits.
inline void write_runs_csv(const std::vector<JobRecord>& records, std::ostream& out) {
  out << kRunsCsvHeader << '\n';
  for (const auto& jr : records) {
    const double final_loss = jr.record.rows.empty() ? std::nan("") : jr.record.rows.back().loss;
    out << jr.scheme << ',' << jr.round << ',' << jr.record.seed << ',' << (jr.record.diverged ? 1 : 0) << ','
        << jr.record.rows.size() << ',' << detail::fmt17(final_loss) << '\n';
  }
}

/// Reads a raw CSV back into records; rows group into one record per
/// consecutive (scheme, round). Divergence flags are not in this file.
inline std::vector<JobRecord> read_raw_csv(std::istream& in) {
  std::string line;
  detail::require(static_cast<bool>(std::getline(in, line)), "read_raw_csv: missing header");
  detail::require(detail::trim(line) == kRawCsvHeader, "read_raw_csv: unexpected header '" + line + "'");
  std::vector<JobRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(detail::trim(cell));
    const std::string where = "read_raw_csv: line " + std::to_string(line_no);
    detail::require(f.size() == 8, where + ": expected 8 fields");
    const auto round = detail::parse_uint("round", f[1]);
    const auto seed = detail::parse_uint("seed", f[2]);
    RunRow row{detail::parse_uint("iteration", f[3]), detail::parse_real("loss", f[4]),
               detail::parse_real("loss_minus_fstar", f[5]), detail::parse_real("grad_l2", f[6]),
               detail::parse_real("wall_ms", f[7])};
    if (out.empty() || out.back().scheme != f[0] || out.back().round != round) {
      out.push_back({f[0], round, RunRecord{seed, {}, false}});
    }
    out.back().record.rows.push_back(row);
  }
  return out;
}

/// Writes raw.csv, aggregate.csv and runs.csv into `dir`.
inline void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    detail::require(static_cast<bool>(f), "write_outputs: cannot write '" + (dir / name).string() + "'");
    return f;
  };
  {
    auto f = open("raw.csv");
    write_raw_csv(result.records, f);
  }
  {
    auto f = open("aggregate.csv");
    write_aggregate_csv(summarize(result.records), f);
  }
  {
    auto f = open("runs.csv");
    write_runs_csv(result.records, f);
  }
}

}  // namespace vqinit
