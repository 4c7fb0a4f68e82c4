// Copyright 2026 The lindblad-mitigation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LMIT_TOOLS_CLI_HPP
#define LMIT_TOOLS_CLI_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lmit/lmit.hpp"

namespace lmit::cli {

using json = nlohmann::json;

/// Machine-readable failure record, one JSON object per line on `err`.
inline int report_error(std::ostream& err, const std::string& kind, const std::string& message,
                        int code = 2) {
  err << json{{"error", kind}, {"message", message}}.dump() << '\n';
  return code;
}

namespace detail {

inline Vector product_state(const std::string& spec, std::size_t qubits) {
  if (spec.size() != qubits)
    throw ConfigError("initial_state '" + spec + "' must have one character per qubit");
  Vector psi = Vector::Ones(1);
  const double r = 1.0 / std::sqrt(2.0);
  for (char ch : spec) {
    Vector q(2);
    switch (ch) {
      case '0': q << 1.0, 0.0; break;
      case '1': q << 0.0, 1.0; break;
      case '+': q << r, r; break;
      case '-': q << r, -r; break;
      default: throw ConfigError("initial_state: use characters 0, 1, + or -");
    }
    Vector next(psi.size() * 2);
    for (Eigen::Index i = 0; i < psi.size(); ++i) next.segment(2 * i, 2) = psi(i) * q;
    psi = next;
  }
  return psi;
}

/// Shared description of a small experiment used by `sample` and `overhead`.
struct Experiment {
  NoiseModel noise;
  Operator hamiltonian;
  Operator observable;
  DensityMatrix rho0;
  Variant variant = Variant::SingleQubit;
  std::vector<double> times{1.0};
  std::uint64_t shots = 100'000;
  std::uint64_t seed = 1;
  double epsilon = 0.1;
  double delta = 0.05;
  std::size_t repetitions = 1;
};

inline Experiment parse_experiment(const json& doc) {
  const std::string w = "experiment";
  json_util::check_keys(doc, {"qubits", "hamiltonian", "noise", "ancilla_noise", "variant",
                              "observable", "initial_state", "times", "shots", "seed", "epsilon",
                              "delta", "repetitions"},
                        w);
  Experiment e;
  e.noise = io::parse_noise(doc, w);
  const std::size_t q = e.noise.system_layout.size();
  e.hamiltonian = doc.contains("hamiltonian") ? io::pauli_sum(doc.at("hamiltonian"), q, w + ".hamiltonian")
                                              : Operator::zero(e.noise.system_layout);
  e.observable = io::pauli_sum(json_util::required<json>(doc, "observable", w), q, w + ".observable");
  std::string init(q, '0');
  json_util::read(doc, "initial_state", init, w);
  e.rho0 = DensityMatrix::pure(product_state(init, q), e.noise.system_layout);
  std::string variant = "single-qubit";
  json_util::read(doc, "variant", variant, w);
  try {
    e.variant = parse_variant(variant);
  } catch (const ValueError& ex) {
    throw ConfigError(w + ".variant: " + ex.what());
  }
  json_util::read(doc, "times", e.times, w);
  json_util::read(doc, "shots", e.shots, w);
  json_util::read(doc, "seed", e.seed, w);
  json_util::read(doc, "epsilon", e.epsilon, w);
  json_util::read(doc, "delta", e.delta, w);
  json_util::read(doc, "repetitions", e.repetitions, w);
  if (e.times.empty()) throw ConfigError(w + ".times: must be nonempty");
  for (double t : e.times)
    if (!(t >= 0.0)) throw ConfigError(w + ".times: must be nonnegative");
  if (e.shots < 2) throw ConfigError(w + ".shots: need at least two shots");
  if (e.repetitions < 1) throw ConfigError(w + ".repetitions: must be positive");
  return e;
}

inline IntegratorConfig tight_integrator() {
  IntegratorConfig cfg;
  cfg.method = IntegratorMethod::RK45;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-12;
  return cfg;
}

/// Random Hermitian matrix with spectral norm `norm`.
inline Matrix random_hermitian(std::size_t d, double norm, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (Eigen::Index r = 0; r < a.rows(); ++r) a(r, c) = cplx{g(rng), g(rng)};
  Matrix h = 0.5 * (a + a.adjoint());
  const double n = lmit::detail::eigh(h, false).eigenvalues().cwiseAbs().maxCoeff();
  return h * (norm / n);
}

inline Matrix random_density(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (Eigen::Index r = 0; r < a.rows(); ++r) a(r, c) = cplx{g(rng), g(rng)};
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace detail

/// Entry point of the `lmit` tool. Returns the process exit code.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Lindblad-based error mitigation toolkit"};
  app.require_subcommand(1);

  std::string config, out_dir = "results", noise_file, variant_name_opt, out_file;
  std::optional<std::uint64_t> seed, shots;
  bool exact = false, plot = false;
  std::size_t qubits = 2, trials = 20;
  double tol = 1e-5;

  auto* run = app.add_subcommand("run-scenario", "Run a scenario from a JSON config");
  run->add_option("--config", config, "Scenario config file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the sampling seed");
  run->add_option("--shots", shots, "Override the shot count");
  run->add_flag("--exact", exact, "Skip shot sampling");
  run->add_flag("--plot", plot, "Also write SVG plots");

  auto* plan_cmd = app.add_subcommand("build-plan", "Serialize the mitigation plan for a noise model");
  plan_cmd->add_option("--noise", noise_file, "Noise model file")->required();
  plan_cmd->add_option("--variant", variant_name_opt, "Protocol variant");
  plan_cmd->add_option("--out", out_file, "Write the plan here instead of stdout");

  auto* verify = app.add_subcommand("verify-protocol", "Exact-cancellation check on random instances");
  verify->add_option("--qubits", qubits, "System qubits (1-3)");
  verify->add_option("--trials", trials, "Random instances");
  verify->add_option("--seed", seed, "Instance seed");
  verify->add_option("--variant", variant_name_opt, "Protocol variant");
  verify->add_option("--tol", tol, "Pass threshold on the largest deviation");

  auto* sample = app.add_subcommand("sample", "Shot-sampled mitigated estimates");
  sample->add_option("--config", config, "Experiment file")->required();
  sample->add_option("--out", out_dir, "Output directory");
  sample->add_option("--seed", seed, "Override the sampling seed");
  sample->add_option("--shots", shots, "Override the shot count");

  auto* overhead = app.add_subcommand("overhead", "Empirical sampling overhead and shot budget");
  overhead->add_option("--config", config, "Experiment file")->required();
  overhead->add_option("--out", out_dir, "Output directory");
  overhead->add_option("--seed", seed, "Override the sampling seed");
  overhead->add_option("--shots", shots, "Override the shot count");

  auto* unravel = app.add_subcommand("unravel", "Stochastic-Hamiltonian convergence table");
  unravel->add_option("--config", config, "Unraveling file")->required();
  unravel->add_option("--out", out_dir, "Output directory");
  unravel->add_option("--seed", seed, "Override the trajectory seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    return report_error(err, "usage", e.what());
  }

  auto ensure_dir = [&](const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
      throw IoError("cannot create output directory '" + dir.string() + "'");
  };

  try {
    if (*run) {
      auto cfg = parse_scenario_config(json_util::load_file(config));
      std::visit(
          [&](auto& c) {
            if (seed) c.seed = *seed;
            if (shots) c.shots = *shots;
          },
          cfg);
      std::visit([](const auto& c) { c.validate(); }, cfg);
      const auto res = run_scenario(cfg, out_dir, RunOptions{exact}, plot);
      out << res.summary.dump() << '\n';
      return 0;
    }

    if (*plan_cmd) {
      const json doc = json_util::load_file(noise_file);
      json_util::check_keys(doc, {"qubits", "layout", "noise", "ancilla_noise", "variant"}, "noise");
      const NoiseModel noise = io::parse_noise(doc);
      std::string vname = variant_name_opt;
      if (vname.empty()) {
        vname = "single-qubit";
        json_util::read(doc, "variant", vname, "noise");
      }
      Variant v;
      try {
        v = parse_variant(vname);
      } catch (const ValueError& e) {
        throw ConfigError(std::string("variant: ") + e.what());
      }
      const std::string text = io::plan_to_json(build_plan(v, noise)).dump(2);
      if (out_file.empty()) {
        out << text << '\n';
      } else {
        std::ofstream f(out_file);
        if (!f) throw IoError("cannot open '" + out_file + "' for writing");
        f << text << '\n';
        if (!f) throw IoError("write to '" + out_file + "' failed");
      }
      return 0;
    }

    if (*verify) {
      if (qubits < 1 || qubits > 3) throw ConfigError("--qubits must be between 1 and 3");
      if (trials < 1) throw ConfigError("--trials must be positive");
      const Variant v = variant_name_opt.empty() ? Variant::SingleQubit : parse_variant(variant_name_opt);
      std::mt19937_64 rng(seed.value_or(1));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const Layout layout(qubits, 2);
      const std::size_t d = layout_dim(layout);
      double worst = 0.0;
      for (std::size_t trial = 0; trial < trials; ++trial) {
        const Operator h(detail::random_hermitian(d, 5.0 * unit(rng), rng), layout);
        NoiseModel noise{layout, {}, {}};
        const std::size_t k = 1 + static_cast<std::size_t>(unit(rng) * 3.0) % 3;
        for (std::size_t j = 0; j < k; ++j) {
          Matrix l(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
          if (v == Variant::SimplifiedPauli) {
            // Pauli strings keep sum L^dagger L proportional to the identity.
            std::string p;
            for (std::size_t q = 0; q < qubits; ++q) p += "IXYZ"[static_cast<std::size_t>(unit(rng) * 4.0) % 4];
            l = io::pauli_string(p, qubits).matrix();
          } else {
            std::normal_distribution<double> g;
            for (Eigen::Index c = 0; c < l.cols(); ++c)
              for (Eigen::Index r = 0; r < l.rows(); ++r) l(r, c) = cplx{g(rng), g(rng)};
            l /= std::sqrt(lmit::hermitian_lambda_max(Operator(l.adjoint() * l, layout)));
          }
          noise.system_jumps.push_back({Operator(l, layout), 0.5 * unit(rng), std::nullopt});
        }
        const DensityMatrix rho = DensityMatrix::checked(Operator(detail::random_density(d, rng), layout));
        const Operator a(detail::random_hermitian(d, 1.0, rng), layout);
        const MitigationPlan plan = build_plan(v, noise);
        const Lindbladian joint = joint_lindbladian(h, noise, plan, true);
        DensityMatrix w = initial_joint_state(rho, plan);
        double t_prev = 0.0;
        for (double t : {0.5, 1.0, 2.0}) {
          w = evolve(joint, w, t - t_prev, detail::tight_integrator(), nullptr, t_prev);
          t_prev = t;
          const Matrix u = unitary_propagator(h, t).matrix();
          const double ideal = trace_product(a.matrix(), u * rho.matrix() * u.adjoint()).real();
          worst = std::max(worst, std::abs(mitigated_expectation(w, a, plan, t) - ideal));
        }
      }
      const bool pass = worst <= tol;
      out << json{{"variant", std::string(variant_name(v))},
                  {"qubits", qubits},
                  {"trials", trials},
                  {"max_deviation", worst},
                  {"tolerance", tol},
                  {"passed", pass}}
                 .dump()
          << '\n';
      return pass ? 0 : 1;
    }

    if (*sample || *overhead) {
      auto e = detail::parse_experiment(json_util::load_file(config));
      if (seed) e.seed = *seed;
      if (shots) e.shots = *shots;
      ensure_dir(out_dir);
      const MitigationPlan plan = build_plan(e.variant, e.noise);
      if (!plan.correctable) throw ValueError("declared ancilla noise is not correctable");
      const Lindbladian joint = joint_lindbladian(e.hamiltonian, e.noise, plan, true);
      const auto w_series =
          evolve_series(joint, initial_joint_state(e.rho0, plan), e.times, detail::tight_integrator());
      const auto spec = MeasurementSpec::from_observable(joint_observable(e.observable, plan));
      if (*sample) {
        std::vector<EstimateRecord> records;
        for (std::size_t i = 0; i < e.times.size(); ++i) {
          const RawStats s = sample_statistics(w_series[i].op(), spec, e.shots, e.seed, i);
          records.push_back({e.times[i], mitigated_estimate(s, plan.prefactor(e.times[i])), e.seed});
        }
        const auto path = std::filesystem::path(out_dir) / "estimates.csv";
        write_estimates_csv(path, records);
        out << json{{"files", {path.string()}}, {"a", plan.a}, {"delta", plan.delta}}.dump() << '\n';
        return 0;
      }
      const auto noisy_series = evolve_series(noisy_lindbladian(e.hamiltonian, e.noise), e.rho0,
                                              e.times, detail::tight_integrator());
      const auto spec_noisy = MeasurementSpec::from_observable(e.observable);
      const auto path = std::filesystem::path(out_dir) / "overhead.csv";
      CsvWriter csv(path, {"t", "a_eff", "theoretical", "empirical", "required_shots"});
      for (std::size_t i = 0; i < e.times.size(); ++i) {
        double ratio = 0.0;
        for (std::size_t r = 0; r < e.repetitions; ++r)
          ratio += empirical_overhead(w_series[i].op(), spec, plan.prefactor(e.times[i]),
                                      noisy_series[i].op(), spec_noisy, e.shots,
                                      splitmix64(e.seed + 977 * r + i));
        ratio /= static_cast<double>(e.repetitions);
        const double a_eff = plan.a + plan.delta;
        csv.row({e.times[i], a_eff, std::exp(4.0 * a_eff * e.times[i]), ratio,
                 static_cast<long long>(required_shots(e.epsilon, e.delta, a_eff, e.times[i],
                                                       spec.outcome_range()))});
      }
      out << json{{"files", {path.string()}}}.dump() << '\n';
      return 0;
    }

    if (*unravel) {
      const json doc = json_util::load_file(config);
      const std::string w = "unravel";
      json_util::check_keys(doc, {"qubits", "hamiltonian", "couplings", "initial_state", "t",
                                  "dt_grid", "m_grid", "repeats", "seed", "bias_threshold"},
                            w);
      const auto q = json_util::required<std::size_t>(doc, "qubits", w);
      if (q < 1 || q > 6) throw ConfigError(w + ".qubits: must be in [1, 6]");
      const Layout layout(q, 2);
      const Operator h = doc.contains("hamiltonian")
                             ? io::pauli_sum(doc.at("hamiltonian"), q, w + ".hamiltonian")
                             : Operator::zero(layout);
      StochasticRun templ;
      const json couplings = json_util::required<json>(doc, "couplings", w);
      if (!couplings.is_array() || couplings.empty())
        throw ConfigError(w + ".couplings: expected a nonempty list");
      std::vector<Operator> amps;
      for (std::size_t i = 0; i < couplings.size(); ++i) {
        const std::string cw = w + ".couplings[" + std::to_string(i) + "]";
        json_util::check_keys(couplings[i], {"pauli", "rate"}, cw);
        const Operator g = io::pauli_string(json_util::required<std::string>(couplings[i], "pauli", cw), q);
        const double rate = json_util::required<double>(couplings[i], "rate", cw);
        templ.couplings.push_back(g);
        templ.rates.push_back(rate);
        amps.push_back(std::sqrt(rate) * g);
      }
      std::string init(q, '+');
      json_util::read(doc, "initial_state", init, w);
      const DensityMatrix rho0 = DensityMatrix::pure(detail::product_state(init, q), layout);
      const double t = json_util::required<double>(doc, "t", w);
      const auto dts = json_util::required<std::vector<double>>(doc, "dt_grid", w);
      const auto ms = json_util::required<std::vector<std::size_t>>(doc, "m_grid", w);
      ConvergenceOptions opt;
      json_util::read(doc, "repeats", opt.repeats, w);
      json_util::read(doc, "bias_threshold", opt.bias_threshold, w);
      templ.seed = 1;
      json_util::read(doc, "seed", templ.seed, w);
      if (seed) templ.seed = *seed;
      ensure_dir(out_dir);
      const DensityMatrix reference =
          evolve(Lindbladian(h, amps), rho0, t, detail::tight_integrator());
      const auto report = convergence_report(h, templ, rho0, t, reference, dts, ms, opt);
      const auto path = std::filesystem::path(out_dir) / "convergence.csv";
      write_convergence_csv(path, report);
      json flagged = json::array();
      for (const auto& r : report.rows)
        if (r.bias_flag) flagged.push_back({{"dt", r.dt}, {"M", r.trajectories}});
      out << json{{"files", {path.string()}},
                  {"mc_slope", std::isnan(report.mc_slope) ? json(nullptr) : json(report.mc_slope)},
                  {"bias_flagged", flagged}}
                 .dump()
          << '\n';
      return 0;
    }
  } catch (const Error& e) {
    return report_error(err, e.kind(), e.what());
  } catch (const std::exception& e) {
    return report_error(err, "internal", e.what(), 3);
  }
  return report_error(err, "usage", "no subcommand given");
}

}  // namespace lmit::cli

#endif  // LMIT_TOOLS_CLI_HPP
