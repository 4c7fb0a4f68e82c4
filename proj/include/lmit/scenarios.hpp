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

#ifndef LMIT_SCENARIOS_HPP
#define LMIT_SCENARIOS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "lmit/csv.hpp"
#include "lmit/json_util.hpp"
#include "lmit/lindblad.hpp"
#include "lmit/mitigation.hpp"
#include "lmit/parallel.hpp"
#include "lmit/sampling.hpp"
#include "lmit/spin_models.hpp"
#include "lmit/svg.hpp"

namespace lmit {

struct TimeGrid {
  double start = 0.0;
  double stop = 3.0;
  double step = 0.05;

  void validate() const {
    if (!(step > 0.0)) throw ConfigError("t_grid.step must be positive");
    if (!(stop >= start) || start < 0.0) throw ConfigError("t_grid needs 0 <= start <= stop");
  }

  /// start, start + step, ... up to stop (inclusive within rounding).
  [[nodiscard]] std::vector<double> points() const {
    validate();
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> t(n + 1);
    for (std::size_t i = 0; i <= n; ++i) t[i] = start + static_cast<double>(i) * step;
    return t;
  }
};

// ---------------------------------------------------------------------------------------------
// Configurations

struct HeisenbergConfig {
  double J = 2.0;
  double anisotropy = 0.2;  // Jx = J (1 + anisotropy), Jy = J (1 - anisotropy), Jz = J
  double h = 0.1;
  double gamma_z = 0.03;
  double gamma_minus = 0.03;
  bool ancilla_noise = true;
  TimeGrid t_grid{0.0, 3.0, 0.05};
  std::uint64_t shots = 1'000'000;
  std::uint64_t seed = 7;
  IntegratorConfig integrator{};

  [[nodiscard]] double jx() const { return J * (1.0 + anisotropy); }
  [[nodiscard]] double jy() const { return J * (1.0 - anisotropy); }
  [[nodiscard]] double jz() const { return J; }

  void validate() const {
    if (gamma_z < 0.0 || gamma_minus < 0.0) throw ConfigError("heisenberg: rates must be >= 0");
    if (shots == 0) throw ConfigError("heisenberg: shots must be positive");
    t_grid.validate();
    integrator.validate();
  }
};

struct QuenchConfig {
  std::size_t n = 4;
  double J = 0.2;
  double h = 1.0;
  double gamma_z = 0.1;
  bool ancilla_noise = true;
  TimeGrid t_grid{0.0, 3.0, 0.02};
  std::uint64_t shots = 5'000'000;
  std::uint64_t seed = 7;
  IntegratorConfig integrator{};

  void validate() const {
    if (n < 2) throw ConfigError("quench: need at least 2 spins");
    if (n > 10) throw ConfigError("quench: more than 10 spins is beyond dense simulation");
    if (gamma_z < 0.0) throw ConfigError("quench: gamma_z must be >= 0");
    if (shots == 0) throw ConfigError("quench: shots must be positive");
    t_grid.validate();
    integrator.validate();
  }
};

struct FloquetConfig {
  std::size_t n = 6;
  double J = 1.0;
  double h = 1.0;
  double delta_t = 0.5;  // time under H1 within each period
  double period = 1.0;
  std::size_t cycles = 20;
  double gamma = 0.025;
  bool ancilla_noise = true;
  std::uint64_t shots = 10'000'000;
  std::uint64_t seed = 7;
  IntegratorConfig integrator{IntegratorMethod::RK4, 0.005};

  void validate() const {
    if (n < 2) throw ConfigError("floquet: need at least 2 spins");
    if (n > 8) throw ConfigError("floquet: more than 8 spins is beyond dense simulation");
    if (!(delta_t > 0.0 && delta_t < period)) throw ConfigError("floquet: need 0 < delta_t < T");
    if (cycles < 1) throw ConfigError("floquet: need at least one cycle");
    if (gamma < 0.0) throw ConfigError("floquet: gamma must be >= 0");
    if (shots == 0) throw ConfigError("floquet: shots must be positive");
    integrator.validate();
  }
};

struct RunOptions {
  bool exact_only = false;  // skip shot sampling; reported curves use exact traces
};

// ---------------------------------------------------------------------------------------------
// Shared helpers

namespace detail {

/// e^{-iHt} psi for each t, via one eigendecomposition.
inline std::vector<Vector> unitary_states(const Operator& h, const Vector& psi0,
                                          std::span<const double> times) {
  const auto es = eigh(h.matrix());
  const Vector c = es.eigenvectors().adjoint() * psi0;
  std::vector<Vector> out;
  out.reserve(times.size());
  for (double t : times) {
    Vector phased = c;
    for (Eigen::Index k = 0; k < c.size(); ++k)
      phased(k) *= std::exp(-kI * es.eigenvalues()(k) * t);
    out.push_back(es.eigenvectors() * phased);
  }
  return out;
}

inline double vector_expectation(const Operator& a, const Vector& psi) {
  return psi.dot(a.matrix() * psi).real();
}

struct SampledPoint {
  double raw_mean = 0.0;
  double stderr_raw = 0.0;
};

/// Shot estimates of Tr[O W_i] for each grid point; point i uses stream i of the seed.
inline std::vector<SampledPoint> sample_series(const std::vector<DensityMatrix>& states,
                                               const Operator& observable, std::uint64_t shots,
                                               std::uint64_t seed) {
  const auto spec = MeasurementSpec::from_observable(observable);
  std::vector<SampledPoint> out;
  out.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const RawStats s = sample_statistics(states[i].op(), spec, shots, seed, i);
    out.push_back({s.mean, std::sqrt(s.variance() / static_cast<double>(s.n))});
  }
  return out;
}

inline std::vector<double> stroboscopic_times(std::size_t cycles, double period) {
  std::vector<double> t(cycles + 1);
  for (std::size_t k = 0; k <= cycles; ++k) t[k] = static_cast<double>(k) * period;
  return t;
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Heisenberg model on the 2x2 square

struct HeisenbergResult {
  std::vector<double> t;
  std::vector<double> ideal;
  std::vector<double> noisy;
  std::vector<double> mitigated;        // shot estimate (exact when sampling is skipped)
  std::vector<double> mitigated_exact;  // exp(2(a+delta)t) Tr[(M (x) sx) W]
  std::vector<double> partial;          // exp(2at) times the same raw value as `mitigated`
  std::vector<double> stderr_;
  double a = 0.0;
  double delta = 0.0;
  bool sampled = false;
};

inline NoiseModel heisenberg_noise(const HeisenbergConfig& cfg) {
  std::vector<std::pair<Operator, double>> local{{ops::sigma_z(), cfg.gamma_z},
                                                 {ops::sigma_minus(), cfg.gamma_minus}};
  return uniform_qubit_noise(4, local,
                             cfg.ancilla_noise ? local : std::vector<std::pair<Operator, double>>{});
}

inline Operator heisenberg_hamiltonian(const HeisenbergConfig& cfg) {
  return models::heisenberg(4, models::square_2x2_edges(), cfg.jx(), cfg.jy(), cfg.jz(), cfg.h);
}

inline HeisenbergResult run_heisenberg(const HeisenbergConfig& cfg, const RunOptions& opt = {}) {
  cfg.validate();
  const Operator h = heisenberg_hamiltonian(cfg);
  const Operator m = models::magnetization(4);
  const NoiseModel noise = heisenberg_noise(cfg);
  const MitigationPlan plan = build_single_qubit_plan(noise);
  const Vector psi0 = models::all_zero_state(4);
  const DensityMatrix rho0 = DensityMatrix::pure(psi0, h.layout());

  HeisenbergResult r;
  r.t = cfg.t_grid.points();
  r.a = plan.a;
  r.delta = plan.delta;

  for (const auto& psi : detail::unitary_states(h, psi0, r.t))
    r.ideal.push_back(detail::vector_expectation(m, psi));

  std::vector<DensityMatrix> noisy_states, joint_states;
  parallel_for(2, [&](std::size_t job) {
    if (job == 0)
      noisy_states = evolve_series(noisy_lindbladian(h, noise), rho0, r.t, cfg.integrator);
    else
      joint_states = evolve_series(joint_lindbladian(h, noise, plan, true),
                                   initial_joint_state(rho0, plan), r.t, cfg.integrator);
  });

  std::vector<double> raw;
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    r.noisy.push_back(noisy_states[i].expectation(m).real());
    raw.push_back(raw_joint_expectation(joint_states[i], m, plan));
    r.mitigated_exact.push_back(plan.prefactor(r.t[i]) * raw.back());
  }

  r.sampled = !opt.exact_only;
  std::vector<double> raw_used = raw;
  std::vector<double> raw_se(r.t.size(), 0.0);
  if (r.sampled) {
    const auto pts = detail::sample_series(joint_states, joint_observable(m, plan), cfg.shots,
                                           cfg.seed);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      raw_used[i] = pts[i].raw_mean;
      raw_se[i] = pts[i].stderr_raw;
    }
  }
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    r.mitigated.push_back(plan.prefactor(r.t[i]) * raw_used[i]);
    r.partial.push_back(std::exp(2.0 * plan.a * r.t[i]) * raw_used[i]);
    r.stderr_.push_back(plan.prefactor(r.t[i]) * raw_se[i]);
  }
  return r;
}

// ---------------------------------------------------------------------------------------------
// Loschmidt echo after a quench of the periodic Ising ring

struct QuenchResult {
  std::vector<double> t;
  std::vector<double> r_ideal;
  std::vector<double> r_noisy;
  std::vector<double> r_mitigated;        // from shots (exact when sampling is skipped)
  std::vector<double> r_mitigated_exact;
  std::vector<double> stderr_;            // standard error of r_mitigated (delta method)
  std::vector<double> log_term;           // log Tr[(|psi0><psi0| (x) sx) W] (exact)
  std::vector<std::size_t> masked;        // grid indices whose echo estimate was not positive
  std::vector<std::string> diagnostics;
  double a = 0.0;
  double delta = 0.0;
  bool sampled = false;
};

inline NoiseModel quench_noise(const QuenchConfig& cfg) {
  return uniform_qubit_noise(
      cfg.n, {{ops::sigma_z(), cfg.gamma_z}},
      cfg.ancilla_noise ? std::vector<std::pair<Operator, double>>{{ops::sigma_z(), cfg.gamma_z}}
                        : std::vector<std::pair<Operator, double>>{});
}

/// -(1/N) log L, or NaN when L <= 0.
inline double rate_function(double echo, std::size_t n) {
  return echo > 0.0 ? -std::log(echo) / static_cast<double>(n)
                    : std::numeric_limits<double>::quiet_NaN();
}

inline QuenchResult run_quench(const QuenchConfig& cfg, const RunOptions& opt = {}) {
  cfg.validate();
  const std::size_t n = cfg.n;
  const Operator h = models::ising_ring(n, cfg.J, cfg.h);
  const NoiseModel noise = quench_noise(cfg);
  const MitigationPlan plan = build_single_qubit_plan(noise);
  const Vector psi0 = models::all_zero_state(n);
  const DensityMatrix rho0 = DensityMatrix::pure(psi0, h.layout());
  const Operator echo_obs = projector(psi0, h.layout());

  QuenchResult r;
  r.t = cfg.t_grid.points();
  r.a = plan.a;
  r.delta = plan.delta;

  for (const auto& psi : detail::unitary_states(h, psi0, r.t))
    r.r_ideal.push_back(rate_function(std::norm(psi0.dot(psi)), n));

  std::vector<DensityMatrix> noisy_states, joint_states;
  parallel_for(2, [&](std::size_t job) {
    if (job == 0)
      noisy_states = evolve_series(noisy_lindbladian(h, noise), rho0, r.t, cfg.integrator);
    else
      joint_states = evolve_series(joint_lindbladian(h, noise, plan, true),
                                   initial_joint_state(rho0, plan), r.t, cfg.integrator);
  });

  const double nd = static_cast<double>(n);
  std::vector<double> raw;
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    r.r_noisy.push_back(rate_function(noisy_states[i].expectation(echo_obs).real(), n));
    raw.push_back(raw_joint_expectation(joint_states[i], echo_obs, plan));
    const double log_term = raw.back() > 0.0 ? std::log(raw.back())
                                             : std::numeric_limits<double>::quiet_NaN();
    r.log_term.push_back(log_term);
    r.r_mitigated_exact.push_back(-(log_term + plan.log_prefactor(r.t[i])) / nd);
  }

  r.sampled = !opt.exact_only;
  if (!r.sampled) {
    r.r_mitigated = r.r_mitigated_exact;
    r.stderr_.assign(r.t.size(), 0.0);
  } else {
    const auto pts = detail::sample_series(joint_states, joint_observable(echo_obs, plan),
                                           cfg.shots, cfg.seed);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double raw_mean = pts[i].raw_mean;
      if (raw_mean > 0.0) {
        r.r_mitigated.push_back(-(std::log(raw_mean) + plan.log_prefactor(r.t[i])) / nd);
        r.stderr_.push_back(pts[i].stderr_raw / (nd * raw_mean));
      } else {
        r.r_mitigated.push_back(std::numeric_limits<double>::quiet_NaN());
        r.stderr_.push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
  }
  for (std::size_t i = 0; i < r.t.size(); ++i)
    if (std::isnan(r.r_mitigated[i])) {
      r.masked.push_back(i);
      r.diagnostics.push_back("t = " + format_float(r.t[i]) +
                              ": echo estimate not positive, point masked");
    }
  return r;
}

// ---------------------------------------------------------------------------------------------
// Floquet drive of an open chain

struct Spectrum {
  std::vector<double> frequency;  // units of 1/T
  std::vector<double> power;      // unit maximum
};

/// |sum_n x_n e^{-2 pi i k n / L}|^2 on the one-sided bins k = 0..floor(L/2), normalized to unit
/// maximum. No window and no mean removal.
inline Spectrum power_spectrum(std::span<const double> series, double period) {
  const std::size_t len = series.size();
  if (len < 2) throw ValueError("power_spectrum: need at least two samples");
  Spectrum s;
  double peak = 0.0;
  for (std::size_t k = 0; k <= len / 2; ++k) {
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < len; ++j)
      acc += series[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * j) /
                                             static_cast<double>(len));
    s.frequency.push_back(static_cast<double>(k) / (static_cast<double>(len) * period));
    s.power.push_back(std::norm(acc));
    peak = std::max(peak, s.power.back());
  }
  if (peak > 0.0)
    for (auto& p : s.power) p /= peak;
  return s;
}

/// Bins that are strict local maxima (edges compare with their one neighbour) and at least
/// `threshold` times the global maximum.
inline std::vector<std::size_t> spectral_peaks(std::span<const double> power,
                                               double threshold = 0.1) {
  std::vector<std::size_t> out;
  if (power.empty()) return out;
  const double top = *std::max_element(power.begin(), power.end());
  for (std::size_t k = 0; k < power.size(); ++k) {
    const bool left = k == 0 || power[k] > power[k - 1];
    const bool right = k + 1 == power.size() || power[k] > power[k + 1];
    if (left && right && power[k] >= threshold * top) out.push_back(k);
  }
  return out;
}

/// Grid indices of interior strict local maxima of a series (NaN never qualifies).
inline std::vector<std::size_t> local_maxima(std::span<const double> y) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] > y[i + 1]) out.push_back(i);
  return out;
}

struct FloquetResult {
  std::vector<double> t;  // n T
  std::vector<double> ideal;
  std::vector<double> noisy;
  std::vector<double> mitigated;
  std::vector<double> mitigated_exact;
  std::vector<double> stderr_;
  Spectrum spectrum_ideal;
  Spectrum spectrum_noisy;
  Spectrum spectrum_mitigated;
  double a = 0.0;
  double delta = 0.0;
  bool sampled = false;
};

inline NoiseModel floquet_noise(const FloquetConfig& cfg) {
  return uniform_qubit_noise(
      cfg.n, {{ops::sigma_z(), cfg.gamma}},
      cfg.ancilla_noise ? std::vector<std::pair<Operator, double>>{{ops::sigma_z(), cfg.gamma}}
                        : std::vector<std::pair<Operator, double>>{});
}

inline FloquetResult run_floquet(const FloquetConfig& cfg, const RunOptions& opt = {}) {
  cfg.validate();
  const std::size_t n = cfg.n;
  const Operator h1 = models::zz_coupling(n, models::chain_edges(n), cfg.J);
  const Operator h2 = models::transverse_field(n, cfg.h);
  const Operator m = models::magnetization(n);
  const NoiseModel noise = floquet_noise(cfg);
  const MitigationPlan plan = build_single_qubit_plan(noise);
  const Vector psi0 = models::all_zero_state(n);
  const DensityMatrix rho0 = DensityMatrix::pure(psi0, h1.layout());
  const double t1 = cfg.delta_t;
  const double t2 = cfg.period - cfg.delta_t;

  FloquetResult r;
  r.t = detail::stroboscopic_times(cfg.cycles, cfg.period);
  r.a = plan.a;
  r.delta = plan.delta;

  const Matrix floquet =
      unitary_propagator(h2, t2).matrix() * unitary_propagator(h1, t1).matrix();
  Vector psi = psi0;
  for (std::size_t k = 0; k <= cfg.cycles; ++k) {
    r.ideal.push_back(detail::vector_expectation(m, psi));
    psi = floquet * psi;
  }

  auto drive = [&](const Lindbladian& l1, const Lindbladian& l2, DensityMatrix state) {
    std::vector<DensityMatrix> out{state};
    for (std::size_t k = 0; k < cfg.cycles; ++k) {
      state = evolve(l1, state, t1, cfg.integrator);
      state = evolve(l2, state, t2, cfg.integrator);
      out.push_back(state);
    }
    return out;
  };
  std::vector<DensityMatrix> noisy_states, joint_states;
  parallel_for(2, [&](std::size_t job) {
    if (job == 0)
      noisy_states = drive(noisy_lindbladian(h1, noise), noisy_lindbladian(h2, noise), rho0);
    else
      joint_states = drive(joint_lindbladian(h1, noise, plan, true),
                           joint_lindbladian(h2, noise, plan, true),
                           initial_joint_state(rho0, plan));
  });

  std::vector<double> raw;
  for (std::size_t k = 0; k <= cfg.cycles; ++k) {
    r.noisy.push_back(noisy_states[k].expectation(m).real());
    raw.push_back(raw_joint_expectation(joint_states[k], m, plan));
    r.mitigated_exact.push_back(plan.prefactor(r.t[k]) * raw.back());
  }
  r.sampled = !opt.exact_only;
  if (!r.sampled) {
    r.mitigated = r.mitigated_exact;
    r.stderr_.assign(r.t.size(), 0.0);
  } else {
    const auto pts =
        detail::sample_series(joint_states, joint_observable(m, plan), cfg.shots, cfg.seed);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      r.mitigated.push_back(plan.prefactor(r.t[k]) * pts[k].raw_mean);
      r.stderr_.push_back(plan.prefactor(r.t[k]) * pts[k].stderr_raw);
    }
  }
  r.spectrum_ideal = power_spectrum(r.ideal, cfg.period);
  r.spectrum_noisy = power_spectrum(r.noisy, cfg.period);
  r.spectrum_mitigated = power_spectrum(r.mitigated, cfg.period);
  return r;
}

// ---------------------------------------------------------------------------------------------
// Output

inline void write_heisenberg_csv(const std::filesystem::path& path, const HeisenbergResult& r) {
  CsvWriter csv(path, {"t", "ideal", "noisy", "mitigated", "partial", "stderr"});
  for (std::size_t i = 0; i < r.t.size(); ++i)
    csv.row({r.t[i], r.ideal[i], r.noisy[i], r.mitigated[i], r.partial[i], r.stderr_[i]});
}

inline void write_quench_csv(const std::filesystem::path& path, const QuenchResult& r) {
  CsvWriter csv(path, {"t", "r_ideal", "r_noisy", "r_mitigated", "stderr"});
  for (std::size_t i = 0; i < r.t.size(); ++i)
    csv.row({r.t[i], r.r_ideal[i], r.r_noisy[i], r.r_mitigated[i], r.stderr_[i]});
}

inline void write_floquet_csv(const std::filesystem::path& spectrum_path,
                              const std::filesystem::path& series_path, const FloquetResult& r) {
  CsvWriter spec(spectrum_path, {"frequency", "ideal", "noisy", "mitigated"});
  for (std::size_t k = 0; k < r.spectrum_ideal.frequency.size(); ++k)
    spec.row({r.spectrum_ideal.frequency[k], r.spectrum_ideal.power[k],
              r.spectrum_noisy.power[k], r.spectrum_mitigated.power[k]});
  CsvWriter series(series_path, {"n", "t", "ideal", "noisy", "mitigated", "stderr"});
  for (std::size_t k = 0; k < r.t.size(); ++k)
    series.row({static_cast<long long>(k), r.t[k], r.ideal[k], r.noisy[k], r.mitigated[k],
                r.stderr_[k]});
}

// ---------------------------------------------------------------------------------------------
// Configuration files

using ScenarioConfig = std::variant<HeisenbergConfig, QuenchConfig, FloquetConfig>;

namespace detail {

inline TimeGrid parse_grid(const json_util::json& j, const std::string& where) {
  json_util::check_keys(j, {"start", "stop", "step"}, where);
  TimeGrid g;
  json_util::read(j, "start", g.start, where);
  json_util::read(j, "stop", g.stop, where);
  json_util::read(j, "step", g.step, where);
  g.validate();
  return g;
}

inline void read_common(const json_util::json& j, const std::string& where, TimeGrid* grid,
                        std::uint64_t& shots, std::uint64_t& seed, IntegratorConfig& integ) {
  if (grid && j.contains("t_grid")) *grid = parse_grid(j.at("t_grid"), where + ".t_grid");
  json_util::read(j, "shots", shots, where);
  json_util::read(j, "seed", seed, where);
  if (j.contains("integrator"))
    integ = json_util::parse_integrator(j.at("integrator"), where + ".integrator");
}

}  // namespace detail

/// {"scenario": name, name: {parameters}}. Omitted parameters keep their defaults.
inline ScenarioConfig parse_scenario_config(const json_util::json& doc) {
  json_util::require_object(doc, "config");
  const auto name = json_util::required<std::string>(doc, "scenario", "config");
  json_util::check_keys(doc, {"scenario", name.c_str()}, "config");
  const json_util::json block = doc.contains(name) ? doc.at(name) : json_util::json::object();
  const std::string where = "config." + name;
  if (name == "heisenberg") {
    HeisenbergConfig c;
    json_util::check_keys(block, {"J", "anisotropy", "h", "gamma_z", "gamma_minus",
                                  "ancilla_noise", "t_grid", "shots", "seed", "integrator"},
                          where);
    json_util::read(block, "J", c.J, where);
    json_util::read(block, "anisotropy", c.anisotropy, where);
    json_util::read(block, "h", c.h, where);
    json_util::read(block, "gamma_z", c.gamma_z, where);
    json_util::read(block, "gamma_minus", c.gamma_minus, where);
    json_util::read(block, "ancilla_noise", c.ancilla_noise, where);
    detail::read_common(block, where, &c.t_grid, c.shots, c.seed, c.integrator);
    c.validate();
    return c;
  }
  if (name == "quench") {
    QuenchConfig c;
    json_util::check_keys(block, {"N", "J", "h", "gamma_z", "ancilla_noise", "t_grid", "shots",
                                  "seed", "integrator"},
                          where);
    json_util::read(block, "N", c.n, where);
    json_util::read(block, "J", c.J, where);
    json_util::read(block, "h", c.h, where);
    json_util::read(block, "gamma_z", c.gamma_z, where);
    json_util::read(block, "ancilla_noise", c.ancilla_noise, where);
    detail::read_common(block, where, &c.t_grid, c.shots, c.seed, c.integrator);
    c.validate();
    return c;
  }
  if (name == "floquet") {
    FloquetConfig c;
    json_util::check_keys(block, {"N", "J", "h", "delta_t", "T", "cycles", "gamma",
                                  "ancilla_noise", "shots", "seed", "integrator"},
                          where);
    json_util::read(block, "N", c.n, where);
    json_util::read(block, "J", c.J, where);
    json_util::read(block, "h", c.h, where);
    json_util::read(block, "delta_t", c.delta_t, where);
    json_util::read(block, "T", c.period, where);
    json_util::read(block, "cycles", c.cycles, where);
    json_util::read(block, "gamma", c.gamma, where);
    json_util::read(block, "ancilla_noise", c.ancilla_noise, where);
    detail::read_common(block, where, nullptr, c.shots, c.seed, c.integrator);
    c.validate();
    return c;
  }
  throw ConfigError("config.scenario: unknown scenario '" + name +
                    "' (expected heisenberg, quench or floquet)");
}

inline std::string scenario_name(const ScenarioConfig& c) {
  return std::visit(
      [](const auto& cfg) -> std::string {
        using T = std::decay_t<decltype(cfg)>;
        if constexpr (std::is_same_v<T, HeisenbergConfig>) return "heisenberg";
        else if constexpr (std::is_same_v<T, QuenchConfig>) return "quench";
        else return "floquet";
      },
      c);
}

struct ScenarioOutput {
  std::vector<std::filesystem::path> files;
  json_util::json summary;
};

/// Runs a scenario and writes its CSV (and optional SVG) files into `out_dir`.
inline ScenarioOutput run_scenario(const ScenarioConfig& config,
                                   const std::filesystem::path& out_dir, const RunOptions& opt,
                                   bool plot) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw IoError("cannot create output directory '" + out_dir.string() + "'");
  ScenarioOutput out;
  out.summary["scenario"] = scenario_name(config);
  out.summary["sampled"] = !opt.exact_only;
  std::visit(
      [&](const auto& cfg) {
        using T = std::decay_t<decltype(cfg)>;
        if constexpr (std::is_same_v<T, HeisenbergConfig>) {
          const auto r = run_heisenberg(cfg, opt);
          out.files.push_back(out_dir / "heisenberg.csv");
          write_heisenberg_csv(out.files.back(), r);
          if (plot) {
            out.files.push_back(out_dir / "heisenberg.svg");
            write_line_plot(out.files.back(), "Total magnetization", "t", r.t,
                            {{"ideal", r.ideal}, {"noisy", r.noisy},
                             {"mitigated", r.mitigated}, {"partial", r.partial}});
          }
          out.summary["a"] = r.a;
          out.summary["delta"] = r.delta;
          out.summary["seed"] = cfg.seed;
          out.summary["shots"] = cfg.shots;
        } else if constexpr (std::is_same_v<T, QuenchConfig>) {
          const auto r = run_quench(cfg, opt);
          out.files.push_back(out_dir / "quench.csv");
          write_quench_csv(out.files.back(), r);
          if (plot) {
            out.files.push_back(out_dir / "quench.svg");
            write_line_plot(out.files.back(), "Loschmidt rate function", "t", r.t,
                            {{"ideal", r.r_ideal}, {"noisy", r.r_noisy},
                             {"mitigated", r.r_mitigated}});
          }
          out.summary["a"] = r.a;
          out.summary["delta"] = r.delta;
          out.summary["seed"] = cfg.seed;
          out.summary["shots"] = cfg.shots;
          out.summary["masked"] = r.diagnostics;
        } else {
          const auto r = run_floquet(cfg, opt);
          out.files.push_back(out_dir / "floquet.csv");
          out.files.push_back(out_dir / "floquet_series.csv");
          write_floquet_csv(out.files[0], out.files[1], r);
          if (plot) {
            out.files.push_back(out_dir / "floquet.svg");
            write_line_plot(out.files.back(), "Normalized power spectrum", "f T",
                            r.spectrum_ideal.frequency,
                            {{"ideal", r.spectrum_ideal.power},
                             {"noisy", r.spectrum_noisy.power},
                             {"mitigated", r.spectrum_mitigated.power}});
          }
          out.summary["a"] = r.a;
          out.summary["delta"] = r.delta;
          out.summary["seed"] = cfg.seed;
          out.summary["shots"] = cfg.shots;
          out.summary["peaks_ideal"] = spectral_peaks(r.spectrum_ideal.power);
          out.summary["peaks_noisy"] = spectral_peaks(r.spectrum_noisy.power);
          out.summary["peaks_mitigated"] = spectral_peaks(r.spectrum_mitigated.power);
        }
      },
      config);
  std::vector<std::string> names;
  for (const auto& f : out.files) names.push_back(f.string());
  out.summary["files"] = names;
  return out;
}

}  // namespace lmit

#endif  // LMIT_SCENARIOS_HPP
