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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include <gtest/gtest.h>

#include "lmit/lmit.hpp"
#include "oracles.hpp"

namespace {

using namespace lmit;
using oracle::Mat;
using oracle::Vec;
using json = json_util::json;

// Dense Hamiltonians assembled independently of the library's model builders.

Mat oracle_heisenberg(double jx, double jy, double jz, double h) {
  const int n = 4;
  Mat out = Mat::Zero(16, 16);
  const std::pair<int, int> edges[] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  for (auto [i, j] : edges) {
    out += jx * oracle::on_site(oracle::pauli('X'), i, n) * oracle::on_site(oracle::pauli('X'), j, n);
    out += jy * oracle::on_site(oracle::pauli('Y'), i, n) * oracle::on_site(oracle::pauli('Y'), j, n);
    out += jz * oracle::on_site(oracle::pauli('Z'), i, n) * oracle::on_site(oracle::pauli('Z'), j, n);
  }
  for (int i = 0; i < n; ++i) out -= h * oracle::on_site(oracle::pauli('Y'), i, n);
  return out;
}

Mat oracle_ising_ring(int n, double j, double h) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Mat out = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    out += j * oracle::on_site(oracle::pauli('Z'), i, n) *
           oracle::on_site(oracle::pauli('Z'), (i + 1) % n, n);
    out += h * oracle::on_site(oracle::pauli('X'), i, n);
  }
  return out;
}

Mat oracle_magnetization(int n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Mat out = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i) out += oracle::on_site(oracle::pauli('Z'), i, n);
  return out;
}

Vec zero_state(int n) {
  Vec v = Vec::Zero(Eigen::Index{1} << n);
  v(0) = 1.0;
  return v;
}

double expect(const Mat& a, const Vec& psi) { return psi.dot(a * psi).real(); }

// ---------------------------------------------------------------------------------------------
// Models

TEST(ScenarioModels, HeisenbergMatchesDenseConstruction) {
  HeisenbergConfig cfg;
  const Mat expected = oracle_heisenberg(cfg.J * 1.2, cfg.J * 0.8, cfg.J, cfg.h);
  EXPECT_LT(oracle::max_abs(heisenberg_hamiltonian(cfg).matrix() - expected), 1e-14);
}

TEST(ScenarioModels, IsingRingMatchesDenseConstruction) {
  EXPECT_LT(oracle::max_abs(models::ising_ring(4, 0.2, 1.0).matrix() - oracle_ising_ring(4, 0.2, 1.0)),
            1e-14);
}

TEST(ScenarioModels, LatticeEdges) {
  EXPECT_EQ(models::square_2x2_edges().size(), 4u);
  EXPECT_EQ(models::ring_edges(5).size(), 5u);
  EXPECT_EQ(models::ring_edges(2).size(), 1u);
  EXPECT_EQ(models::chain_edges(6).size(), 5u);
}

TEST(ScenarioModels, TimeGridIsInclusive) {
  const auto t = TimeGrid{0.0, 3.0, 0.05}.points();
  ASSERT_EQ(t.size(), 61u);
  EXPECT_DOUBLE_EQ(t.back(), 3.0);
  EXPECT_THROW((TimeGrid{0.0, 1.0, 0.0}.points()), ConfigError);
  EXPECT_THROW((TimeGrid{2.0, 1.0, 0.1}.points()), ConfigError);
}

// ---------------------------------------------------------------------------------------------
// Heisenberg

TEST(Heisenberg, ExactRunRecoversUnitaryMagnetization) {
  HeisenbergConfig cfg;
  cfg.t_grid = {0.0, 1.5, 0.25};
  const auto r = run_heisenberg(cfg, {.exact_only = true});
  ASSERT_EQ(r.t.size(), 7u);
  EXPECT_FALSE(r.sampled);

  const Mat h = oracle_heisenberg(cfg.jx(), cfg.jy(), cfg.jz(), cfg.h);
  const Mat m = oracle_magnetization(4);
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    const double ideal = expect(m, oracle::unitary(h, r.t[i]) * zero_state(4));
    EXPECT_NEAR(r.ideal[i], ideal, 1e-10) << "t=" << r.t[i];
    EXPECT_NEAR(r.mitigated_exact[i], ideal, 1e-5) << "t=" << r.t[i];
    EXPECT_DOUBLE_EQ(r.mitigated[i], r.mitigated_exact[i]);
  }
  for (double v : {r.ideal[0], r.noisy[0], r.mitigated[0], r.partial[0]}) EXPECT_NEAR(v, 4.0, 1e-12);
}

TEST(Heisenberg, PartialCurveMissesTheAncillaCorrection) {
  HeisenbergConfig cfg;
  cfg.t_grid = {0.0, 1.0, 0.5};
  const auto r = run_heisenberg(cfg, {.exact_only = true});
  // Four qubits, each with dephasing and decay: a is the sum of the local rates.
  EXPECT_NEAR(r.a, 4.0 * (cfg.gamma_z + cfg.gamma_minus), 1e-12);
  EXPECT_GT(r.delta, 0.0);
  for (std::size_t i = 0; i < r.t.size(); ++i)
    EXPECT_NEAR(r.partial[i] * std::exp(2.0 * r.delta * r.t[i]), r.mitigated_exact[i], 1e-12);
}

TEST(Heisenberg, NoiselessAncillaHasNoCorrection) {
  HeisenbergConfig cfg;
  cfg.ancilla_noise = false;
  cfg.t_grid = {0.0, 1.0, 0.5};
  const auto r = run_heisenberg(cfg, {.exact_only = true});
  EXPECT_EQ(r.delta, 0.0);
  for (std::size_t i = 0; i < r.t.size(); ++i) EXPECT_NEAR(r.partial[i], r.mitigated[i], 1e-12);
}

TEST(Heisenberg, SampledRunIsSeedDeterministicAndConsistent) {
  HeisenbergConfig cfg;
  cfg.t_grid = {0.0, 1.0, 0.5};
  cfg.shots = 20'000;
  const auto a = run_heisenberg(cfg);
  const auto b = run_heisenberg(cfg);
  ASSERT_TRUE(a.sampled);
  EXPECT_EQ(a.mitigated, b.mitigated);
  EXPECT_EQ(a.stderr_, b.stderr_);
  for (std::size_t i = 1; i < a.t.size(); ++i) {
    EXPECT_GT(a.stderr_[i], 0.0);
    EXPECT_LT(std::abs(a.mitigated[i] - a.mitigated_exact[i]), 5.0 * a.stderr_[i]);
  }
  cfg.seed += 1;
  const auto c = run_heisenberg(cfg);
  EXPECT_NE(a.mitigated[1], c.mitigated[1]);
}

// ---------------------------------------------------------------------------------------------
// Quench

TEST(Quench, ExactRunRecoversUnitaryRateFunction) {
  QuenchConfig cfg;
  cfg.t_grid = {0.0, 1.5, 0.1};
  const auto r = run_quench(cfg, {.exact_only = true});
  const Mat h = oracle_ising_ring(4, cfg.J, cfg.h);
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    const Vec psi = oracle::unitary(h, r.t[i]) * zero_state(4);
    const double echo = std::norm(psi(0));
    const double rate = -std::log(echo) / 4.0;
    EXPECT_NEAR(r.r_ideal[i], rate, 1e-10) << "t=" << r.t[i];
    EXPECT_NEAR(r.r_mitigated_exact[i], rate, 1e-5) << "t=" << r.t[i];
  }
  EXPECT_NEAR(r.r_ideal[0], 0.0, 1e-14);
  EXPECT_NEAR(r.r_noisy[0], 0.0, 1e-12);
  EXPECT_NEAR(r.r_mitigated[0], 0.0, 1e-12);
  EXPECT_TRUE(r.masked.empty());
}

TEST(Quench, MitigatedRateIsShiftedLogTerm) {
  QuenchConfig cfg;
  cfg.t_grid = {0.0, 1.0, 0.25};
  const auto r = run_quench(cfg, {.exact_only = true});
  // a = N gamma and delta = gamma for dephasing on every qubit and on the ancilla, so the slope
  // is 2 (N + 1) gamma / N.
  const double slope = 2.0 * 5.0 * cfg.gamma_z / 4.0;
  EXPECT_NEAR(r.a, 4.0 * cfg.gamma_z, 1e-12);
  EXPECT_NEAR(r.delta, cfg.gamma_z, 1e-12);
  for (std::size_t i = 0; i < r.t.size(); ++i)
    EXPECT_NEAR(r.r_mitigated_exact[i] + r.log_term[i] / 4.0, -slope * r.t[i], 1e-12);
}

TEST(Quench, RateFunctionMasksNonPositiveEcho) {
  EXPECT_TRUE(std::isnan(rate_function(0.0, 4)));
  EXPECT_TRUE(std::isnan(rate_function(-1e-3, 4)));
  EXPECT_NEAR(rate_function(std::exp(-2.0), 4), 0.5, 1e-15);
}

TEST(Quench, SampledRunIsSeedDeterministic) {
  QuenchConfig cfg;
  cfg.t_grid = {0.0, 0.5, 0.25};
  cfg.shots = 20'000;
  const auto a = run_quench(cfg);
  const auto b = run_quench(cfg);
  EXPECT_EQ(a.r_mitigated, b.r_mitigated);
  for (std::size_t i = 1; i < a.t.size(); ++i)
    EXPECT_LT(std::abs(a.r_mitigated[i] - a.r_mitigated_exact[i]), 5.0 * a.stderr_[i]);
}

// ---------------------------------------------------------------------------------------------
// Floquet

Vec oracle_floquet_step(const Mat& h1, const Mat& h2, double t1, double t2, const Vec& psi) {
  return oracle::unitary(h2, t2) * (oracle::unitary(h1, t1) * psi);
}

Mat oracle_chain_zz(int n, double j) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Mat out = Mat::Zero(d, d);
  for (int i = 0; i + 1 < n; ++i)
    out += j * oracle::on_site(oracle::pauli('Z'), i, n) * oracle::on_site(oracle::pauli('Z'), i + 1, n);
  return out;
}

Mat oracle_field(int n, double h) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Mat out = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i) out += h * oracle::on_site(oracle::pauli('X'), i, n);
  return out;
}

TEST(Floquet, NoiselessDriveLeavesAllCurvesEqual) {
  FloquetConfig cfg;
  cfg.n = 3;
  cfg.cycles = 6;
  cfg.gamma = 0.0;
  const auto r = run_floquet(cfg, {.exact_only = true});
  ASSERT_EQ(r.t.size(), 7u);
  for (std::size_t k = 0; k < r.t.size(); ++k) {
    EXPECT_NEAR(r.noisy[k], r.ideal[k], 1e-8);
    EXPECT_NEAR(r.mitigated[k], r.ideal[k], 1e-8);
  }
}

TEST(Floquet, MitigatedStroboscopicSeriesMatchesOracle) {
  FloquetConfig cfg;
  cfg.n = 3;
  cfg.cycles = 8;
  cfg.gamma = 0.05;
  const auto r = run_floquet(cfg, {.exact_only = true});
  const Mat h1 = oracle_chain_zz(3, cfg.J);
  const Mat h2 = oracle_field(3, cfg.h);
  const Mat m = oracle_magnetization(3);
  Vec psi = zero_state(3);
  for (std::size_t k = 0; k <= cfg.cycles; ++k) {
    EXPECT_NEAR(r.t[k], static_cast<double>(k) * cfg.period, 1e-14);
    EXPECT_NEAR(r.ideal[k], expect(m, psi), 1e-10) << "k=" << k;
    EXPECT_NEAR(r.mitigated_exact[k], expect(m, psi), 1e-5) << "k=" << k;
    psi = oracle_floquet_step(h1, h2, cfg.delta_t, cfg.period - cfg.delta_t, psi);
  }
  // Noise pulls the magnetization toward zero on average.
  double noisy_abs = 0.0, ideal_abs = 0.0;
  for (std::size_t k = 1; k <= cfg.cycles; ++k) {
    noisy_abs += std::abs(r.noisy[k]);
    ideal_abs += std::abs(r.ideal[k]);
  }
  EXPECT_LT(noisy_abs, ideal_abs);
}

TEST(Spectrum, MatchesNaiveDft) {
  oracle::Rng rng(11);
  std::vector<double> x(21);
  for (auto& v : x) v = rng.normal();
  const auto s = power_spectrum(x, 2.0);
  ASSERT_EQ(s.power.size(), 11u);
  std::vector<double> p;
  for (std::size_t k = 0; k <= 10; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(k * j) / 21.0;
      re += x[j] * std::cos(ang);
      im -= x[j] * std::sin(ang);
    }
    p.push_back(re * re + im * im);
  }
  const double top = *std::max_element(p.begin(), p.end());
  for (std::size_t k = 0; k <= 10; ++k) {
    EXPECT_NEAR(s.power[k], p[k] / top, 1e-12);
    EXPECT_NEAR(s.frequency[k], static_cast<double>(k) / 42.0, 1e-15);
  }
  EXPECT_THROW(power_spectrum(std::vector<double>{1.0}, 1.0), ValueError);
}

TEST(Spectrum, PureToneLandsInItsBin) {
  std::vector<double> x(20);
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::cos(2.0 * std::numbers::pi * 3.0 * j / 20.0);
  const auto s = power_spectrum(x, 1.0);
  EXPECT_EQ(spectral_peaks(s.power), (std::vector<std::size_t>{3}));
  EXPECT_DOUBLE_EQ(s.power[3], 1.0);
}

TEST(Spectrum, PeakFinderRules) {
  const std::vector<double> p{1.0, 0.2, 0.05, 0.3, 0.1, 0.09, 0.095, 0.0};
  // Bin 0 is an edge maximum; bin 3 clears the threshold; bin 6 is a local maximum below it.
  EXPECT_EQ(spectral_peaks(p, 0.1), (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(spectral_peaks(p, 0.05), (std::vector<std::size_t>{0, 3, 6}));
  EXPECT_EQ(spectral_peaks(std::vector<double>{0.5, 0.5}, 0.1), (std::vector<std::size_t>{}));
  EXPECT_TRUE(spectral_peaks(std::vector<double>{}).empty());
}

TEST(Spectrum, LocalMaximaIgnoreEdgesAndNan) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<double> y{3.0, 1.0, 2.0, 1.0, nan, 5.0, 1.0, 4.0};
  EXPECT_EQ(local_maxima(y), (std::vector<std::size_t>{2}));
}

// ---------------------------------------------------------------------------------------------
// Configuration files and output

TEST(ScenarioConfig, DefaultsFillOmittedParameters) {
  const auto c = parse_scenario_config(json::parse(R"({"scenario": "quench", "quench": {"N": 5}})"));
  const auto& q = std::get<QuenchConfig>(c);
  EXPECT_EQ(q.n, 5u);
  EXPECT_DOUBLE_EQ(q.J, 0.2);
  EXPECT_DOUBLE_EQ(q.gamma_z, 0.1);
  EXPECT_DOUBLE_EQ(q.t_grid.step, 0.02);
  EXPECT_EQ(scenario_name(c), "quench");

  const auto f = parse_scenario_config(json::parse(
      R"({"scenario": "floquet", "floquet": {"T": 2.0, "delta_t": 0.5, "integrator": {"method": "rk45"}}})"));
  EXPECT_DOUBLE_EQ(std::get<FloquetConfig>(f).period, 2.0);
  EXPECT_EQ(std::get<FloquetConfig>(f).integrator.method, IntegratorMethod::RK45);

  const auto h = parse_scenario_config(json::parse(R"({"scenario": "heisenberg"})"));
  EXPECT_DOUBLE_EQ(std::get<HeisenbergConfig>(h).J, 2.0);
}

TEST(ScenarioConfig, RejectsMalformedDocuments) {
  const char* bad[] = {
      R"([])",
      R"({"heisenberg": {}})",
      R"({"scenario": "lattice"})",
      R"({"scenario": "heisenberg", "heisenberg": {"gamma": 0.1}})",
      R"({"scenario": "heisenberg", "extra": 1})",
      R"({"scenario": "heisenberg", "heisenberg": {"J": "two"}})",
      R"({"scenario": "heisenberg", "heisenberg": {"gamma_z": -0.1}})",
      R"({"scenario": "heisenberg", "heisenberg": {"t_grid": {"start": 0, "stop": 1, "step": 0}}})",
      R"({"scenario": "quench", "quench": {"N": 1}})",
      R"({"scenario": "floquet", "floquet": {"delta_t": 1.5}})",
      R"({"scenario": "floquet", "floquet": {"cycles": 0}})",
      R"({"scenario": "floquet", "floquet": {"shots": 0}})",
  };
  for (const char* doc : bad) EXPECT_THROW(parse_scenario_config(json::parse(doc)), ConfigError) << doc;
}

TEST(ScenarioOutput, WritesCsvAndSummary) {
  const auto dir = std::filesystem::temp_directory_path() / "lmit_scenario_output_test";
  std::filesystem::remove_all(dir);
  HeisenbergConfig cfg;
  cfg.t_grid = {0.0, 0.5, 0.25};
  const auto out = run_scenario(cfg, dir, {.exact_only = true}, true);
  ASSERT_EQ(out.files.size(), 2u);
  std::ifstream csv(out.files[0]);
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "t,ideal,noisy,mitigated,partial,stderr");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 3);
  EXPECT_TRUE(std::filesystem::exists(dir / "heisenberg.svg"));
  EXPECT_EQ(out.summary.at("scenario"), "heisenberg");
  EXPECT_FALSE(out.summary.at("sampled").get<bool>());
  std::filesystem::remove_all(dir);
}

TEST(ScenarioOutput, UnwritableDirectoryIsAnIoError) {
  const auto file = std::filesystem::temp_directory_path() / "lmit_scenario_blocker";
  std::ofstream(file) << "x";
  HeisenbergConfig cfg;
  cfg.t_grid = {0.0, 0.1, 0.1};
  EXPECT_THROW(run_scenario(cfg, file / "sub", {.exact_only = true}, false), IoError);
  std::filesystem::remove(file);
}

}  // namespace
