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

#include <gtest/gtest.h>

#include "instances.hpp"
#include "lmit/lmit.hpp"
#include "oracles.hpp"

namespace {

using namespace lmit;

DensityMatrix evolve_joint(const Operator& h, const NoiseModel& noise, const MitigationPlan& plan,
                           const DensityMatrix& rho0, double t, bool ancilla_noise = true) {
  const auto l = joint_lindbladian(h, noise, plan, ancilla_noise);
  return evolve(l, initial_joint_state(rho0, plan), t, oracle::tight_rk45());
}

double mitigated_run(const Operator& h, const NoiseModel& noise, const MitigationPlan& plan,
                     const DensityMatrix& rho0, const Operator& a, double t) {
  return mitigated_expectation(evolve_joint(h, noise, plan, rho0, t), a, plan, t);
}

DensityMatrix plus_state() {
  Vector v(2);
  v << 1.0, 1.0;
  return DensityMatrix::pure(v, {2});
}

// ---- plan construction ----

TEST(Plans, DephasingGivesSimplifiedPauliForm) {
  const double gz = 0.07;
  const auto noise = uniform_qubit_noise(3, {{ops::sigma_z(), gz}});
  const auto plan = build_single_qubit_plan(noise);
  EXPECT_EQ(plan.variant, Variant::SimplifiedPauli);
  EXPECT_NEAR(plan.a, 3 * gz, 1e-14);
  ASSERT_EQ(plan.joint_jumps.size(), 3u);
  const Operator expected = kron(std::sqrt(gz) * embed_local(ops::sigma_z(), 1, {2, 2, 2}),
                                 ops::sigma_z());
  EXPECT_LE(oracle::max_abs(plan.joint_jumps[1].matrix() - expected.matrix()), 1e-15);
}

TEST(Plans, AmplitudeDampingRootOfS) {
  const double g = 0.2;
  const auto plan = build_single_qubit_plan(uniform_qubit_noise(1, {{ops::sigma_minus(), g}}));
  EXPECT_EQ(plan.variant, Variant::SingleQubit);
  EXPECT_NEAR(plan.a, g, 1e-14);
  ASSERT_EQ(plan.joint_jumps.size(), 3u);
  const Matrix root = std::sqrt(g) * ops::proj0().matrix();
  EXPECT_LE(oracle::max_abs(plan.joint_jumps[1].matrix() -
                            oracle::kron(root, oracle::pauli('Z'))),
            1e-12);
  EXPECT_LE(oracle::max_abs(plan.joint_jumps[2].matrix() - oracle::kron(root, oracle::eye(2))),
            1e-12);
}

TEST(Plans, NoNoiseIsDegenerateButValid) {
  const NoiseModel none{{2, 2}, {}, {}};
  for (auto v : {Variant::SingleQubit, Variant::AltQubitProjector, Variant::MultiAncilla,
                 Variant::Qutrit}) {
    const auto plan = build_plan(v, none);
    EXPECT_EQ(plan.a, 0.0);
    EXPECT_TRUE(plan.joint_jumps.empty());
    EXPECT_EQ(plan.prefactor(3.0), 1.0);
  }
}

TEST(Plans, AltQubitProjectorOperators) {
  const double g = 0.3;
  const auto plan = build_alt_qubit_plan(uniform_qubit_noise(1, {{ops::sigma_minus(), g}}));
  ASSERT_EQ(plan.joint_jumps.size(), 3u);
  const Matrix root2 = std::sqrt(2 * g) * ops::proj0().matrix();
  EXPECT_LE(oracle::max_abs(plan.joint_jumps[1].matrix() -
                            oracle::kron(root2, ops::proj0().matrix())),
            1e-12);
  EXPECT_LE(oracle::max_abs(plan.joint_jumps[2].matrix() -
                            oracle::kron(root2, ops::proj1().matrix())),
            1e-12);
  const auto pauli = build_alt_qubit_plan(uniform_qubit_noise(2, {{ops::sigma_y(), g}}));
  EXPECT_EQ(pauli.variant, Variant::SimplifiedPauli);
  EXPECT_EQ(pauli.joint_jumps.size(), 2u);
}

TEST(Plans, SimplifiedFormRequiresVanishingS) {
  const auto dephasing = uniform_qubit_noise(2, {{ops::sigma_z(), 0.1}});
  EXPECT_EQ(build_plan(Variant::SimplifiedPauli, dephasing).variant, Variant::SimplifiedPauli);
  const auto decay = uniform_qubit_noise(2, {{ops::sigma_minus(), 0.1}});
  EXPECT_THROW(build_plan(Variant::SimplifiedPauli, decay), ValueError);
  EXPECT_EQ(build_plan(Variant::SingleQubit, decay).variant, Variant::SingleQubit);
}

TEST(Plans, MultiAncillaLocalNoise) {
  const auto noise =
      uniform_qubit_noise(3, {{ops::sigma_z(), 0.03}, {ops::sigma_minus(), 0.05}});
  const auto multi = build_multi_ancilla_plan(noise);
  const auto single = build_single_qubit_plan(noise);
  EXPECT_EQ(multi.ancilla_layout, (Layout{2, 2, 2}));
  EXPECT_NEAR(multi.a, single.a, 1e-12);
  EXPECT_EQ(multi.ancilla_rates.size(), 3u);
  EXPECT_EQ(multi.measurement.dim(), 8u);

  const auto one = uniform_qubit_noise(1, {{ops::sigma_minus(), 0.1}});
  const auto m1 = build_multi_ancilla_plan(one);
  const auto s1 = build_single_qubit_plan(one);
  ASSERT_EQ(m1.joint_jumps.size(), s1.joint_jumps.size());
  for (std::size_t k = 0; k < m1.joint_jumps.size(); ++k)
    EXPECT_LE(oracle::max_abs(m1.joint_jumps[k].matrix() - s1.joint_jumps[k].matrix()), 1e-15);
  EXPECT_EQ(m1.a, s1.a);
}

TEST(Plans, MultiAncillaRejectsNonLocalJump) {
  NoiseModel n{{2, 2}, {}, {}};
  n.system_jumps.push_back({kron(ops::sigma_z(), ops::sigma_z()), 0.1, std::nullopt});
  EXPECT_THROW(build_multi_ancilla_plan(n), ValueError);
}

TEST(Plans, MultiAncillaGroupedAssignment) {
  const auto noise = uniform_qubit_noise(3, {{ops::sigma_minus(), 0.05}});
  const auto plan = build_multi_ancilla_plan(noise, {0, 0, 1});
  EXPECT_EQ(plan.ancilla_layout, (Layout{2, 2}));
  EXPECT_NEAR(plan.ancilla_rates[0], 0.10, 1e-14);
  EXPECT_NEAR(plan.ancilla_rates[1], 0.05, 1e-14);
}

TEST(Plans, QutritStructure) {
  const auto plan = build_qutrit_plan(uniform_qubit_noise(1, {{ops::sigma_minus(), 0.1}}));
  EXPECT_EQ(plan.ancilla_layout, (Layout{3}));
  EXPECT_NEAR(plan.initial_ancilla(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(plan.initial_ancilla(1, 1).real(), 0.5, 1e-15);
  EXPECT_EQ(plan.initial_ancilla(2, 2), cplx(0.0));
  EXPECT_EQ(plan.measurement(0, 1), cplx(1.0));
  EXPECT_EQ(plan.measurement(2, 2), cplx(0.0));
}

// ---- exact cancellation and block laws ----

TEST(Cancellation, RandomInstancesMatchUnitaryOracle) {
  oracle::Rng rng(101);
  for (int trial = 0; trial < 8; ++trial) {
    const int qubits = 1 + trial % 3;
    const auto in = oracle::random_instance(rng, qubits, 1 + (trial / 3) % 3);
    const auto plan = build_single_qubit_plan(in.noise);
    const auto l = joint_lindbladian(in.hamiltonian(), in.noise, plan);
    const std::vector<double> times{0.5, 1.0, 2.0};
    const auto ws = evolve_series(l, initial_joint_state(in.state(), plan), times,
                                  oracle::tight_rk45());
    for (std::size_t k = 0; k < times.size(); ++k)
      EXPECT_NEAR(mitigated_expectation(ws[k], in.obs(), plan, times[k]), in.ideal(times[k]), 1e-5)
          << "trial " << trial << " t " << times[k];
  }
}

TEST(Cancellation, InitialTimeAndNormalization) {
  oracle::Rng rng(103);
  const auto in = oracle::random_instance(rng, 2, 2);
  const auto plan = build_single_qubit_plan(in.noise);
  const auto w0 = initial_joint_state(in.state(), plan);
  EXPECT_NEAR(mitigated_expectation(w0, in.obs(), plan, 0.0), in.ideal(0.0), 1e-14);
  const auto w = evolve_joint(in.hamiltonian(), in.noise, plan, in.state(), 1.5);
  EXPECT_NEAR(mitigated_expectation(w, Operator::identity(in.layout), plan, 1.5), 1.0, 1e-6);
}

TEST(BlockLaws, OffDiagonalBlockIsDampedUnitary) {
  oracle::Rng rng(107);
  for (int trial = 0; trial < 4; ++trial) {
    const auto in = oracle::random_instance(rng, 1 + trial % 3, 2);
    const auto plan = build_single_qubit_plan(in.noise);
    const double t = 1.0;
    const auto w = evolve_joint(in.hamiltonian(), in.noise, plan, in.state(), t);
    const auto [a, s] = oracle::decay_and_s(in.amplitudes, in.h.rows());
    const Matrix expected = 0.5 * std::exp(-2 * a * t) * oracle::unitary_evolve(in.h, in.rho, t);
    const Matrix b01 = ancilla_block(w, 0, 1).matrix();
    EXPECT_LE(oracle::max_abs(b01 - expected), 1e-6);
    EXPECT_LE(oracle::max_abs(b01 - ancilla_block(w, 1, 0).matrix()), 1e-10);
  }
}

TEST(BlockLaws, DiagonalBlocksFollowDoubledNoise) {
  oracle::Rng rng(109);
  const auto in = oracle::random_instance(rng, 2, 2);
  const auto plan = build_single_qubit_plan(in.noise);
  const double t = 0.8;
  const auto w = evolve_joint(in.hamiltonian(), in.noise, plan, in.state(), t);
  const auto [a, s] = oracle::decay_and_s(in.amplitudes, in.h.rows());
  std::vector<Matrix> doubled;
  for (const auto& l : in.amplitudes) doubled.push_back(std::sqrt(2.0) * l);
  doubled.push_back(std::sqrt(2.0) * oracle::psd_root(s));
  const Matrix expected = oracle::lindblad_evolve(in.h, doubled, 0.5 * in.rho, t);
  EXPECT_LE(oracle::max_abs(ancilla_block(w, 0, 0).matrix() - expected), 1e-6);
  EXPECT_LE(oracle::max_abs(ancilla_block(w, 1, 1).matrix() - expected), 1e-6);
}

// ---- plan equivalence ----

TEST(Equivalence, AllVariantsAgreeOnLocalNoise) {
  oracle::Rng rng(113);
  const Layout lay{2, 2};
  const Operator h(rng.hermitian(4, 2.0), lay);
  const auto rho = DensityMatrix::checked(Operator(rng.density(4), lay));
  const Operator a(rng.hermitian(4, 1.0), lay);
  const auto noise =
      uniform_qubit_noise(2, {{ops::sigma_z(), 0.08}, {ops::sigma_minus(), 0.12}});
  const double t = 1.2;
  const double expected = (a.matrix() * oracle::unitary_evolve(h.matrix(), rho.matrix(), t))
                              .trace()
                              .real();
  for (auto v : {Variant::SingleQubit, Variant::AltQubitProjector, Variant::MultiAncilla,
                 Variant::Qutrit}) {
    const auto plan = build_plan(v, noise);
    EXPECT_NEAR(mitigated_run(h, noise, plan, rho, a, t), expected, 1e-6) << variant_name(v);
  }
}

TEST(Equivalence, MultiAncillaDephasingTwoQubits) {
  const double gz = 0.1;
  const auto noise = uniform_qubit_noise(2, {{ops::sigma_z(), gz}});
  const auto plan = build_multi_ancilla_plan(noise);
  EXPECT_NEAR(plan.a, 2 * gz, 1e-14);
  const Layout lay{2, 2};
  const Operator h =
      embed_local(ops::sigma_x(), 0, lay) * embed_local(ops::sigma_x(), 1, lay) +
      0.7 * embed_local(ops::sigma_x(), 0, lay);
  const auto rho = DensityMatrix::pure(basis_state(lay, std::vector<std::size_t>{0, 0}), lay);
  const Operator z0 = embed_local(ops::sigma_z(), 0, lay);
  const double t = 1.5;
  const double expected =
      (z0.matrix() * oracle::unitary_evolve(h.matrix(), rho.matrix(), t)).trace().real();
  EXPECT_NEAR(mitigated_run(h, noise, plan, rho, z0, t), expected, 1e-6);
}

TEST(Equivalence, QutritSingleQubitRandomInstance) {
  oracle::Rng rng(127);
  const auto in = oracle::random_instance(rng, 1, 2);
  const auto plan = build_qutrit_plan(in.noise);
  EXPECT_NEAR(mitigated_run(in.hamiltonian(), in.noise, plan, in.state(), in.obs(), 1.0),
              in.ideal(1.0), 1e-6);
}

// ---- ancilla noise ----

TEST(AncillaNu, QubitTable) {
  const std::vector<std::pair<Operator, double>> table{
      {ops::sigma_x(), 0.0},       {ops::sigma_y(), 2.0}, {ops::sigma_z(), 2.0},
      {ops::sigma_plus(), 0.5},    {ops::sigma_minus(), 0.5},
      {ops::proj0(), 0.5},         {ops::proj1(), 0.5}};
  for (const auto& [m, nu] : table) {
    const auto got = ancilla_nu(m);
    ASSERT_TRUE(got.has_value());
    EXPECT_NEAR(*got, nu, 1e-10);
  }
}

TEST(AncillaNu, QutritNineOperators) {
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      const auto got = ancilla_nu(ops::basis_op(3, r, c));
      ASSERT_TRUE(got.has_value()) << r << c;
      // Operators ending on the idle level |3> (index 2) leave the signal blocks untouched.
      EXPECT_NEAR(*got, c == 2 ? 0.0 : 0.5, 1e-10) << r << c;
    }
}

TEST(AncillaNu, ScaleCovariantAndNotProportional) {
  for (double c : {0.3, 2.0}) {
    EXPECT_NEAR(*ancilla_nu(c * ops::sigma_z()), c * c * 2.0, 1e-9);
    EXPECT_NEAR(*ancilla_nu(cplx(0.0, c) * ops::sigma_minus()), c * c * 0.5, 1e-9);
  }
  EXPECT_FALSE(ancilla_nu(ops::sigma_x() + ops::sigma_z()).has_value());
}

TEST(AncillaNoise, EffectiveExponentHeisenbergExample) {
  const double gz = 0.03, gm = 0.03, t = 1.7;
  const auto noise = uniform_qubit_noise(4, {{ops::sigma_z(), gz}, {ops::sigma_minus(), gm}},
                                         {{ops::sigma_z(), gz}, {ops::sigma_minus(), gm}});
  const auto plan = build_single_qubit_plan(noise);
  const auto ex = effective_exponent(plan, noise.ancilla_jumps, t);
  ASSERT_TRUE(ex.has_value());
  EXPECT_NEAR(*ex, 2 * (4 * gz + 4 * gm) * t + (2 * gz + 0.5 * gm) * t, 1e-12);
  EXPECT_NEAR(plan.delta, gz + gm / 4, 1e-12);
  EXPECT_NEAR(*effective_exponent(plan, {}, t), 2 * plan.a * t, 1e-15);
  EXPECT_NEAR(*effective_exponent(plan, {{ops::sigma_x(), 0.2, std::nullopt}}, t),
              2 * plan.a * t, 1e-12);
}

TEST(AncillaNoise, CorrectedMatchesOracleUncorrectedOffByExactFactor) {
  oracle::Rng rng(131);
  auto in = oracle::random_instance(rng, 2, 2);
  in.noise.add_ancilla(ops::sigma_z(), 0.04).add_ancilla(ops::sigma_minus(), 0.06);
  const auto plan = build_single_qubit_plan(in.noise);
  const double delta = 0.04 + 0.06 / 4;
  EXPECT_NEAR(plan.delta, delta, 1e-12);
  for (double t : {0.5, 2.0}) {
    const auto w = evolve_joint(in.hamiltonian(), in.noise, plan, in.state(), t);
    EXPECT_NEAR(mitigated_expectation(w, in.obs(), plan, t), in.ideal(t), 1e-5);
    const double partial = mitigated_expectation(w, in.obs(), without_ancilla_correction(plan), t);
    EXPECT_NEAR(partial, std::exp(-2 * delta * t) * in.ideal(t), 1e-5);
  }
}

TEST(AncillaNoise, NotProportionalMarksPlanUncorrectable) {
  auto noise = uniform_qubit_noise(1, {{ops::sigma_z(), 0.1}});
  noise.add_ancilla(ops::sigma_x() + ops::sigma_z(), 0.05);
  const auto plan = build_single_qubit_plan(noise);
  EXPECT_FALSE(plan.correctable);
  const auto w = initial_joint_state(plus_state(), plan);
  EXPECT_THROW(mitigated_expectation(w, ops::sigma_x(), plan, 0.0), ValueError);
  EXPECT_FALSE(effective_exponent(plan, noise.ancilla_jumps, 1.0).has_value());
}

// ---- estimators ----

TEST(Ratio, MatchesPrefactorFormAndSurvivesWrongDecayConstant) {
  oracle::Rng rng(137);
  const auto in = oracle::random_instance(rng, 2, 2);
  const auto plan = build_single_qubit_plan(in.noise);
  const double t = 1.3;
  const auto w = evolve_joint(in.hamiltonian(), in.noise, plan, in.state(), t);
  const double ratio = ratio_expectation(w, in.obs(), plan);
  EXPECT_NEAR(ratio, mitigated_expectation(w, in.obs(), plan, t), 1e-9);
  EXPECT_NEAR(ratio_expectation(initial_joint_state(in.state(), plan), in.obs(), plan),
              in.ideal(0.0), 1e-14);
  auto wrong = plan;
  wrong.a *= 1.3;
  EXPECT_NEAR(ratio_expectation(w, in.obs(), wrong), in.ideal(t), 1e-5);
  EXPECT_GT(std::abs(mitigated_expectation(w, in.obs(), wrong, t) - in.ideal(t)), 1e-3);
}

TEST(Ratio, VanishingDenominatorIsSignalled) {
  const auto plan = build_single_qubit_plan(uniform_qubit_noise(1, {{ops::sigma_z(), 0.1}}));
  const auto w = tensor_state(plus_state(), ops::proj0());
  EXPECT_THROW(ratio_expectation(w, ops::sigma_x(), plan), UnrecoverableExponent);
}

TEST(Estimators, LayoutMismatchRejected) {
  const auto plan = build_single_qubit_plan(uniform_qubit_noise(2, {{ops::sigma_z(), 0.1}}));
  const auto w = tensor_state(plus_state(), ops::proj0());
  EXPECT_THROW(mitigated_expectation(w, ops::sigma_x(), plan, 0.0), DimensionError);
  const auto qutrit = build_qutrit_plan(uniform_qubit_noise(1, {{ops::sigma_z(), 0.1}}));
  EXPECT_THROW(raw_joint_expectation(w, ops::sigma_x(), qutrit), DimensionError);
}

// ---- correlated noise ----

TEST(Correlated, BlockContributions) {
  oracle::Rng rng(139);
  const Layout joint{2, 2, 2};
  const Operator p = kron(ops::sigma_x(), ops::sigma_y());
  const Matrix pm = p.matrix();
  const Operator w(rng.ginibre(8), joint);
  const Matrix w01 = ancilla_block(w, 0, 1).matrix();
  auto block = [&](const Operator& l) {
    return ancilla_block(dissipator_apply(l, w), 0, 1).matrix();
  };
  for (auto kind : {CorrelatedKind::SigmaPlus, CorrelatedKind::SigmaMinus}) {
    const Operator l = kron(p, correlated_ancilla_operator(kind));
    EXPECT_LE(oracle::max_abs(block(l) + 0.5 * w01), 1e-10);
  }
  const Operator lz = kron(p, ops::sigma_z());
  EXPECT_LE(oracle::max_abs(block(lz) + pm * w01 * pm + w01), 1e-10);
  EXPECT_GT(oracle::max_abs(block(lz) + 2.0 * w01), 1e-3);
  const auto comp = correlated_noise_compensation(p, CorrelatedKind::SigmaZ, 1.0);
  ASSERT_EQ(comp.extra_jumps.size(), 1u);
  EXPECT_LE(oracle::max_abs(block(lz) + block(comp.extra_jumps[0]) + 2.0 * w01), 1e-10);
  EXPECT_EQ(comp.nu, 2.0);
  EXPECT_EQ(correlated_noise_compensation(p, CorrelatedKind::SigmaPlus, 0.3).delta, 0.5 * 0.5 * 0.3);
  EXPECT_THROW(correlated_noise_compensation(p, CorrelatedKind::SigmaX), ValueError);
  EXPECT_THROW(correlated_noise_compensation(ops::sigma_minus(), CorrelatedKind::SigmaZ),
               ValueError);
}

TEST(Correlated, EndToEndCompensationRecoversIdeal) {
  oracle::Rng rng(149);
  const auto in = oracle::random_instance(rng, 2, 1);
  const Operator p = kron(ops::sigma_z(), ops::sigma_x());
  const double rate = 0.07, t = 1.1;
  for (auto kind : {CorrelatedKind::SigmaPlus, CorrelatedKind::SigmaZ}) {
    auto plan = build_single_qubit_plan(in.noise);
    const auto comp = correlated_noise_compensation(p, kind, rate);
    std::vector<Operator> extra{std::sqrt(rate) * kron(p, correlated_ancilla_operator(kind))};
    for (const auto& e : comp.extra_jumps) extra.push_back(e);
    plan.delta += comp.delta;
    const auto l = joint_lindbladian(in.hamiltonian(), in.noise, plan).with_jumps(extra);
    const auto w = evolve(l, initial_joint_state(in.state(), plan), t, oracle::tight_rk45());
    EXPECT_NEAR(mitigated_expectation(w, in.obs(), plan, t), in.ideal(t), 1e-5);
  }
}

// ---- residual dynamics ----

TEST(Residual, MiscalibratedDephasing) {
  const double g = 0.1, t = 2.0;
  const auto truth = uniform_qubit_noise(1, {{ops::sigma_z(), g}});
  const auto est = uniform_qubit_noise(1, {{ops::sigma_z(), 1.1 * g}});
  const Operator h = 0.4 * ops::sigma_z();
  const auto res = residual_dynamics(truth, est, h, plus_state(), t, oracle::tight_rk45());
  EXPECT_NEAR(res.epsilon[0], 0.1 * g, 1e-15);
  EXPECT_LE(oracle::max_abs(res.joint_block.matrix() - res.direct_block.matrix()), 1e-6);
  // Mitigated <sx> = e^{2at} Tr[sx (W01 + W10)] = 2 e^{2at} Re Tr[sx W01].
  const double mitigated =
      res.plan.prefactor(t) * 2.0 * trace_product(ops::sigma_x().matrix(), res.joint_block.matrix()).real();
  const double ideal = std::cos(0.8 * t);
  EXPECT_NEAR(mitigated, std::exp(2 * res.epsilon[0] * t) * ideal, 1e-6);
}

TEST(Residual, ExactCalibrationAndUnderestimate) {
  oracle::Rng rng(151);
  const Operator h(rng.hermitian(2, 1.0));
  const auto rho = DensityMatrix::checked(Operator(rng.density(2)));
  const double g = 0.2, t = 1.0;
  const auto truth = uniform_qubit_noise(1, {{ops::sigma_minus(), g}});
  const auto same = residual_dynamics(truth, truth, h, rho, t, oracle::tight_rk45());
  const Matrix damped = 0.5 * std::exp(-2 * g * t) * oracle::unitary_evolve(h.matrix(), rho.matrix(), t);
  EXPECT_LE(oracle::max_abs(same.joint_block.matrix() - damped), 1e-7);

  // Underestimated rate: the block is an honest Lindblad evolution at rate g - g_est, damped.
  const double g_est = 0.12;
  const auto under = residual_dynamics(truth, uniform_qubit_noise(1, {{ops::sigma_minus(), g_est}}),
                                       h, rho, t, oracle::tight_rk45());
  const Matrix eff = oracle::lindblad_evolve(h.matrix(), {std::sqrt(g - g_est) * ops::sigma_minus().matrix()},
                                          rho.matrix(), t);
  EXPECT_LE(oracle::max_abs(under.joint_block.matrix() - 0.5 * std::exp(-2 * g_est * t) * eff), 1e-6);
  EXPECT_LE(oracle::max_abs(under.joint_block.matrix() - under.direct_block.matrix()), 1e-6);
}

// ---- time-dependent noise ----

TEST(TimeDependent, GrowingRatesAreMitigated) {
  oracle::Rng rng(157);
  const Operator h(rng.hermitian(2, 1.5));
  const auto rho = DensityMatrix::checked(Operator(rng.density(2)));
  const Operator a(rng.hermitian(2, 1.0));
  const double g = 0.1, t = 1.5;
  auto noise_at = [g](double s) {
    return uniform_qubit_noise(1, {{ops::sigma_minus(), g * (1 + s)}, {ops::sigma_z(), 0.5 * g}});
  };
  const auto tdm = build_time_dependent_mitigation(h, noise_at);
  const auto res = evolve_with_exponent(tdm.joint, initial_joint_state(rho, tdm.plan_at_zero), t,
                                        tdm.decay_rate, oracle::tight_rk45());
  // a(s) = g (1 + s) + g / 2 for these channels.
  EXPECT_NEAR(res.exponent, g * (t + 0.5 * t * t) + 0.5 * g * t, 1e-6 * res.exponent);
  const double expected =
      (a.matrix() * oracle::unitary_evolve(h.matrix(), rho.matrix(), t)).trace().real();
  EXPECT_NEAR(mitigated_expectation_from_exponent(res.state, a, tdm.plan_at_zero, res.exponent),
              expected, 1e-5);
}

// ---- serialization ----

TEST(PlanIo, RoundTrip) {
  const auto noise = uniform_qubit_noise(2, {{ops::sigma_minus(), 0.1}}, {{ops::sigma_z(), 0.02}});
  const auto plan = build_alt_qubit_plan(noise);
  const auto back = io::plan_from_json(io::plan_to_json(plan));
  EXPECT_EQ(back.variant, plan.variant);
  EXPECT_DOUBLE_EQ(back.a, plan.a);
  EXPECT_DOUBLE_EQ(back.delta, plan.delta);
  ASSERT_EQ(back.joint_jumps.size(), plan.joint_jumps.size());
  for (std::size_t k = 0; k < plan.joint_jumps.size(); ++k) {
    EXPECT_EQ(back.joint_jumps[k].layout(), plan.joint_jumps[k].layout());
    EXPECT_LE(oracle::max_abs(back.joint_jumps[k].matrix() - plan.joint_jumps[k].matrix()), 0.0);
  }
}

}  // namespace
