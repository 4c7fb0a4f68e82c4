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

#ifndef LMIT_MITIGATION_HPP
#define LMIT_MITIGATION_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lmit/density_matrix.hpp"
#include "lmit/lindblad.hpp"
#include "lmit/noise.hpp"
#include "lmit/operator.hpp"

namespace lmit {

enum class Variant { SingleQubit, SimplifiedPauli, AltQubitProjector, MultiAncilla, Qutrit };

inline std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::SingleQubit: return "single-qubit";
    case Variant::SimplifiedPauli: return "simplified-pauli";
    case Variant::AltQubitProjector: return "alt-qubit-projector";
    case Variant::MultiAncilla: return "multi-ancilla";
    case Variant::Qutrit: return "qutrit";
  }
  return "unknown";
}

inline Variant parse_variant(std::string_view name) {
  for (auto v : {Variant::SingleQubit, Variant::SimplifiedPauli, Variant::AltQubitProjector,
                 Variant::MultiAncilla, Variant::Qutrit})
    if (variant_name(v) == name) return v;
  throw ValueError("unknown mitigation variant '" + std::string(name) + "'");
}

/// Everything needed to run and post-process one mitigation protocol.
struct MitigationPlan {
  Variant variant = Variant::SingleQubit;
  Layout system_layout;
  Layout ancilla_layout;
  /// Engineered joint jump operators (the mitigation generator), on the joint layout.
  std::vector<Operator> joint_jumps;
  /// Decay constant; for multi-ancilla plans the sum of the per-ancilla constants.
  double a = 0.0;
  /// Ancilla-noise correction; the prefactor is exp(2 (a + delta) t).
  double delta = 0.0;
  /// Per-ancilla decay constants (multi-ancilla plans only).
  std::vector<double> ancilla_rates;
  /// Ancilla observable measured jointly with the system observable.
  Operator measurement;
  /// Ancilla initial state.
  Operator initial_ancilla;
  /// False when declared ancilla noise is not correctable by rescaling.
  bool correctable = true;

  [[nodiscard]] Layout joint_layout() const { return concat(system_layout, ancilla_layout); }
  [[nodiscard]] std::size_t ancilla_factors() const { return ancilla_layout.size(); }
  [[nodiscard]] double log_prefactor(double t) const { return 2.0 * (a + delta) * t; }
  [[nodiscard]] double prefactor(double t) const { return std::exp(log_prefactor(t)); }
};

namespace detail {

inline Operator plus_state() {
  Vector v(2);
  v << 1.0, 1.0;
  return projector(v);
}

inline Operator chi_state() {
  Vector v(3);
  v << 1.0, 1.0, 0.0;
  return projector(v);
}

struct SpectralPart {
  double a = 0.0;
  Operator sum;  // sum_k L_k^dagger L_k
  Operator s;    // a I - sum
  bool s_vanishes = true;
};

inline SpectralPart spectral_part(const std::vector<Operator>& amps, const Layout& layout) {
  SpectralPart p;
  p.sum = jump_sum(amps, layout);
  p.a = amps.empty() ? 0.0 : hermitian_lambda_max(p.sum);
  p.s = p.a * Operator::identity(layout) - p.sum;
  p.s_vanishes = p.s.max_abs() <= 1e-10 * p.a;
  return p;
}

}  // namespace detail

namespace detail {

inline void apply_ancilla_correction(MitigationPlan& plan, const NoiseModel& noise);

}  // namespace detail

/// Single qubit ancilla with jumps L_k (x) sz, sqrt(S) (x) sz, sqrt(S) (x) I, S = aI - sum L^dag L.
/// Falls back to the simplified Pauli form when S vanishes.
inline MitigationPlan build_single_qubit_plan(const NoiseModel& noise) {
  noise.validate();
  MitigationPlan plan;
  plan.system_layout = noise.system_layout;
  plan.ancilla_layout = {2};
  const auto amps = noise.system_amplitudes();
  const auto sp = detail::spectral_part(amps, noise.system_layout);
  plan.a = sp.a;
  plan.variant = sp.s_vanishes ? Variant::SimplifiedPauli : Variant::SingleQubit;
  const Operator sz = ops::sigma_z();
  for (const auto& l : amps) plan.joint_jumps.push_back(kron(l, sz));
  if (!sp.s_vanishes) {
    const Operator root = psd_sqrt(sp.s);
    plan.joint_jumps.push_back(kron(root, sz));
    plan.joint_jumps.push_back(kron(root, ops::identity(2)));
  }
  plan.measurement = ops::sigma_x();
  plan.initial_ancilla = detail::plus_state();
  detail::apply_ancilla_correction(plan, noise);
  return plan;
}

/// Single qubit ancilla with projector dissipators sqrt(2S) (x) |0><0| and sqrt(2S) (x) |1><1|.
inline MitigationPlan build_alt_qubit_plan(const NoiseModel& noise) {
  noise.validate();
  MitigationPlan plan;
  plan.system_layout = noise.system_layout;
  plan.ancilla_layout = {2};
  const auto amps = noise.system_amplitudes();
  const auto sp = detail::spectral_part(amps, noise.system_layout);
  plan.a = sp.a;
  plan.variant = sp.s_vanishes ? Variant::SimplifiedPauli : Variant::AltQubitProjector;
  const Operator sz = ops::sigma_z();
  for (const auto& l : amps) plan.joint_jumps.push_back(kron(l, sz));
  if (!sp.s_vanishes) {
    const Operator root2 = psd_sqrt(2.0 * sp.s);
    plan.joint_jumps.push_back(kron(root2, ops::proj0()));
    plan.joint_jumps.push_back(kron(root2, ops::proj1()));
  }
  plan.measurement = ops::sigma_x();
  plan.initial_ancilla = detail::plus_state();
  detail::apply_ancilla_correction(plan, noise);
  return plan;
}

/// One qubit ancilla per group of system sites. `assignment[site]` names the ancilla serving
/// that site; empty means one ancilla per site. Every system jump must be local to one site.
inline MitigationPlan build_multi_ancilla_plan(const NoiseModel& noise,
                                               std::vector<std::size_t> assignment = {}) {
  noise.validate();
  const std::size_t sites = noise.system_layout.size();
  if (assignment.empty()) {
    assignment.resize(sites);
    for (std::size_t s = 0; s < sites; ++s) assignment[s] = s;
  }
  if (assignment.size() != sites)
    throw DimensionError("multi-ancilla assignment must list one ancilla per system site");
  std::size_t n_anc = 0;
  for (auto a : assignment) n_anc = std::max(n_anc, a + 1);

  MitigationPlan plan;
  plan.variant = Variant::MultiAncilla;
  plan.system_layout = noise.system_layout;
  plan.ancilla_layout = Layout(n_anc, 2);
  std::vector<std::vector<Operator>> groups(n_anc);
  for (const auto& j : noise.system_jumps) {
    auto site = j.site;
    if (!site) site = local_support(j.op);
    if (!site)
      throw ValueError("multi-ancilla protocol requires every system jump to be local to a site");
    groups[assignment[*site]].push_back(j.amplitude());
  }
  const Operator sz = ops::sigma_z();
  const Operator id_anc = Operator::identity(plan.ancilla_layout);
  for (std::size_t l = 0; l < n_anc; ++l) {
    const Operator sz_l = embed_local(sz, l, plan.ancilla_layout);
    const auto sp = detail::spectral_part(groups[l], noise.system_layout);
    plan.ancilla_rates.push_back(sp.a);
    plan.a += sp.a;
    for (const auto& op : groups[l]) plan.joint_jumps.push_back(kron(op, sz_l));
    if (!sp.s_vanishes) {
      const Operator root = psd_sqrt(sp.s);
      plan.joint_jumps.push_back(kron(root, sz_l));
      plan.joint_jumps.push_back(kron(root, id_anc));
    }
  }
  std::vector<Operator> xs(n_anc, ops::sigma_x());
  std::vector<Operator> plus(n_anc, detail::plus_state());
  plan.measurement = n_anc ? kron(xs) : Operator::identity({1});
  plan.initial_ancilla = n_anc ? kron(plus) : Operator::identity({1});
  detail::apply_ancilla_correction(plan, noise);
  return plan;
}

/// Three-level ancilla {|1>,|2>,|3>} (indices 0,1,2): jumps sqrt(2S) (x) |3><1|,
/// sqrt(2S) (x) |3><2| and L_k (x) (|1><1| - |2><2|); initial (|1>+|2>)/sqrt2.
inline MitigationPlan build_qutrit_plan(const NoiseModel& noise) {
  noise.validate();
  MitigationPlan plan;
  plan.variant = Variant::Qutrit;
  plan.system_layout = noise.system_layout;
  plan.ancilla_layout = {3};
  const auto amps = noise.system_amplitudes();
  const auto sp = detail::spectral_part(amps, noise.system_layout);
  plan.a = sp.a;
  const Operator szt = ops::qutrit_sigma_z();
  for (const auto& l : amps) plan.joint_jumps.push_back(kron(l, szt));
  if (!sp.s_vanishes) {
    const Operator root2 = psd_sqrt(2.0 * sp.s);
    plan.joint_jumps.push_back(kron(root2, ops::basis_op(3, 2, 0)));
    plan.joint_jumps.push_back(kron(root2, ops::basis_op(3, 2, 1)));
  }
  plan.measurement = ops::qutrit_sigma_x();
  plan.initial_ancilla = detail::chi_state();
  detail::apply_ancilla_correction(plan, noise);
  return plan;
}

inline MitigationPlan build_plan(Variant v, const NoiseModel& noise) {
  switch (v) {
    case Variant::SingleQubit: return build_single_qubit_plan(noise);
    case Variant::SimplifiedPauli: {
      auto plan = build_single_qubit_plan(noise);
      if (plan.variant != Variant::SimplifiedPauli)
        throw ValueError("simplified-pauli needs sum L^dagger L proportional to the identity");
      return plan;
    }
    case Variant::AltQubitProjector: return build_alt_qubit_plan(noise);
    case Variant::MultiAncilla: return build_multi_ancilla_plan(noise);
    case Variant::Qutrit: return build_qutrit_plan(noise);
  }
  throw ValueError("unknown variant");
}

/// H (x) I on the joint layout, system jumps sqrt(gamma) L (x) I, the plan's joint jumps and,
/// when `with_ancilla_noise`, sqrt(Gamma) I (x) M on every ancilla factor.
inline Lindbladian joint_lindbladian(const Operator& h, const NoiseModel& noise,
                                     const MitigationPlan& plan, bool with_ancilla_noise = true) {
  if (h.layout() != plan.system_layout)
    throw DimensionError("Hamiltonian layout " + layout_string(h.layout()) +
                         " differs from plan system layout " + layout_string(plan.system_layout));
  const Operator id_anc = Operator::identity(plan.ancilla_layout);
  std::vector<Operator> jumps;
  for (const auto& l : noise.system_amplitudes()) jumps.push_back(kron(l, id_anc));
  for (const auto& l : plan.joint_jumps) jumps.push_back(l);
  if (with_ancilla_noise) {
    const Operator id_sys = Operator::identity(plan.system_layout);
    for (std::size_t f = 0; f < plan.ancilla_factors(); ++f)
      for (const auto& m : noise.ancilla_jumps)
        jumps.push_back(kron(id_sys, embed_local(m.amplitude(), f, plan.ancilla_layout)));
  }
  return {kron(h, id_anc), std::move(jumps)};
}

/// The unmitigated experiment: H with the system noise only.
inline Lindbladian noisy_lindbladian(const Operator& h, const NoiseModel& noise) {
  return {h, noise.system_amplitudes()};
}

inline DensityMatrix initial_joint_state(const DensityMatrix& rho0, const MitigationPlan& plan) {
  if (rho0.layout() != plan.system_layout)
    throw DimensionError("initial state layout differs from plan system layout");
  return tensor_state(rho0, plan.initial_ancilla);
}

/// A (x) measurement on the joint layout.
inline Operator joint_observable(const Operator& a, const MitigationPlan& plan) {
  if (a.layout() != plan.system_layout)
    throw DimensionError("observable layout " + layout_string(a.layout()) +
                         " differs from plan system layout " + layout_string(plan.system_layout));
  return kron(a, plan.measurement);
}

namespace detail {

inline double raw_joint_value(const DensityMatrix& w, const Operator& a,
                              const MitigationPlan& plan) {
  if (w.layout() != plan.joint_layout())
    throw DimensionError("joint state layout " + layout_string(w.layout()) +
                         " differs from plan joint layout " + layout_string(plan.joint_layout()));
  const Operator obs = joint_observable(a, plan);
  const cplx v = trace_product(obs.matrix(), w.matrix());
  const double scale = std::max(obs.max_abs(), 1e-300);
  if (std::abs(v.imag()) > 1e-9 * scale)
    throw ValueError("joint expectation has imaginary part " + std::to_string(v.imag()) +
                     "; observable must be Hermitian");
  return v.real();
}

}  // namespace detail

/// Tr[(A (x) measurement) W], the quantity estimated from joint shots.
inline double raw_joint_expectation(const DensityMatrix& w, const Operator& a,
                                    const MitigationPlan& plan) {
  return detail::raw_joint_value(w, a, plan);
}

/// exp(2 (a + delta) t) Tr[(A (x) measurement) W(t)].
inline double mitigated_expectation(const DensityMatrix& w, const Operator& a,
                                    const MitigationPlan& plan, double t) {
  if (!plan.correctable)
    throw ValueError("plan declares ancilla noise that is not correctable by post-processing");
  return plan.prefactor(t) * detail::raw_joint_value(w, a, plan);
}

/// exp(2 * integrated_rate) Tr[(A (x) measurement) W], for time-dependent decay constants
/// where integrated_rate = int_0^t (a(s) + delta) ds.
inline double mitigated_expectation_from_exponent(const DensityMatrix& w, const Operator& a,
                                                  const MitigationPlan& plan,
                                                  double integrated_rate) {
  return std::exp(2.0 * integrated_rate) * detail::raw_joint_value(w, a, plan);
}

/// Tr[(A (x) meas) W] / Tr[(I (x) meas) W]; needs neither a nor delta.
inline double ratio_expectation(const DensityMatrix& w, const Operator& a,
                                const MitigationPlan& plan) {
  const double num = detail::raw_joint_value(w, a, plan);
  const double den =
      detail::raw_joint_value(w, Operator::identity(plan.system_layout), plan);
  if (std::abs(den) <= 1e-12)
    throw UnrecoverableExponent("ratio estimator denominator vanished (" + std::to_string(den) +
                                "); decay exponent is unrecoverable");
  return num / den;
}

/// nu such that <i| D[I (x) M](W) |j> = -nu W_ij on the signal-carrying blocks (0,1) and (1,0)
/// of the ancilla basis, or nullopt when no such nonnegative scalar exists.
/// Computed numerically on random W, so it covers scalar multiples and any ancilla dimension.
/// The draws are Hermitian with W_01 = W_10, the symmetry the protocol maintains; without it
/// sigma_x would mix the two blocks instead of leaving them alone.
inline std::optional<double> ancilla_nu(const Operator& m) {
  const std::size_t da = m.dim();
  if (da < 2) throw DimensionError("ancilla_nu: ancilla dimension must be at least 2");
  const Layout layout{2, da};
  const Operator lifted = kron(ops::identity(2), m);
  std::mt19937_64 rng(0x5eeda11cu);
  std::normal_distribution<double> normal;
  std::optional<double> nu;
  for (int draw = 0; draw < 3; ++draw) {
    const auto n = static_cast<Eigen::Index>(2 * da);
    const auto step = static_cast<Eigen::Index>(da);
    Matrix raw(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r) raw(r, c) = cplx{normal(rng), normal(rng)};
    const Matrix herm = raw + raw.adjoint();
    Matrix sym = herm;
    // Copy the (0,1) block onto (1,0) after making it Hermitian.
    for (Eigen::Index c = 0; c < 2; ++c)
      for (Eigen::Index r = 0; r < 2; ++r) {
        const cplx v =
            0.5 * (herm(r * step, c * step + 1) + std::conj(herm(c * step, r * step + 1)));
        sym(r * step, c * step + 1) = v;
        sym(r * step + 1, c * step) = v;
      }
    const Operator w(sym, layout);
    const Operator d = dissipator_apply(lifted, w);
    for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 0}}) {
      const Matrix wij = ancilla_block(w, i, j).matrix();
      const Matrix cij = ancilla_block(d, i, j).matrix();
      const cplx fit = -(wij.adjoint() * cij).trace() / wij.squaredNorm();
      const double scale = std::max(1.0, wij.cwiseAbs().maxCoeff()) *
                           std::max(1.0, m.max_abs() * m.max_abs());
      if (std::abs(fit.imag()) > 1e-10 * std::max(1.0, std::abs(fit))) return std::nullopt;
      if ((cij + fit.real() * wij).cwiseAbs().maxCoeff() > 1e-10 * scale) return std::nullopt;
      if (nu && std::abs(*nu - fit.real()) > 1e-10 * std::max(1.0, std::abs(*nu)))
        return std::nullopt;
      if (!nu) nu = fit.real();
    }
  }
  if (*nu < -1e-12) return std::nullopt;
  return std::max(*nu, 0.0);
}

/// delta = (number of ancilla factors) * 1/2 sum_m nu_m Gamma_m, or nullopt if any channel is
/// not proportional.
inline std::optional<double> ancilla_correction(const MitigationPlan& plan,
                                                const std::vector<JumpSpec>& ancilla_jumps) {
  double sum = 0.0;
  for (const auto& j : ancilla_jumps) {
    if (plan.ancilla_layout.empty() || j.op.dim() != plan.ancilla_layout.front())
      throw DimensionError("ancilla jump of dimension " + std::to_string(j.op.dim()) +
                           " does not fit ancilla layout " + layout_string(plan.ancilla_layout));
    const auto nu = ancilla_nu(j.op);
    if (!nu) return std::nullopt;
    sum += *nu * j.rate;
  }
  return 0.5 * sum * static_cast<double>(plan.ancilla_factors());
}

/// 2 a t + sum_m nu_m Gamma_m t (per ancilla factor); nullopt when uncorrectable.
inline std::optional<double> effective_exponent(const MitigationPlan& plan,
                                                const std::vector<JumpSpec>& ancilla_jumps,
                                                double t) {
  const auto delta = ancilla_correction(plan, ancilla_jumps);
  if (!delta) return std::nullopt;
  return 2.0 * (plan.a + *delta) * t;
}

namespace detail {

inline void apply_ancilla_correction(MitigationPlan& plan, const NoiseModel& noise) {
  const auto delta = ancilla_correction(plan, noise.ancilla_jumps);
  plan.correctable = delta.has_value();
  plan.delta = delta.value_or(0.0);
}

}  // namespace detail

/// Same plan with the ancilla-noise correction dropped (system-noise correction only).
inline MitigationPlan without_ancilla_correction(MitigationPlan plan) {
  plan.delta = 0.0;
  plan.correctable = true;
  return plan;
}

enum class CorrelatedKind { SigmaPlus, SigmaMinus, SigmaZ, SigmaX, SigmaY };

struct CorrelatedCompensation {
  /// Extra system noise to engineer, as joint-layout amplitudes.
  std::vector<Operator> extra_jumps;
  /// Block contribution after compensation is -nu * rate * W_ij.
  double nu = 0.0;
  /// Contribution to delta (prefactor exponent 2 delta t).
  double delta = 0.0;
};

/// Handling of correlated system-ancilla noise D[sqrt(rate) P (x) s] for a Pauli string P on
/// a single qubit ancilla. s = sigma_pm is correctable as is; s = sigma_z needs the added
/// channel D[sqrt(rate) P (x) I].
inline CorrelatedCompensation correlated_noise_compensation(const Operator& pauli_string,
                                                            CorrelatedKind kind,
                                                            double rate = 1.0) {
  const Operator sq = pauli_string * pauli_string;
  if (!pauli_string.is_hermitian(1e-12) ||
      (sq.matrix() - Matrix::Identity(sq.matrix().rows(), sq.matrix().cols()))
              .cwiseAbs()
              .maxCoeff() > 1e-12)
    throw ValueError("correlated noise compensation needs a Hermitian unitary Pauli string");
  if (!(rate >= 0.0)) throw ValueError("correlated noise rate must be nonnegative");
  CorrelatedCompensation out;
  switch (kind) {
    case CorrelatedKind::SigmaPlus:
    case CorrelatedKind::SigmaMinus:
      out.nu = 0.5;
      break;
    case CorrelatedKind::SigmaZ:
      out.extra_jumps.push_back(kron(std::sqrt(rate) * pauli_string, ops::identity(2)));
      out.nu = 2.0;
      break;
    default:
      throw ValueError("correlated noise with this ancilla operator is not correctable");
  }
  out.delta = 0.5 * out.nu * rate;
  return out;
}

inline Operator correlated_ancilla_operator(CorrelatedKind kind) {
  switch (kind) {
    case CorrelatedKind::SigmaPlus: return ops::sigma_plus();
    case CorrelatedKind::SigmaMinus: return ops::sigma_minus();
    case CorrelatedKind::SigmaZ: return ops::sigma_z();
    case CorrelatedKind::SigmaX: return ops::sigma_x();
    case CorrelatedKind::SigmaY: return ops::sigma_y();
  }
  throw ValueError("unknown correlated kind");
}

struct ResidualDynamics {
  /// <0| W(t) |1> from the full joint evolution with the mis-calibrated plan.
  Operator joint_block;
  /// Direct integration of dX/dt = -i[H,X] - sum_k eps_k D[L_k](X) - 2 a_est X, X(0) = rho0/2.
  Operator direct_block;
  MitigationPlan plan;
  std::vector<double> epsilon;  // estimated minus true rate, per channel
};

/// Mitigation built from mis-estimated rates while the device has the true ones.
inline ResidualDynamics residual_dynamics(const NoiseModel& noise_true,
                                          const NoiseModel& noise_estimated, const Operator& h,
                                          const DensityMatrix& rho0, double t,
                                          const IntegratorConfig& cfg = {}) {
  noise_true.validate();
  noise_estimated.validate();
  if (noise_true.system_jumps.size() != noise_estimated.system_jumps.size())
    throw ValueError("residual_dynamics: channel count mismatch");
  ResidualDynamics out;
  for (std::size_t k = 0; k < noise_true.system_jumps.size(); ++k) {
    const auto& a = noise_true.system_jumps[k].op.matrix();
    const auto& b = noise_estimated.system_jumps[k].op.matrix();
    if (a.rows() != b.rows() || (a - b).cwiseAbs().maxCoeff() > 1e-12)
      throw ValueError("residual_dynamics: true and estimated channels must share operators");
    out.epsilon.push_back(noise_estimated.system_jumps[k].rate - noise_true.system_jumps[k].rate);
  }
  const NoiseModel exp_noise = noise_true.without_ancilla_noise();
  out.plan = build_single_qubit_plan(noise_estimated.without_ancilla_noise());
  const Lindbladian joint = joint_lindbladian(h, exp_noise, out.plan, false);
  const DensityMatrix w = evolve(joint, initial_joint_state(rho0, out.plan), t, cfg);
  out.joint_block = ancilla_block(w, 0, 1);

  std::vector<Matrix> ls;
  for (const auto& j : noise_true.system_jumps) ls.push_back(j.op.matrix());
  const Matrix hm = h.matrix();
  const double a_est = out.plan.a;
  const auto eps = out.epsilon;
  auto rhs = [&](double, const Matrix& x, Matrix& dx) {
    dx = -kI * (hm * x - x * hm) - 2.0 * a_est * x;
    for (std::size_t k = 0; k < ls.size(); ++k) {
      const Matrix& l = ls[k];
      const Matrix ldl = l.adjoint() * l;
      dx -= eps[k] * (l * x * l.adjoint() - 0.5 * (ldl * x + x * ldl));
    }
  };
  const double dt = default_step(joint);
  Matrix x = integrate_matrix_ode(rhs, Matrix(0.5 * rho0.matrix()), t, dt, cfg);
  out.direct_block = Operator(std::move(x), rho0.layout());
  return out;
}

/// Joint generator whose noise (and hence plan) varies in time. `noise_at(t)` must keep its
/// layouts fixed. Returns the generator and a(t) for the prefactor integral.
struct TimeDependentMitigation {
  Lindbladian joint;
  std::function<double(double)> decay_rate;
  MitigationPlan plan_at_zero;
};

inline TimeDependentMitigation build_time_dependent_mitigation(
    const Operator& h, std::function<NoiseModel(double)> noise_at,
    Variant variant = Variant::SingleQubit) {
  const NoiseModel n0 = noise_at(0.0);
  MitigationPlan p0 = build_plan(variant, n0);
  const Layout joint_layout = p0.joint_layout();
  auto jumps = [noise_at, variant, p0](double t) {
    const NoiseModel n = noise_at(t);
    const MitigationPlan p = build_plan(variant, n);
    if (p.joint_layout() != p0.joint_layout())
      throw DimensionError("time-dependent noise changed the plan layout");
    const Lindbladian l = joint_lindbladian(Operator::zero(p.system_layout), n, p, true);
    return l.jumps(0.0);
  };
  auto rate = [noise_at, variant](double t) {
    const MitigationPlan p = build_plan(variant, noise_at(t));
    return p.a + p.delta;
  };
  Lindbladian joint(joint_layout, nullptr, jumps, kron(h, Operator::identity(p0.ancilla_layout)));
  return {std::move(joint), rate, std::move(p0)};
}

}  // namespace lmit

#endif  // LMIT_MITIGATION_HPP
