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

#ifndef LMIT_LINDBLAD_HPP
#define LMIT_LINDBLAD_HPP

#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lmit/density_matrix.hpp"
#include "lmit/ode.hpp"
#include "lmit/operator.hpp"

namespace lmit {

/// Generator -i[H, .] + sum_k D[L_k]. Jump amplitudes carry their rates (sqrt(gamma) L).
/// Either part may instead be supplied as a callable of time.
class Lindbladian {
 public:
  using HamiltonianFn = std::function<Operator(double)>;
  using JumpsFn = std::function<std::vector<Operator>(double)>;

  Lindbladian() = default;

  Lindbladian(Operator hamiltonian, std::vector<Operator> jumps)
      : hamiltonian_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
    validate(hamiltonian_, jumps_);
  }

  /// Time-dependent generator; either callable may be empty, in which case the constant part is
  /// used. `layout` fixes the Hilbert space.
  Lindbladian(Layout layout, HamiltonianFn h, JumpsFn jumps, Operator constant_h = {},
              std::vector<Operator> constant_jumps = {})
      : hamiltonian_(constant_h.dim() ? std::move(constant_h) : Operator::zero(layout)),
        jumps_(std::move(constant_jumps)),
        hamiltonian_fn_(std::move(h)),
        jumps_fn_(std::move(jumps)) {
    if (hamiltonian_.layout() != layout)
      throw DimensionError("constant Hamiltonian layout differs from declared layout");
    validate(hamiltonian_, jumps_);
  }

  [[nodiscard]] const Layout& layout() const noexcept { return hamiltonian_.layout(); }
  [[nodiscard]] std::size_t dim() const noexcept { return hamiltonian_.dim(); }
  [[nodiscard]] bool time_dependent() const noexcept {
    return static_cast<bool>(hamiltonian_fn_) || static_cast<bool>(jumps_fn_);
  }

  [[nodiscard]] Operator hamiltonian(double t = 0.0) const {
    if (!hamiltonian_fn_) return hamiltonian_;
    Operator h = hamiltonian_fn_(t);
    if (h.layout() != layout()) throw DimensionError("time-dependent Hamiltonian changed layout");
    if (!h.is_hermitian(1e-12))
      throw ValueError("Hamiltonian is not Hermitian at t = " + std::to_string(t));
    return h;
  }

  [[nodiscard]] std::vector<Operator> jumps(double t = 0.0) const {
    if (!jumps_fn_) return jumps_;
    std::vector<Operator> out = jumps_;
    for (auto& l : jumps_fn_(t)) {
      if (l.layout() != layout())
        throw DimensionError("time-dependent jump operator has layout " +
                             layout_string(l.layout()) + ", expected " + layout_string(layout()));
      out.push_back(std::move(l));
    }
    return out;
  }

  /// Largest eigenvalue of sum_k L_k^dagger L_k at time t.
  [[nodiscard]] double decay_rate(double t = 0.0) const {
    const auto js = jumps(t);
    if (js.empty()) return 0.0;
    return hermitian_lambda_max(jump_sum(js, layout()));
  }

  /// Appends constant jump operators.
  [[nodiscard]] Lindbladian with_jumps(std::span<const Operator> extra) const {
    Lindbladian out = *this;
    for (const auto& l : extra) out.jumps_.push_back(l);
    validate(out.hamiltonian_, out.jumps_);
    return out;
  }

 private:
  static void validate(const Operator& h, const std::vector<Operator>& jumps) {
    if (!h.is_hermitian(1e-12)) throw ValueError("Hamiltonian is not Hermitian");
    for (const auto& l : jumps)
      if (l.layout() != h.layout())
        throw DimensionError("jump operator layout " + layout_string(l.layout()) +
                             " differs from Hamiltonian layout " + layout_string(h.layout()));
  }

  Operator hamiltonian_;
  std::vector<Operator> jumps_;
  HamiltonianFn hamiltonian_fn_;
  JumpsFn jumps_fn_;
};

namespace detail {

/// Jump operator prepared for repeated application of rho -> L rho L^dagger.
/// Operators with at most one nonzero per row (Paulis, ladder operators, projectors, diagonal
/// operators and their tensor products) take an O(d^2) path.
struct JumpKernel {
  bool monomial = false;
  std::vector<Eigen::Index> col;  // -1 for an empty row
  std::vector<cplx> val;
  Matrix dense;

  explicit JumpKernel(const Matrix& l) {
    const auto d = l.rows();
    col.assign(static_cast<std::size_t>(d), -1);
    val.assign(static_cast<std::size_t>(d), cplx{});
    monomial = true;
    for (Eigen::Index r = 0; r < d && monomial; ++r)
      for (Eigen::Index c = 0; c < d; ++c) {
        if (l(r, c) == cplx{}) continue;
        if (col[static_cast<std::size_t>(r)] != -1) {
          monomial = false;
          break;
        }
        col[static_cast<std::size_t>(r)] = c;
        val[static_cast<std::size_t>(r)] = l(r, c);
      }
    if (!monomial) {
      dense = l;
      col.clear();
      val.clear();
    }
  }

  /// out += L rho L^dagger
  void accumulate(const Matrix& rho, Matrix& out, Matrix& scratch) const {
    if (!monomial) {
      scratch.noalias() = dense * rho;
      out.noalias() += scratch * dense.adjoint();
      return;
    }
    const auto d = static_cast<Eigen::Index>(col.size());
    for (Eigen::Index s = 0; s < d; ++s) {
      const auto cs = col[static_cast<std::size_t>(s)];
      if (cs < 0) continue;
      const cplx vs = std::conj(val[static_cast<std::size_t>(s)]);
      for (Eigen::Index r = 0; r < d; ++r) {
        const auto cr = col[static_cast<std::size_t>(r)];
        if (cr < 0) continue;
        out(r, s) += val[static_cast<std::size_t>(r)] * rho(cr, cs) * vs;
      }
    }
  }
};

/// rho -> G rho + rho G^dagger + sum_k L_k rho L_k^dagger with G = -iH - 1/2 sum_k L_k^dagger L_k.
class CompiledGenerator {
 public:
  CompiledGenerator(const Operator& h, const std::vector<Operator>& jumps) {
    const auto d = static_cast<Eigen::Index>(h.dim());
    Matrix k = Matrix::Zero(d, d);
    for (const auto& l : jumps) {
      k.noalias() += l.matrix().adjoint() * l.matrix();
      kernels_.emplace_back(l.matrix());
    }
    g_ = -kI * h.matrix() - 0.5 * k;
    g_adj_ = g_.adjoint();
    scratch_.resize(d, d);
  }

  /// When `hermitian` is set, rho is assumed Hermitian and rho G^dagger = (G rho)^dagger.
  void apply(const Matrix& rho, Matrix& out, bool hermitian) {
    out.noalias() = g_ * rho;
    if (hermitian) {
      out += out.adjoint().eval();
    } else {
      out.noalias() += rho * g_adj_;
    }
    for (const auto& k : kernels_) k.accumulate(rho, out, scratch_);
  }

 private:
  Matrix g_;
  Matrix g_adj_;
  Matrix scratch_;
  std::vector<JumpKernel> kernels_;
};

/// Caches the compiled generator for constant Lindbladians, rebuilds per time otherwise.
class GeneratorCache {
 public:
  explicit GeneratorCache(const Lindbladian& l) : l_(l) {
    if (!l_.time_dependent()) constant_.emplace(l_.hamiltonian(0.0), l_.jumps(0.0));
  }
  CompiledGenerator& at(double t) {
    if (constant_) return *constant_;
    if (!current_ || current_t_ != t) {
      current_.emplace(l_.hamiltonian(t), l_.jumps(t));
      current_t_ = t;
    }
    return *current_;
  }

 private:
  const Lindbladian& l_;
  std::optional<CompiledGenerator> constant_;
  std::optional<CompiledGenerator> current_;
  double current_t_ = 0.0;
};

}  // namespace detail

/// Right-hand side -i[H, rho] + sum_k D[L_k](rho) at time t. Valid for any square rho.
inline Operator lindblad_rhs(const Lindbladian& l, const Operator& rho, double t = 0.0) {
  if (rho.layout() != l.layout())
    throw DimensionError("lindblad_rhs: state layout " + layout_string(rho.layout()) +
                         " vs generator layout " + layout_string(l.layout()));
  detail::CompiledGenerator gen(l.hamiltonian(t), l.jumps(t));
  Matrix out(rho.matrix().rows(), rho.matrix().cols());
  gen.apply(rho.matrix(), out, false);
  return {std::move(out), rho.layout()};
}

/// Engine default step: min(1e-3, 0.01 / (||H|| + a)) evaluated at t0.
inline double default_step(const Lindbladian& l, double t0 = 0.0) {
  const double scale = spectral_norm_hermitian(l.hamiltonian(t0)) + l.decay_rate(t0);
  return scale > 0.0 ? std::min(1e-3, 0.01 / scale) : 1e-3;
}

struct EvolutionReport {
  IntegrationStats stats;
  double min_eigenvalue = 0.0;
  double trace_drift = 0.0;
  double step = 0.0;  // fixed step used (RK4) or 0 for adaptive
};

namespace detail {

inline void monitor_positivity(const Matrix& rho, EvolutionReport& report, double t0) {
  report.min_eigenvalue = eigh(rho, false).eigenvalues().minCoeff();
  if (report.min_eigenvalue < -1e-6)
    std::cerr << "lmit: warning: state lost positivity (min eigenvalue " << report.min_eigenvalue
              << ") at t = " << t0 << '\n';
}

template <class OnStep>
Matrix integrate_generator(const Lindbladian& l, Matrix y, double t0, double t1,
                           const IntegratorConfig& cfg, bool hermitian, IntegrationStats& stats,
                           double& used_step, OnStep&& on_step) {
  cfg.validate();
  GeneratorCache cache(l);
  auto f = [&](double t, const Matrix& x, Matrix& dx) { cache.at(t).apply(x, dx, hermitian); };
  if (cfg.method == IntegratorMethod::RK4) {
    used_step = cfg.dt > 0.0 ? cfg.dt : default_step(l, t0);
    return integrate_rk4(f, std::move(y), t0, t1, used_step, cfg.max_steps, stats,
                         std::forward<OnStep>(on_step));
  }
  used_step = 0.0;
  return integrate_rk45(f, std::move(y), t0, t1, cfg.rtol, cfg.atol, cfg.max_steps, stats,
                        std::forward<OnStep>(on_step));
}

}  // namespace detail

/// Integrates d rho / dt = L(rho) from t0 to t0 + t.
inline DensityMatrix evolve(const Lindbladian& l, const DensityMatrix& rho0, double t,
                            const IntegratorConfig& cfg = {}, EvolutionReport* report = nullptr,
                            double t0 = 0.0) {
  if (t < 0.0) throw ValueError("evolve: negative evolution time");
  if (rho0.layout() != l.layout())
    throw DimensionError("evolve: state layout " + layout_string(rho0.layout()) +
                         " vs generator layout " + layout_string(l.layout()));
  EvolutionReport local;
  EvolutionReport& rep = report ? *report : local;
  if (t == 0.0) return rho0;
  Matrix y = detail::integrate_generator(l, rho0.matrix(), t0, t0 + t, cfg, true, rep.stats,
                                         rep.step, [](double, double) {});
  rep.trace_drift = std::abs(y.trace().real() - rho0.trace());
  detail::monitor_positivity(y, rep, t0 + t);
  return DensityMatrix::unchecked(Operator(std::move(y), rho0.layout()), rho0.role());
}

/// States at each of the (nondecreasing, nonnegative) `times`, integrating piecewise.
inline std::vector<DensityMatrix> evolve_series(const Lindbladian& l, const DensityMatrix& rho0,
                                                std::span<const double> times,
                                                const IntegratorConfig& cfg = {}) {
  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  DensityMatrix cur = rho0;
  double t_cur = 0.0;
  for (double t : times) {
    if (t < t_cur) throw ValueError("evolve_series: times must be nondecreasing");
    cur = evolve(l, cur, t - t_cur, cfg, nullptr, t_cur);
    t_cur = t;
    out.push_back(cur);
  }
  return out;
}

struct ExponentEvolution {
  DensityMatrix state;
  double exponent = 0.0;  // integral of a(s) over [0, t]
};

/// Evolves and integrates a(s) on the integrator's own step grid with Simpson weights.
inline ExponentEvolution evolve_with_exponent(const Lindbladian& l, const DensityMatrix& rho0,
                                              double t, const std::function<double(double)>& rate,
                                              const IntegratorConfig& cfg = {},
                                              EvolutionReport* report = nullptr) {
  if (t < 0.0) throw ValueError("evolve_with_exponent: negative evolution time");
  if (rho0.layout() != l.layout()) throw DimensionError("evolve_with_exponent: layout mismatch");
  EvolutionReport local;
  EvolutionReport& rep = report ? *report : local;
  if (t == 0.0) return {rho0, 0.0};
  double exponent = 0.0;
  auto simpson = [&](double s, double h) {
    exponent += h / 6.0 * (rate(s) + 4.0 * rate(s + 0.5 * h) + rate(s + h));
  };
  Matrix y = detail::integrate_generator(l, rho0.matrix(), 0.0, t, cfg, true, rep.stats, rep.step,
                                         simpson);
  rep.trace_drift = std::abs(y.trace().real() - rho0.trace());
  detail::monitor_positivity(y, rep, t);
  return {DensityMatrix::unchecked(Operator(std::move(y), rho0.layout()), rho0.role()), exponent};
}

/// Same, with a(s) = lambda_max(sum_k L_k^dagger(s) L_k(s)) of the generator's own jumps.
inline ExponentEvolution evolve_with_exponent(const Lindbladian& l, const DensityMatrix& rho0,
                                              double t, const IntegratorConfig& cfg = {},
                                              EvolutionReport* report = nullptr) {
  return evolve_with_exponent(
      l, rho0, t, [&l](double s) { return l.decay_rate(s); }, cfg, report);
}

/// <i| W |j> over the trailing `ancilla_factors` layout factors, as a system operator.
inline Operator ancilla_block(const Operator& w, std::size_t i, std::size_t j,
                              std::size_t ancilla_factors = 1) {
  const auto& layout = w.layout();
  if (ancilla_factors == 0 || ancilla_factors >= layout.size())
    throw DimensionError("ancilla_block: layout " + layout_string(layout) +
                         " has no system/ancilla split");
  const Layout sys(layout.begin(), layout.end() - static_cast<std::ptrdiff_t>(ancilla_factors));
  const Layout anc(layout.end() - static_cast<std::ptrdiff_t>(ancilla_factors), layout.end());
  const auto da = static_cast<Eigen::Index>(layout_dim(anc));
  const auto ds = static_cast<Eigen::Index>(layout_dim(sys));
  if (static_cast<Eigen::Index>(i) >= da || static_cast<Eigen::Index>(j) >= da)
    throw DimensionError("ancilla_block: index out of range for ancilla dimension " +
                         std::to_string(da));
  Matrix out(ds, ds);
  const auto& m = w.matrix();
  for (Eigen::Index c = 0; c < ds; ++c)
    for (Eigen::Index r = 0; r < ds; ++r)
      out(r, c) = m(r * da + static_cast<Eigen::Index>(i), c * da + static_cast<Eigen::Index>(j));
  return {std::move(out), sys};
}

inline Operator ancilla_block(const DensityMatrix& w, std::size_t i, std::size_t j,
                              std::size_t ancilla_factors = 1) {
  return ancilla_block(w.op(), i, j, ancilla_factors);
}

/// Integrates an arbitrary linear matrix ODE dX/dt = f(t, X) (used for single blocks, which are
/// not Hermitian).
template <class Rhs>
Matrix integrate_matrix_ode(Rhs&& f, Matrix y0, double t, double dt,
                            const IntegratorConfig& cfg = {}) {
  IntegrationStats stats;
  if (cfg.method == IntegratorMethod::RK45)
    return integrate_rk45(std::forward<Rhs>(f), std::move(y0), 0.0, t, cfg.rtol, cfg.atol,
                          cfg.max_steps, stats, [](double, double) {});
  return integrate_rk4(std::forward<Rhs>(f), std::move(y0), 0.0, t, cfg.dt > 0 ? cfg.dt : dt,
                       cfg.max_steps, stats, [](double, double) {});
}

}  // namespace lmit

#endif  // LMIT_LINDBLAD_HPP
