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

#ifndef LMIT_STOCHASTIC_HPP
#define LMIT_STOCHASTIC_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <vector>

#include "lmit/csv.hpp"
#include "lmit/density_matrix.hpp"
#include "lmit/parallel.hpp"
#include "lmit/rng.hpp"

namespace lmit {

// Noise convention: <eta_k(t) eta_k(t')> = delta(t - t'), coupling amplitude sqrt(gamma_k).
// The ensemble then follows -i[H, rho] + sum_k gamma_k D[G_k](rho).

struct StochasticRun {
  std::vector<Operator> couplings;  // Hermitian G_k
  std::vector<double> rates;        // gamma_k
  double dt = 1e-3;
  std::size_t trajectories = 1000;
  std::uint64_t seed = 0;

  void validate(const Layout& layout) const {
    if (!(dt > 0.0)) throw ValueError("stochastic run: dt must be positive");
    if (trajectories < 1) throw ValueError("stochastic run: need at least one trajectory");
    if (couplings.size() != rates.size())
      throw ValueError("stochastic run: one rate per coupling required");
    for (std::size_t k = 0; k < couplings.size(); ++k) {
      if (couplings[k].layout() != layout)
        throw DimensionError("stochastic coupling layout " + layout_string(couplings[k].layout()) +
                             " differs from " + layout_string(layout));
      if (!couplings[k].is_hermitian(1e-12))
        throw ValueError("stochastic coupling " + std::to_string(k) +
                         " is not Hermitian; the unitary unraveling needs Hermitian couplings");
      if (!(rates[k] >= 0.0)) throw ValueError("stochastic rates must be nonnegative");
    }
  }
};

namespace detail {

/// exp(-i K) for Hermitian K. Closed form for 2x2, commuting involutions for the noise-only
/// case, eigendecomposition otherwise.
class StepExponential {
 public:
  StepExponential(const Matrix& h, const std::vector<Matrix>& g) : h_(h), g_(g) {
    const auto d = h.rows();
    qubit_ = d == 2;
    involutive_ = h.cwiseAbs().maxCoeff() == 0.0;
    const Matrix id = Matrix::Identity(d, d);
    for (std::size_t a = 0; involutive_ && a < g.size(); ++a) {
      if (((g[a] * g[a]) - id).cwiseAbs().maxCoeff() > 1e-12) involutive_ = false;
      for (std::size_t b = 0; involutive_ && b < a; ++b)
        if ((g[a] * g[b] - g[b] * g[a]).cwiseAbs().maxCoeff() > 1e-12) involutive_ = false;
    }
  }

  /// U = exp(-i (H h + sum_k c_k G_k)).
  Matrix operator()(double h, std::span<const double> c) const {
    const auto d = h_.rows();
    if (involutive_ && !qubit_) {
      Matrix u = Matrix::Identity(d, d);
      for (std::size_t k = 0; k < g_.size(); ++k)
        u = u * (std::cos(c[k]) * Matrix::Identity(d, d) - kI * std::sin(c[k]) * g_[k]);
      return u;
    }
    Matrix k = h * h_;
    for (std::size_t j = 0; j < g_.size(); ++j) k += c[j] * g_[j];
    if (qubit_) return qubit_exp(k);
    const auto es = eigh(k);
    const Eigen::VectorXcd phase =
        (-kI * es.eigenvalues().cast<cplx>()).array().exp().matrix();
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  }

 private:
  // K = k0 I + n . sigma  =>  exp(-iK) = e^{-i k0} (cos|n| I - i sin|n| n.sigma / |n|).
  static Matrix qubit_exp(const Matrix& k) {
    const double k0 = 0.5 * (k(0, 0).real() + k(1, 1).real());
    const double nz = 0.5 * (k(0, 0).real() - k(1, 1).real());
    const double nx = k(1, 0).real();
    const double ny = k(1, 0).imag();
    const double r = std::sqrt(nx * nx + ny * ny + nz * nz);
    const double c = std::cos(r);
    const double s = r > 0.0 ? std::sin(r) / r : 1.0;
    Matrix u(2, 2);
    u(0, 0) = cplx{c, -s * nz};
    u(1, 1) = cplx{c, s * nz};
    u(0, 1) = -kI * s * cplx{nx, -ny};
    u(1, 0) = -kI * s * cplx{nx, ny};
    return std::exp(-kI * k0) * u;
  }

  Matrix h_;
  std::vector<Matrix> g_;
  bool qubit_ = false;
  bool involutive_ = false;
};

inline constexpr std::size_t kTrajectoryChunk = 64;

}  // namespace detail

struct ExpectationEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct EnsembleResult {
  DensityMatrix state;                     // trajectory mean
  Matrix stderr_;                          // elementwise standard error of the mean
  std::vector<ExpectationEstimate> expectations;  // per requested observable
  std::size_t trajectories = 0;
  std::size_t steps = 0;
};

/// Averages M unitary trajectories rho -> U rho U^dagger with
/// U = exp(-i (H dt + sum_k sqrt(gamma_k) G_k dW_k)), dW_k ~ N(0, dt).
/// Trajectory m draws from stream m of the seed, so results do not depend on thread count.
inline EnsembleResult run_ensemble(const Operator& h, const StochasticRun& run,
                                   const DensityMatrix& rho0, double t,
                                   std::span<const Operator> observables = {}) {
  run.validate(h.layout());
  if (!h.is_hermitian(1e-12)) throw ValueError("run_ensemble: Hamiltonian is not Hermitian");
  if (rho0.layout() != h.layout()) throw DimensionError("run_ensemble: state layout mismatch");
  if (!(t >= 0.0)) throw ValueError("run_ensemble: negative time");
  for (const auto& a : observables)
    if (a.layout() != h.layout() || !a.is_hermitian(1e-12))
      throw ValueError("run_ensemble: observables must be Hermitian on the state layout");

  const std::size_t steps =
      t == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(t / run.dt - 1e-9));
  const double step = steps ? t / static_cast<double>(steps) : 0.0;
  const double sqrt_step = std::sqrt(step);

  // rho0 = sum_i p_i |v_i><v_i|; each trajectory moves the kept eigenvectors together.
  const auto es = detail::eigh(rho0.matrix());
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 1e-14) kept.push_back(i);
  const auto d = static_cast<Eigen::Index>(rho0.dim());
  const auto r = static_cast<Eigen::Index>(kept.size());
  Matrix psi0(d, r);
  Eigen::VectorXd weights(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    psi0.col(i) = es.eigenvectors().col(kept[static_cast<std::size_t>(i)]);
    weights(i) = es.eigenvalues()(kept[static_cast<std::size_t>(i)]);
  }

  std::vector<Matrix> g;
  std::vector<double> amp;
  for (std::size_t k = 0; k < run.couplings.size(); ++k) {
    g.push_back(run.couplings[k].matrix());
    amp.push_back(std::sqrt(run.rates[k]));
  }
  const detail::StepExponential expm(h.matrix(), g);

  struct Partial {
    Matrix sum, sq_re, sq_im;
    std::vector<double> obs_sum, obs_sq;
  };
  const std::size_t m = run.trajectories;
  const std::size_t chunks = (m + detail::kTrajectoryChunk - 1) / detail::kTrajectoryChunk;
  std::vector<Partial> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    Partial p{Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d),
              std::vector<double>(observables.size(), 0.0),
              std::vector<double>(observables.size(), 0.0)};
    std::vector<double> coeff(g.size());
    const std::size_t lo = c * detail::kTrajectoryChunk;
    const std::size_t hi = std::min(m, lo + detail::kTrajectoryChunk);
    for (std::size_t traj = lo; traj < hi; ++traj) {
      RngStream rng(run.seed, traj);
      Matrix psi = psi0;
      for (std::size_t s = 0; s < steps; ++s) {
        for (std::size_t k = 0; k < g.size(); ++k) coeff[k] = amp[k] * sqrt_step * rng.normal();
        psi = expm(step, coeff) * psi;
      }
      const Matrix rho = psi * weights.cast<cplx>().asDiagonal() * psi.adjoint();
      p.sum += rho;
      p.sq_re += rho.real().cwiseAbs2().cast<cplx>();
      p.sq_im += rho.imag().cwiseAbs2().cast<cplx>();
      for (std::size_t o = 0; o < observables.size(); ++o) {
        const double v = trace_product(observables[o].matrix(), rho).real();
        p.obs_sum[o] += v;
        p.obs_sq[o] += v * v;
      }
    }
    partial[c] = std::move(p);
  });

  Matrix sum = Matrix::Zero(d, d), sq_re = Matrix::Zero(d, d), sq_im = Matrix::Zero(d, d);
  std::vector<double> obs_sum(observables.size(), 0.0), obs_sq(observables.size(), 0.0);
  for (const auto& p : partial) {
    sum += p.sum;
    sq_re += p.sq_re;
    sq_im += p.sq_im;
    for (std::size_t o = 0; o < observables.size(); ++o) {
      obs_sum[o] += p.obs_sum[o];
      obs_sq[o] += p.obs_sq[o];
    }
  }
  const double md = static_cast<double>(m);
  Matrix mean = sum / md;
  mean = 0.5 * (mean + mean.adjoint()).eval();
  // Var of mean = (E[x^2] - E[x]^2) / (M - 1), for real and imaginary parts.
  Matrix se = Matrix::Zero(d, d);
  if (m > 1) {
    const Eigen::MatrixXd var = (sq_re.real() / md - mean.real().cwiseAbs2()) +
                                (sq_im.real() / md - mean.imag().cwiseAbs2());
    se = (var.cwiseMax(0.0) / (md - 1.0)).cwiseSqrt().cast<cplx>();
  }
  EnsembleResult out{DensityMatrix::unchecked(Operator(std::move(mean), rho0.layout()),
                                              rho0.role()),
                     std::move(se), {}, m, steps};
  for (std::size_t o = 0; o < observables.size(); ++o) {
    const double mu = obs_sum[o] / md;
    const double var = m > 1 ? std::max(0.0, obs_sq[o] / md - mu * mu) * md / (md - 1.0) : 0.0;
    out.expectations.push_back({mu, std::sqrt(var / md)});
  }
  return out;
}

struct ConvergenceRow {
  double dt = 0.0;
  std::size_t trajectories = 0;
  double max_abs_error = 0.0;  // mean over repeats of max_ij |rho_ens - rho_ref|
  double mean_error = 0.0;     // mean over repeats of mean_ij |rho_ens - rho_ref|
  double wall_time = 0.0;      // seconds, all repeats
  double mc_stderr = 0.0;      // largest elementwise standard error, averaged over repeats
  bool bias_flag = false;      // error not explained by sampling noise
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// Least-squares slope of log(max_abs_error) against log(M) at the finest dt (NaN with fewer
  /// than two M values).
  double mc_slope = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceOptions {
  std::size_t repeats = 4;
  /// A row is flagged when max_abs_error > bias_threshold + 3 * mc_stderr.
  double bias_threshold = 0.0;
};

/// Error of run_ensemble against `reference` over a (dt, M) grid. Repeats use distinct seeds
/// derived from the template seed.
inline ConvergenceReport convergence_report(const Operator& h, const StochasticRun& templ,
                                            const DensityMatrix& rho0, double t,
                                            const DensityMatrix& reference,
                                            std::span<const double> dt_grid,
                                            std::span<const std::size_t> m_grid,
                                            const ConvergenceOptions& opt = {}) {
  if (dt_grid.empty() || m_grid.empty())
    throw ValueError("convergence_report: grids must be nonempty");
  if (opt.repeats < 1) throw ValueError("convergence_report: repeats must be positive");
  if (reference.layout() != rho0.layout())
    throw DimensionError("convergence_report: reference layout mismatch");
  ConvergenceReport report;
  double finest = dt_grid.front();
  for (double dt : dt_grid) finest = std::min(finest, dt);
  std::vector<double> log_m, log_err;
  for (double dt : dt_grid) {
    for (std::size_t m : m_grid) {
      ConvergenceRow row{dt, m};
      const auto start = std::chrono::steady_clock::now();
      for (std::size_t rep = 0; rep < opt.repeats; ++rep) {
        StochasticRun run = templ;
        run.dt = dt;
        run.trajectories = m;
        run.seed = splitmix64(templ.seed + 0x1000003ULL * (rep + 1));
        const auto res = run_ensemble(h, run, rho0, t);
        const Eigen::ArrayXXd err = (res.state.matrix() - reference.matrix()).cwiseAbs().array();
        row.max_abs_error += err.maxCoeff();
        row.mean_error += err.mean();
        row.mc_stderr += res.stderr_.real().maxCoeff();
      }
      const double reps = static_cast<double>(opt.repeats);
      row.max_abs_error /= reps;
      row.mean_error /= reps;
      row.mc_stderr /= reps;
      row.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      row.bias_flag = row.max_abs_error > opt.bias_threshold + 3.0 * row.mc_stderr;
      if (dt == finest) {
        log_m.push_back(std::log(static_cast<double>(m)));
        log_err.push_back(std::log(row.max_abs_error));
      }
      report.rows.push_back(row);
    }
  }
  if (log_m.size() >= 2) {
    const double n = static_cast<double>(log_m.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < log_m.size(); ++i) {
      mx += log_m[i] / n;
      my += log_err[i] / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < log_m.size(); ++i) {
      sxy += (log_m[i] - mx) * (log_err[i] - my);
      sxx += (log_m[i] - mx) * (log_m[i] - mx);
    }
    if (sxx > 0) report.mc_slope = sxy / sxx;
  }
  return report;
}

/// Columns: dt, M, max_abs_error, mean_error, wall_time.
inline void write_convergence_csv(const std::filesystem::path& path,
                                  const ConvergenceReport& report) {
  CsvWriter csv(path, {"dt", "M", "max_abs_error", "mean_error", "wall_time"});
  for (const auto& r : report.rows)
    csv.row({r.dt, static_cast<long long>(r.trajectories), r.max_abs_error, r.mean_error,
             r.wall_time});
}

}  // namespace lmit

#endif  // LMIT_STOCHASTIC_HPP
