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

#ifndef LMIT_SAMPLING_HPP
#define LMIT_SAMPLING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lmit/csv.hpp"
#include "lmit/density_matrix.hpp"
#include "lmit/parallel.hpp"
#include "lmit/rng.hpp"

namespace lmit {

/// A Hermitian observable with its spectral decomposition, grouped by distinct eigenvalue.
class MeasurementSpec {
 public:
  static MeasurementSpec from_observable(const Operator& observable, double group_tol = 1e-9) {
    if (!observable.is_hermitian(1e-12)) throw ValueError("measured observable must be Hermitian");
    MeasurementSpec spec;
    spec.observable_ = observable;
    const auto es = detail::eigh(observable.matrix());
    spec.vectors_ = es.eigenvectors();
    const auto& ev = es.eigenvalues();
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      if (spec.values_.empty() || ev(k) - spec.values_.back() > group_tol) {
        spec.values_.push_back(ev(k));
        spec.group_start_.push_back(k);
      }
    }
    spec.group_start_.push_back(ev.size());
    return spec;
  }

  [[nodiscard]] const Operator& observable() const noexcept { return observable_; }
  /// Distinct eigenvalues, ascending.
  [[nodiscard]] const std::vector<double>& outcomes() const noexcept { return values_; }
  [[nodiscard]] double outcome_range() const { return values_.back() - values_.front(); }

  /// Projector onto the r-th eigenspace.
  [[nodiscard]] Operator projector(std::size_t r) const {
    const auto start = group_start_.at(r);
    const auto count = group_start_.at(r + 1) - start;
    const Matrix v = vectors_.middleCols(start, count);
    return {v * v.adjoint(), observable_.layout()};
  }

  /// Born probabilities Tr[P_r W]. Values below -1e-9 are rejected; the rest are clamped to
  /// [0, 1] and renormalized.
  [[nodiscard]] std::vector<double> probabilities(const Operator& w) const {
    if (w.dim() != observable_.dim())
      throw DimensionError("measurement: state dimension does not match observable");
    const Matrix rotated = vectors_.adjoint() * w.matrix() * vectors_;
    std::vector<double> p(values_.size(), 0.0);
    for (std::size_t r = 0; r < values_.size(); ++r)
      for (auto k = group_start_[r]; k < group_start_[r + 1]; ++k) p[r] += rotated(k, k).real();
    double total = 0.0;
    for (auto& x : p) {
      if (x < -1e-9 || x > 1.0 + 1e-9)
        throw ValueError("outcome probability " + std::to_string(x) +
                         " outside [0,1]; state is not physical");
      x = std::clamp(x, 0.0, 1.0);
      total += x;
    }
    if (total <= 0.0) throw ValueError("outcome probabilities sum to zero");
    for (auto& x : p) x /= total;
    return p;
  }

 private:
  Operator observable_;
  Matrix vectors_;
  std::vector<double> values_;
  std::vector<Eigen::Index> group_start_;
};

/// Streaming mean/variance (Welford), mergeable in a fixed order.
struct RawStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void merge(const RawStats& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
  /// Unbiased sample variance (0 for a single shot).
  [[nodiscard]] double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

struct ShotEstimate {
  std::uint64_t n = 0;
  double mean = 0.0;      // prefactor * raw_mean
  double stderr_ = 0.0;   // prefactor * sqrt(raw_variance / n)
  double prefactor = 1.0;
  double raw_mean = 0.0;
  double raw_variance = 0.0;
};

namespace detail {

inline constexpr std::uint64_t kShotBatch = 1u << 16;

struct OutcomeTable {
  std::vector<double> cdf;
  std::vector<double> values;

  OutcomeTable(const MeasurementSpec& spec, const Operator& w)
      : values(spec.outcomes()) {
    const auto p = spec.probabilities(w);
    double acc = 0.0;
    for (double x : p) cdf.push_back(acc += x);
    cdf.back() = 1.0;
  }

  double draw(RngStream& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return values[static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cdf.begin(), static_cast<std::ptrdiff_t>(values.size()) - 1))];
  }
};

inline std::uint64_t batch_stream(std::uint64_t stream, std::uint64_t batch) {
  return (stream << 32) ^ batch;
}

}  // namespace detail

/// n i.i.d. Born-rule outcomes (eigenvalues) of `spec` on W. Deterministic in (seed, stream).
inline std::vector<double> sample_outcomes(const Operator& w, const MeasurementSpec& spec,
                                           std::uint64_t n, std::uint64_t seed,
                                           std::uint64_t stream = 0) {
  const detail::OutcomeTable table(spec, w);
  std::vector<double> out(n);
  const std::uint64_t batches = (n + detail::kShotBatch - 1) / detail::kShotBatch;
  parallel_for(batches, [&](std::size_t b) {
    RngStream rng(seed, detail::batch_stream(stream, b));
    const std::uint64_t lo = b * detail::kShotBatch;
    const std::uint64_t hi = std::min(n, lo + detail::kShotBatch);
    for (std::uint64_t i = lo; i < hi; ++i) out[i] = table.draw(rng);
  });
  return out;
}

inline std::vector<double> sample_outcomes(const DensityMatrix& w, const MeasurementSpec& spec,
                                           std::uint64_t n, std::uint64_t seed,
                                           std::uint64_t stream = 0) {
  return sample_outcomes(w.op(), spec, n, seed, stream);
}

/// Mean/variance of the same outcome sequence sample_outcomes would produce, without storing it.
inline RawStats sample_statistics(const Operator& w, const MeasurementSpec& spec,
                                  std::uint64_t n, std::uint64_t seed,
                                  std::uint64_t stream = 0) {
  const detail::OutcomeTable table(spec, w);
  const std::uint64_t batches = (n + detail::kShotBatch - 1) / detail::kShotBatch;
  std::vector<RawStats> partial(batches);
  parallel_for(batches, [&](std::size_t b) {
    RngStream rng(seed, detail::batch_stream(stream, b));
    const std::uint64_t lo = b * detail::kShotBatch;
    const std::uint64_t hi = std::min(n, lo + detail::kShotBatch);
    RawStats s;
    for (std::uint64_t i = lo; i < hi; ++i) s.add(table.draw(rng));
    partial[b] = s;
  });
  RawStats total;
  for (const auto& s : partial) total.merge(s);
  return total;
}

inline ShotEstimate mitigated_estimate(const RawStats& raw, double prefactor) {
  if (raw.n == 0) throw ValueError("mitigated_estimate: no outcomes");
  ShotEstimate e;
  e.n = raw.n;
  e.prefactor = prefactor;
  e.raw_mean = raw.mean;
  e.raw_variance = raw.variance();
  e.mean = prefactor * raw.mean;
  e.stderr_ = prefactor * std::sqrt(e.raw_variance / static_cast<double>(raw.n));
  return e;
}

/// (1/n) * prefactor * sum_i outcome_i, with its standard error.
inline ShotEstimate mitigated_estimate(std::span<const double> outcomes, double prefactor) {
  RawStats raw;
  for (double x : outcomes) raw.add(x);
  return mitigated_estimate(raw, prefactor);
}

/// Hoeffding shot count for |estimate - mean| <= epsilon with probability >= 1 - delta, for
/// per-shot values exp(2 a_eff t) * x with x spanning a range R:
/// n = ceil(exp(4 a_eff t) R^2 log(2/delta) / (2 epsilon^2)).
inline std::uint64_t required_shots(double epsilon, double delta, double a_eff, double t,
                                    double outcome_range) {
  if (!(epsilon > 0.0)) throw ValueError("required_shots: epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ValueError("required_shots: delta must be in (0,1)");
  if (!(outcome_range > 0.0)) throw ValueError("required_shots: outcome range must be positive");
  if (t < 0.0 || a_eff < 0.0) throw ValueError("required_shots: t and a_eff must be nonnegative");
  const double n = std::exp(4.0 * a_eff * t) * outcome_range * outcome_range *
                   std::log(2.0 / delta) / (2.0 * epsilon * epsilon);
  if (!(n < 9.0e18)) throw ValueError("required_shots: shot count overflows");
  return static_cast<std::uint64_t>(std::ceil(n));
}

/// Variance of the mitigated estimator over that of the noisy estimator at equal shot count.
inline double empirical_overhead(const Operator& w_mit, const MeasurementSpec& spec_mit,
                                 double prefactor, const Operator& w_noisy,
                                 const MeasurementSpec& spec_noisy, std::uint64_t n,
                                 std::uint64_t seed) {
  const RawStats mit = sample_statistics(w_mit, spec_mit, n, seed, 0);
  const RawStats noisy = sample_statistics(w_noisy, spec_noisy, n, seed, 1);
  if (noisy.variance() <= 0.0)
    throw ValueError("empirical_overhead: noisy estimator has zero variance");
  return prefactor * prefactor * mit.variance() / noisy.variance();
}

struct EstimateRecord {
  double t = 0.0;
  ShotEstimate estimate;
  std::uint64_t seed = 0;
};

/// Columns: t, n, raw_mean, prefactor, mitigated_mean, stderr, seed.
inline void write_estimates_csv(const std::filesystem::path& path,
                                std::span<const EstimateRecord> records) {
  CsvWriter csv(path, {"t", "n", "raw_mean", "prefactor", "mitigated_mean", "stderr", "seed"});
  for (const auto& r : records)
    csv.row({r.t, static_cast<long long>(r.estimate.n), r.estimate.raw_mean, r.estimate.prefactor,
             r.estimate.mean, r.estimate.stderr_, std::to_string(r.seed)});
}

}  // namespace lmit

#endif  // LMIT_SAMPLING_HPP
