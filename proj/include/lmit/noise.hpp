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

#ifndef LMIT_NOISE_HPP
#define LMIT_NOISE_HPP

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lmit/operator.hpp"

namespace lmit {

/// One noise channel: jump operator `op` with rate `rate`; its Lindblad amplitude is
/// sqrt(rate) * op. `site` records single-factor support when known.
struct JumpSpec {
  Operator op;
  double rate = 0.0;
  std::optional<std::size_t> site;

  [[nodiscard]] Operator amplitude() const { return std::sqrt(rate) * op; }
};

/// Partial trace keeping only factor `site`.
inline Operator partial_trace_keep(const Operator& op, std::size_t site) {
  const auto& layout = op.layout();
  if (site >= layout.size()) throw DimensionError("partial_trace_keep: site out of range");
  std::size_t inner = 1;
  for (std::size_t f = site + 1; f < layout.size(); ++f) inner *= layout[f];
  const std::size_t local = layout[site];
  const std::size_t outer = op.dim() / (inner * local);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(local), static_cast<Eigen::Index>(local));
  const auto& m = op.matrix();
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t n = 0; n < inner; ++n)
      for (std::size_t a = 0; a < local; ++a)
        for (std::size_t b = 0; b < local; ++b) {
          const auto r = static_cast<Eigen::Index>((o * local + a) * inner + n);
          const auto c = static_cast<Eigen::Index>((o * local + b) * inner + n);
          out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += m(r, c);
        }
  return Operator(std::move(out));
}

/// The single factor an operator acts on nontrivially, if any. Operators proportional to the
/// identity report factor 0.
inline std::optional<std::size_t> local_support(const Operator& op, double tol = 1e-12) {
  const auto& layout = op.layout();
  const double scale = std::max(op.max_abs(), 1e-300);
  for (std::size_t s = 0; s < layout.size(); ++s) {
    const double others = static_cast<double>(op.dim() / layout[s]);
    const Operator local = partial_trace_keep(op, s) * (1.0 / others);
    const Operator rebuilt = embed_local(local, s, layout);
    if ((rebuilt.matrix() - op.matrix()).cwiseAbs().maxCoeff() <= tol * scale) return s;
  }
  return std::nullopt;
}

/// System noise (acting on `system_layout`) and ancilla noise (acting on one ancilla factor,
/// applied to every ancilla factor of a plan).
struct NoiseModel {
  Layout system_layout;
  std::vector<JumpSpec> system_jumps;
  std::vector<JumpSpec> ancilla_jumps;

  void validate() const {
    if (system_layout.empty()) throw DimensionError("noise model has an empty system layout");
    for (const auto& j : system_jumps) {
      if (!(j.rate >= 0.0) || !std::isfinite(j.rate))
        throw ValueError("noise rates must be finite and nonnegative");
      if (j.op.layout() != system_layout)
        throw DimensionError("system jump layout " + layout_string(j.op.layout()) +
                             " differs from system layout " + layout_string(system_layout));
    }
    for (const auto& j : ancilla_jumps)
      if (!(j.rate >= 0.0) || !std::isfinite(j.rate))
        throw ValueError("ancilla noise rates must be finite and nonnegative");
  }

  [[nodiscard]] std::vector<Operator> system_amplitudes() const {
    std::vector<Operator> out;
    out.reserve(system_jumps.size());
    for (const auto& j : system_jumps) out.push_back(j.amplitude());
    return out;
  }

  /// Adds a local channel `local_op` on `site` of the system layout.
  NoiseModel& add_local(const Operator& local_op, std::size_t site, double rate) {
    system_jumps.push_back({embed_local(local_op, site, system_layout), rate, site});
    return *this;
  }

  /// Adds the same local channel on every system site.
  NoiseModel& add_on_every_site(const Operator& local_op, double rate) {
    for (std::size_t s = 0; s < system_layout.size(); ++s) add_local(local_op, s, rate);
    return *this;
  }

  NoiseModel& add_ancilla(const Operator& local_op, double rate) {
    ancilla_jumps.push_back({local_op, rate, std::nullopt});
    return *this;
  }

  [[nodiscard]] NoiseModel without_ancilla_noise() const {
    NoiseModel out = *this;
    out.ancilla_jumps.clear();
    return out;
  }
};

/// n qubits each carrying the listed (operator, rate) channels.
inline NoiseModel uniform_qubit_noise(std::size_t qubits,
                                      const std::vector<std::pair<Operator, double>>& per_site,
                                      const std::vector<std::pair<Operator, double>>& ancilla = {}) {
  NoiseModel n{Layout(qubits, 2), {}, {}};
  for (std::size_t s = 0; s < qubits; ++s)
    for (const auto& [op, rate] : per_site) n.add_local(op, s, rate);
  for (const auto& [op, rate] : ancilla) n.add_ancilla(op, rate);
  return n;
}

}  // namespace lmit

#endif  // LMIT_NOISE_HPP
