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

#ifndef LMIT_SPIN_MODELS_HPP
#define LMIT_SPIN_MODELS_HPP

#include <utility>
#include <vector>

#include "lmit/operator.hpp"

namespace lmit::models {

using Edge = std::pair<std::size_t, std::size_t>;

inline Layout qubits(std::size_t n) { return Layout(n, 2); }

inline Operator two_site(const Operator& a, std::size_t i, const Operator& b, std::size_t j,
                         const Layout& layout) {
  return embed_local(a, i, layout) * embed_local(b, j, layout);
}

/// Nearest neighbours of the 2x2 square: the four edges 0-1-2-3-0, each counted once.
inline std::vector<Edge> square_2x2_edges() { return {{0, 1}, {1, 2}, {2, 3}, {3, 0}}; }

inline std::vector<Edge> ring_edges(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  if (n == 2) e.pop_back();  // a 2-ring has a single bond
  return e;
}

inline std::vector<Edge> chain_edges(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

/// sum_<ij> [Jx XX + Jy YY + Jz ZZ] - h sum_i Y_i.
inline Operator heisenberg(std::size_t n, const std::vector<Edge>& edges, double jx, double jy,
                           double jz, double h) {
  const Layout l = qubits(n);
  Operator out = Operator::zero(l);
  for (const auto& [i, j] : edges) {
    out = out + jx * two_site(ops::sigma_x(), i, ops::sigma_x(), j, l);
    out = out + jy * two_site(ops::sigma_y(), i, ops::sigma_y(), j, l);
    out = out + jz * two_site(ops::sigma_z(), i, ops::sigma_z(), j, l);
  }
  for (std::size_t i = 0; i < n; ++i) out = out - h * embed_local(ops::sigma_y(), i, l);
  return out;
}

/// J sum_<ij> Z_i Z_j.
inline Operator zz_coupling(std::size_t n, const std::vector<Edge>& edges, double j) {
  const Layout l = qubits(n);
  Operator out = Operator::zero(l);
  for (const auto& [a, b] : edges) out = out + j * two_site(ops::sigma_z(), a, ops::sigma_z(), b, l);
  return out;
}

/// h sum_i X_i.
inline Operator transverse_field(std::size_t n, double h) {
  const Layout l = qubits(n);
  Operator out = Operator::zero(l);
  for (std::size_t i = 0; i < n; ++i) out = out + h * embed_local(ops::sigma_x(), i, l);
  return out;
}

/// Periodic transverse-field Ising ring.
inline Operator ising_ring(std::size_t n, double j, double h) {
  return zz_coupling(n, ring_edges(n), j) + transverse_field(n, h);
}

/// sum_i Z_i.
inline Operator magnetization(std::size_t n) {
  const Layout l = qubits(n);
  Operator out = Operator::zero(l);
  for (std::size_t i = 0; i < n; ++i) out = out + embed_local(ops::sigma_z(), i, l);
  return out;
}

inline Vector all_zero_state(std::size_t n) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  v(0) = 1.0;
  return v;
}

}  // namespace lmit::models

#endif  // LMIT_SPIN_MODELS_HPP
