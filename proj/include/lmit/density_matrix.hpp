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

#ifndef LMIT_DENSITY_MATRIX_HPP
#define LMIT_DENSITY_MATRIX_HPP

#include <string>
#include <utility>

#include "lmit/operator.hpp"

namespace lmit {

enum class StateRole { System, Joint };

struct StateCheck {
  double trace_error = 0.0;      // |Tr rho - 1|
  double hermiticity = 0.0;      // max|rho - rho^dagger| / max|rho|
  double min_eigenvalue = 0.0;
  [[nodiscard]] bool ok(double trace_tol = 1e-9, double herm_tol = 1e-10,
                        double eig_tol = 1e-8) const {
    return trace_error <= trace_tol && hermiticity <= herm_tol && min_eigenvalue >= -eig_tol;
  }
};

inline StateCheck inspect_state(const Operator& rho) {
  StateCheck c;
  c.trace_error = std::abs(rho.trace() - cplx{1.0, 0.0});
  const double scale = rho.max_abs();
  c.hermiticity =
      scale > 0 ? (rho.matrix() - rho.matrix().adjoint()).cwiseAbs().maxCoeff() / scale : 0.0;
  c.min_eigenvalue = detail::eigh(rho.matrix(), false).eigenvalues().minCoeff();
  return c;
}

/// A density matrix: system-only (rho) or joint system-ancilla (W).
class DensityMatrix {
 public:
  DensityMatrix() = default;

  /// Validates unit trace, Hermiticity and (slack) positivity.
  static DensityMatrix checked(Operator op, StateRole role = StateRole::System) {
    const auto c = inspect_state(op);
    if (!c.ok())
      throw ValueError("not a density matrix: trace error " + std::to_string(c.trace_error) +
                       ", hermiticity " + std::to_string(c.hermiticity) + ", min eigenvalue " +
                       std::to_string(c.min_eigenvalue));
    return DensityMatrix(std::move(op), role);
  }

  /// No validation; used for integrator output, whose positivity is monitored separately.
  static DensityMatrix unchecked(Operator op, StateRole role = StateRole::System) {
    return DensityMatrix(std::move(op), role);
  }

  static DensityMatrix pure(const Vector& psi, const Layout& layout,
                            StateRole role = StateRole::System) {
    if (static_cast<std::size_t>(psi.size()) != layout_dim(layout))
      throw DimensionError("state vector size does not match layout " + layout_string(layout));
    return DensityMatrix(projector(psi, layout), role);
  }

  [[nodiscard]] const Operator& op() const noexcept { return op_; }
  [[nodiscard]] const Matrix& matrix() const noexcept { return op_.matrix(); }
  [[nodiscard]] const Layout& layout() const noexcept { return op_.layout(); }
  [[nodiscard]] std::size_t dim() const noexcept { return op_.dim(); }
  [[nodiscard]] StateRole role() const noexcept { return role_; }
  [[nodiscard]] double trace() const { return op_.trace().real(); }

  /// Tr[A rho].
  [[nodiscard]] cplx expectation(const Operator& a) const {
    if (a.dim() != dim()) throw DimensionError("expectation: observable dimension mismatch");
    return trace_product(a.matrix(), op_.matrix());
  }

 private:
  DensityMatrix(Operator op, StateRole role) : op_(std::move(op)), role_(role) {}

  Operator op_;
  StateRole role_ = StateRole::System;
};

/// rho (x) sigma as a joint state.
inline DensityMatrix tensor_state(const DensityMatrix& system, const Operator& ancilla) {
  return DensityMatrix::unchecked(kron(system.op(), ancilla), StateRole::Joint);
}

}  // namespace lmit

#endif  // LMIT_DENSITY_MATRIX_HPP
