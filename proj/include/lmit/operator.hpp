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

#ifndef LMIT_OPERATOR_HPP
#define LMIT_OPERATOR_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lmit/error.hpp"

namespace lmit {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Ordered local dimensions of a tensor-product Hilbert space.
/// Factor 0 is the most significant index of the flattened basis.
using Layout = std::vector<std::size_t>;

inline constexpr cplx kI{0.0, 1.0};

inline std::size_t layout_dim(const Layout& layout) {
  return std::accumulate(layout.begin(), layout.end(), std::size_t{1}, std::multiplies<>{});
}

inline std::string layout_string(const Layout& layout) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < layout.size(); ++i) os << (i ? "," : "") << layout[i];
  os << ']';
  return os.str();
}

inline Layout concat(const Layout& a, const Layout& b) {
  Layout out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

/// Dense complex square matrix tagged with its tensor-factor layout.
class Operator {
 public:
  Operator() = default;

  Operator(Matrix data, Layout layout) : data_(std::move(data)), layout_(std::move(layout)) {
    if (data_.rows() != data_.cols())
      throw DimensionError("operator must be square, got " + std::to_string(data_.rows()) + "x" +
                           std::to_string(data_.cols()));
    if (layout_.empty()) layout_ = {static_cast<std::size_t>(data_.rows())};
    for (auto d : layout_)
      if (d == 0) throw DimensionError("layout entries must be positive");
    if (layout_dim(layout_) != static_cast<std::size_t>(data_.rows()))
      throw DimensionError("layout " + layout_string(layout_) + " does not match dimension " +
                           std::to_string(data_.rows()));
  }

  explicit Operator(Matrix data) : Operator(std::move(data), Layout{}) {}

  static Operator identity(const Layout& layout) {
    const auto d = static_cast<Eigen::Index>(layout_dim(layout));
    return {Matrix::Identity(d, d), layout};
  }
  static Operator zero(const Layout& layout) {
    const auto d = static_cast<Eigen::Index>(layout_dim(layout));
    return {Matrix::Zero(d, d), layout};
  }

  [[nodiscard]] const Matrix& matrix() const noexcept { return data_; }
  [[nodiscard]] const Layout& layout() const noexcept { return layout_; }
  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  [[nodiscard]] cplx operator()(Eigen::Index r, Eigen::Index c) const { return data_(r, c); }

  [[nodiscard]] Operator adjoint() const { return {data_.adjoint(), layout_}; }
  [[nodiscard]] cplx trace() const { return data_.trace(); }
  [[nodiscard]] double max_abs() const { return data_.size() ? data_.cwiseAbs().maxCoeff() : 0.0; }

  /// max|A - A^dagger| <= rel_tol * max|A| (zero matrix counts as Hermitian).
  [[nodiscard]] bool is_hermitian(double rel_tol = 1e-12) const {
    const double scale = max_abs();
    if (scale == 0.0) return true;
    return (data_ - data_.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
  }

  Operator& operator+=(const Operator& o) {
    check_same(o, "+");
    data_ += o.data_;
    return *this;
  }
  Operator& operator-=(const Operator& o) {
    check_same(o, "-");
    data_ -= o.data_;
    return *this;
  }
  Operator& operator*=(cplx s) {
    data_ *= s;
    return *this;
  }

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, cplx s) { return a *= s; }
  friend Operator operator*(cplx s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, double s) { return a *= cplx{s, 0.0}; }
  friend Operator operator*(double s, Operator a) { return a *= cplx{s, 0.0}; }
  friend Operator operator*(const Operator& a, const Operator& b) {
    a.check_same(b, "*");
    return {a.data_ * b.data_, a.layout_};
  }

 private:
  void check_same(const Operator& o, const char* op) const {
    if (layout_ != o.layout_)
      throw DimensionError(std::string("layout mismatch in operator") + op + ": " +
                           layout_string(layout_) + " vs " + layout_string(o.layout_));
  }

  Matrix data_;
  Layout layout_;
};

/// Tensor product; (A (x) B)[i*dB + k, j*dB + l] = A[i,j] B[k,l].
inline Operator kron(const Operator& a, const Operator& b) {
  const auto da = a.matrix().rows();
  const auto db = b.matrix().rows();
  Matrix out(da * db, da * db);
  for (Eigen::Index j = 0; j < da; ++j)
    for (Eigen::Index i = 0; i < da; ++i) out.block(i * db, j * db, db, db) = a(i, j) * b.matrix();
  return {std::move(out), concat(a.layout(), b.layout())};
}

inline Operator kron(std::span<const Operator> factors) {
  if (factors.empty()) throw DimensionError("kron of an empty factor list");
  Operator out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

/// Places a local operator on one tensor factor, identity elsewhere.
inline Operator embed_local(const Operator& op, std::size_t site, const Layout& layout) {
  if (site >= layout.size())
    throw DimensionError("site " + std::to_string(site) + " out of range for layout " +
                         layout_string(layout));
  if (op.dim() != layout[site])
    throw DimensionError("local operator of dimension " + std::to_string(op.dim()) +
                         " cannot act on factor of dimension " + std::to_string(layout[site]));
  Layout before(layout.begin(), layout.begin() + static_cast<std::ptrdiff_t>(site));
  Layout after(layout.begin() + static_cast<std::ptrdiff_t>(site) + 1, layout.end());
  Operator out(op.matrix(), {op.dim()});
  if (!before.empty()) out = kron(Operator::identity(before), out);
  if (!after.empty()) out = kron(out, Operator::identity(after));
  return out;
}

/// Re-tags an operator with a different (dimension-compatible) layout.
inline Operator with_layout(const Operator& op, const Layout& layout) { return {op.matrix(), layout}; }

/// Single-qubit and qutrit building blocks. Basis convention: sigma_z = |0><0| - |1><1|,
/// sigma_minus = |0><1| (so sigma_minus^dagger sigma_minus = |1><1|), sigma_plus = |1><0|.
namespace ops {

inline Operator basis_op(std::size_t dim, std::size_t row, std::size_t col) {
  if (row >= dim || col >= dim) throw DimensionError("basis index out of range");
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
  return Operator(std::move(m));
}

inline Operator identity(std::size_t dim = 2) { return Operator::identity({dim}); }

inline Operator sigma_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return Operator(m);
}
inline Operator sigma_y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return Operator(m);
}
inline Operator sigma_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return Operator(m);
}
inline Operator sigma_minus() { return basis_op(2, 0, 1); }
inline Operator sigma_plus() { return basis_op(2, 1, 0); }
inline Operator proj0() { return basis_op(2, 0, 0); }
inline Operator proj1() { return basis_op(2, 1, 1); }

// Qutrit levels |1>,|2>,|3> map to indices 0,1,2.
inline Operator qutrit_sigma_z() { return basis_op(3, 0, 0) - basis_op(3, 1, 1); }
inline Operator qutrit_sigma_x() { return basis_op(3, 0, 1) + basis_op(3, 1, 0); }

}  // namespace ops

/// Projector |psi><psi| for a (not necessarily normalized) state vector.
inline Operator projector(const Vector& psi, const Layout& layout = {}) {
  const Vector v = psi / psi.norm();
  return {v * v.adjoint(), layout};
}

/// Computational basis state |x> of the given layout; `digits` are per-factor levels.
inline Vector basis_state(const Layout& layout, std::span<const std::size_t> digits) {
  if (digits.size() != layout.size()) throw DimensionError("basis_state: digit count mismatch");
  std::size_t index = 0;
  for (std::size_t f = 0; f < layout.size(); ++f) {
    if (digits[f] >= layout[f]) throw DimensionError("basis_state: level out of range");
    index = index * layout[f] + digits[f];
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(layout_dim(layout)));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

namespace detail {

inline void require_hermitian(const Operator& a, const char* what) {
  if (!a.is_hermitian(1e-12)) throw ValueError(std::string(what) + ": operator is not Hermitian");
}

inline Eigen::SelfAdjointEigenSolver<Matrix> eigh(const Matrix& m, bool vectors = true) {
  // Symmetrize to remove roundoff-level anti-Hermitian parts before the solve.
  const Matrix sym = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym, vectors ? Eigen::ComputeEigenvectors
                                                            : Eigen::EigenvaluesOnly);
}

}  // namespace detail

/// Largest eigenvalue of a Hermitian operator.
inline double hermitian_lambda_max(const Operator& a) {
  detail::require_hermitian(a, "hermitian_lambda_max");
  return detail::eigh(a.matrix(), false).eigenvalues().maxCoeff();
}

inline double hermitian_lambda_min(const Operator& a) {
  detail::require_hermitian(a, "hermitian_lambda_min");
  return detail::eigh(a.matrix(), false).eigenvalues().minCoeff();
}

/// Largest |eigenvalue| of a Hermitian operator.
inline double spectral_norm_hermitian(const Operator& a) {
  detail::require_hermitian(a, "spectral_norm_hermitian");
  if (a.dim() == 0) return 0.0;
  return detail::eigh(a.matrix(), false).eigenvalues().cwiseAbs().maxCoeff();
}

/// Principal square root of a Hermitian positive semidefinite operator.
/// Eigenvalues in [-1e-6 * max|A|, 0) are treated as roundoff and clamped.
inline Operator psd_sqrt(const Operator& a) {
  detail::require_hermitian(a, "psd_sqrt");
  const double scale = a.max_abs();
  if (scale == 0.0) return Operator::zero(a.layout());
  const auto es = detail::eigh(a.matrix());
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-6 * scale)
    throw ValueError("psd_sqrt: operator has a significantly negative eigenvalue " +
                     std::to_string(ev.minCoeff()));
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  const Matrix& v = es.eigenvectors();
  Matrix out = v * ev.cast<cplx>().asDiagonal() * v.adjoint();
  out = 0.5 * (out + out.adjoint());
  return {std::move(out), a.layout()};
}

/// e^{-i H t} for Hermitian H.
inline Operator unitary_propagator(const Operator& h, double t) {
  detail::require_hermitian(h, "unitary_propagator");
  const auto es = detail::eigh(h.matrix());
  const Vector phases = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp();
  return {es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint(), h.layout()};
}

/// D[L](rho) = L rho L^dagger - 1/2 {L^dagger L, rho}.
inline Operator dissipator_apply(const Operator& l, const Operator& rho) {
  if (l.dim() != rho.dim())
    throw DimensionError("dissipator_apply: jump dimension " + std::to_string(l.dim()) +
                         " vs state dimension " + std::to_string(rho.dim()));
  const Matrix& lm = l.matrix();
  const Matrix& r = rho.matrix();
  const Matrix ldl = lm.adjoint() * lm;
  Matrix out = lm * r * lm.adjoint() - 0.5 * (ldl * r + r * ldl);
  return {std::move(out), rho.layout()};
}

/// Tr[A B] in O(d^2).
inline cplx trace_product(const Matrix& a, const Matrix& b) {
  return a.transpose().cwiseProduct(b).sum();
}

/// Sum_k L_k^dagger L_k.
inline Operator jump_sum(std::span<const Operator> jumps, const Layout& layout) {
  Operator out = Operator::zero(layout);
  for (const auto& l : jumps) out += l.adjoint() * l;
  return out;
}

}  // namespace lmit

#endif  // LMIT_OPERATOR_HPP
