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

#ifndef LMIT_PLAN_IO_HPP
#define LMIT_PLAN_IO_HPP

#include <string>
#include <vector>

#include "lmit/json_util.hpp"
#include "lmit/mitigation.hpp"

namespace lmit::io {

using json_util::json;

// Matrices are written as {"re": [[...]], "im": [[...]]}. On input a plain nested array of
// numbers or [re, im] pairs is accepted as well.

inline json matrix_to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

inline Matrix matrix_from_json(const json& j, const std::string& where) {
  auto rows_of = [&](const json& a) -> std::size_t {
    if (!a.is_array() || a.empty()) throw ConfigError(where + ": matrix must be a nonempty array");
    return a.size();
  };
  if (j.is_object()) {
    json_util::check_keys(j, {"re", "im"}, where);
    const json& re = j.at("re");
    const std::size_t n = rows_of(re);
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      if (!re[r].is_array() || re[r].size() != n) throw ConfigError(where + ": matrix not square");
      for (std::size_t c = 0; c < n; ++c) {
        const double im = j.contains("im") ? j.at("im").at(r).at(c).get<double>() : 0.0;
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {re[r][c].get<double>(), im};
      }
    }
    return m;
  }
  const std::size_t n = rows_of(j);
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n) throw ConfigError(where + ": matrix not square");
    for (std::size_t c = 0; c < n; ++c) {
      const json& x = j[r][c];
      cplx v;
      if (x.is_number())
        v = {x.get<double>(), 0.0};
      else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number())
        v = {x[0].get<double>(), x[1].get<double>()};
      else
        throw ConfigError(where + ": entries must be numbers or [re, im] pairs");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return m;
}

/// sigma_x, sigma_y, sigma_z, sigma_minus, sigma_plus, proj0, proj1, identity; also the
/// qutrit_sigma_x / qutrit_sigma_z ancilla operators.
inline Operator named_operator(const std::string& name) {
  if (name == "sigma_x" || name == "X") return ops::sigma_x();
  if (name == "sigma_y" || name == "Y") return ops::sigma_y();
  if (name == "sigma_z" || name == "Z") return ops::sigma_z();
  if (name == "sigma_minus") return ops::sigma_minus();
  if (name == "sigma_plus") return ops::sigma_plus();
  if (name == "proj0") return ops::proj0();
  if (name == "proj1") return ops::proj1();
  if (name == "identity" || name == "I") return ops::identity(2);
  if (name == "qutrit_sigma_x") return ops::qutrit_sigma_x();
  if (name == "qutrit_sigma_z") return ops::qutrit_sigma_z();
  throw ConfigError("unknown operator name '" + name + "'");
}

/// Pauli string over all qubits, e.g. "XZI" (character i acts on qubit i).
inline Operator pauli_string(const std::string& s, std::size_t qubits) {
  if (s.size() != qubits)
    throw ConfigError("Pauli string '" + s + "' must have one letter per qubit (" +
                      std::to_string(qubits) + ")");
  std::vector<Operator> f;
  for (char ch : s) {
    switch (ch) {
      case 'I': f.push_back(ops::identity(2)); break;
      case 'X': f.push_back(ops::sigma_x()); break;
      case 'Y': f.push_back(ops::sigma_y()); break;
      case 'Z': f.push_back(ops::sigma_z()); break;
      default: throw ConfigError("invalid Pauli letter '" + std::string(1, ch) + "' in '" + s + "'");
    }
  }
  return kron(f);
}

/// [{"pauli": "XX", "coeff": 1.0}, ...] summed into one operator.
inline Operator pauli_sum(const json& terms, std::size_t qubits, const std::string& where) {
  if (!terms.is_array()) throw ConfigError(where + ": expected a list of Pauli terms");
  Operator out = Operator::zero(Layout(qubits, 2));
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    json_util::check_keys(terms[i], {"pauli", "coeff"}, w);
    const auto p = json_util::required<std::string>(terms[i], "pauli", w);
    double coeff = 1.0;
    json_util::read(terms[i], "coeff", coeff, w);
    out = out + coeff * pauli_string(p, qubits);
  }
  return out;
}

/// One channel: {"op": name, "site": k, "rate": r}, {"pauli": "ZZ", "rate": r} or
/// {"matrix": M, "site"?: k, "rate": r}.
inline JumpSpec parse_system_jump(const json& j, const Layout& layout, const std::string& where) {
  json_util::check_keys(j, {"op", "pauli", "matrix", "site", "rate"}, where);
  const double rate = json_util::required<double>(j, "rate", where);
  std::optional<std::size_t> site;
  if (j.contains("site")) site = json_util::required<std::size_t>(j, "site", where);
  const int forms = int(j.contains("op")) + int(j.contains("pauli")) + int(j.contains("matrix"));
  if (forms != 1) throw ConfigError(where + ": give exactly one of op, pauli, matrix");
  if (site && *site >= layout.size()) throw ConfigError(where + ": site out of range");
  if (j.contains("pauli")) {
    if (site) throw ConfigError(where + ": a Pauli string spans all sites; drop 'site'");
    return {pauli_string(j.at("pauli").get<std::string>(), layout.size()), rate, std::nullopt};
  }
  Operator local = j.contains("op")
                       ? named_operator(j.at("op").get<std::string>())
                       : Operator(matrix_from_json(j.at("matrix"), where + ".matrix"));
  if (site) return {embed_local(local, *site, layout), rate, site};
  if (local.dim() != layout_dim(layout))
    throw ConfigError(where + ": operator without 'site' must act on the whole system");
  return {with_layout(local, layout), rate, std::nullopt};
}

inline JumpSpec parse_ancilla_jump(const json& j, const std::string& where) {
  json_util::check_keys(j, {"op", "matrix", "rate"}, where);
  const double rate = json_util::required<double>(j, "rate", where);
  if (j.contains("op") == j.contains("matrix"))
    throw ConfigError(where + ": give exactly one of op, matrix");
  Operator m = j.contains("op") ? named_operator(j.at("op").get<std::string>())
                                : Operator(matrix_from_json(j.at("matrix"), where + ".matrix"));
  return {std::move(m), rate, std::nullopt};
}

inline Layout parse_layout(const json& doc, const std::string& where) {
  if (doc.contains("layout")) {
    const auto l = json_util::required<std::vector<std::size_t>>(doc, "layout", where);
    if (l.empty()) throw ConfigError(where + ".layout: must be nonempty");
    return l;
  }
  const auto q = json_util::required<std::size_t>(doc, "qubits", where);
  if (q < 1 || q > 12) throw ConfigError(where + ".qubits: must be in [1, 12]");
  return Layout(q, 2);
}

/// {"qubits": n | "layout": [...], "noise": [...], "ancilla_noise": [...]}; other keys are left
/// to the caller.
inline NoiseModel parse_noise(const json& doc, const std::string& where = "noise") {
  json_util::require_object(doc, where);
  NoiseModel n;
  n.system_layout = parse_layout(doc, where);
  if (doc.contains("noise")) {
    const json& list = doc.at("noise");
    if (!list.is_array()) throw ConfigError(where + ".noise: expected a list");
    for (std::size_t i = 0; i < list.size(); ++i)
      n.system_jumps.push_back(
          parse_system_jump(list[i], n.system_layout, where + ".noise[" + std::to_string(i) + "]"));
  }
  if (doc.contains("ancilla_noise")) {
    const json& list = doc.at("ancilla_noise");
    if (!list.is_array()) throw ConfigError(where + ".ancilla_noise: expected a list");
    for (std::size_t i = 0; i < list.size(); ++i)
      n.ancilla_jumps.push_back(
          parse_ancilla_jump(list[i], where + ".ancilla_noise[" + std::to_string(i) + "]"));
  }
  try {
    n.validate();
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return n;
}

inline json plan_to_json(const MitigationPlan& plan) {
  json jumps = json::array();
  for (const auto& l : plan.joint_jumps) jumps.push_back(matrix_to_json(l.matrix()));
  return {{"variant", std::string(variant_name(plan.variant))},
          {"system_layout", plan.system_layout},
          {"ancilla_layout", plan.ancilla_layout},
          {"a", plan.a},
          {"delta", plan.delta},
          {"correctable", plan.correctable},
          {"ancilla_rates", plan.ancilla_rates},
          {"measurement", matrix_to_json(plan.measurement.matrix())},
          {"initial_ancilla", matrix_to_json(plan.initial_ancilla.matrix())},
          {"jumps", std::move(jumps)}};
}

inline MitigationPlan plan_from_json(const json& j) {
  const std::string w = "plan";
  json_util::check_keys(j, {"variant", "system_layout", "ancilla_layout", "a", "delta",
                            "correctable", "ancilla_rates", "measurement", "initial_ancilla",
                            "jumps"},
                        w);
  MitigationPlan p;
  try {
    p.variant = parse_variant(json_util::required<std::string>(j, "variant", w));
  } catch (const ValueError& e) {
    throw ConfigError(w + ".variant: " + e.what());
  }
  p.system_layout = json_util::required<Layout>(j, "system_layout", w);
  p.ancilla_layout = json_util::required<Layout>(j, "ancilla_layout", w);
  p.a = json_util::required<double>(j, "a", w);
  p.delta = json_util::required<double>(j, "delta", w);
  json_util::read(j, "correctable", p.correctable, w);
  json_util::read(j, "ancilla_rates", p.ancilla_rates, w);
  try {
    p.measurement =
        Operator(matrix_from_json(j.at("measurement"), w + ".measurement"), p.ancilla_layout);
    p.initial_ancilla = Operator(matrix_from_json(j.at("initial_ancilla"), w + ".initial_ancilla"),
                                 p.ancilla_layout);
    const Layout joint = p.joint_layout();
    for (const auto& m : j.at("jumps"))
      p.joint_jumps.emplace_back(matrix_from_json(m, w + ".jumps"), joint);
  } catch (const json::exception& e) {
    throw ConfigError(w + ": " + e.what());
  } catch (const DimensionError& e) {
    throw ConfigError(w + ": " + e.what());
  }
  return p;
}

}  // namespace lmit::io

#endif  // LMIT_PLAN_IO_HPP
