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

#ifndef LMIT_CSV_HPP
#define LMIT_CSV_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

#include "lmit/error.hpp"

namespace lmit {

/// Thrown when an output file cannot be written.
class IoError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "io"; }
};

/// Floats with 12 significant digits; non-finite values as nan/inf.
inline std::string format_float(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

using CsvCell = std::variant<double, long long, std::string>;

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : path_(path), out_(path) {
    if (!out_) throw IoError("cannot open '" + path.string() + "' for writing");
    write_strings(header);
  }

  void row(std::initializer_list<CsvCell> cells) { row(std::vector<CsvCell>(cells)); }

  void row(const std::vector<CsvCell>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (const auto& c : cells) {
      if (const auto* d = std::get_if<double>(&c))
        s.push_back(format_float(*d));
      else if (const auto* i = std::get_if<long long>(&c))
        s.push_back(std::to_string(*i));
      else
        s.push_back(std::get<std::string>(c));
    }
    write_strings(s);
  }

 private:
  void write_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    if (!out_) throw IoError("write to '" + path_.string() + "' failed");
  }

  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace lmit

#endif  // LMIT_CSV_HPP
