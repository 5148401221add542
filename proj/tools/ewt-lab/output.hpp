// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "config.hpp"

namespace ewtlab {

inline constexpr const char* kSchemaLine = "# ewt-lab v1 schema";

/// CSV body builder; numbers use %.12g so identical runs give identical bytes.
class Table {
 public:
  explicit Table(std::string header) : header_(std::move(header)) {}

  template <class... Ts>
  void row(const Ts&... vals) {
    std::string line;
    bool first = true;
    (append(line, first, vals), ...);
    body_ += line;
    body_ += '\n';
    ++rows_;
  }

  const std::string& header() const { return header_; }
  const std::string& body() const { return body_; }
  std::size_t rows() const { return rows_; }

 private:
  std::string header_, body_;
  std::size_t rows_ = 0;

  static std::string fmt(double v);
  template <class T>
  static void append(std::string& line, bool& first, const T& v) {
    if (!first) line += ',';
    first = false;
    if constexpr (std::is_same_v<T, std::string> || std::is_same_v<T, const char*> ||
                  std::is_array_v<T>)
      line += v;
    else if constexpr (std::is_same_v<T, bool>)
      line += v ? "1" : "0";
    else if constexpr (std::is_integral_v<T>)
      line += std::to_string(v);
    else
      line += fmt(static_cast<double>(v));
  }
};

/// Writes <out>/<name>.csv (schema line, config-hash/seed line, header, body)
/// and <out>/<name>.meta.json (timestamp and full config).  Returns the CSV
/// path, or an empty string when no output directory is configured.
std::string write_table(const Config& c, const std::string& name, const Table& t);
/// Writes a plain text artifact (e.g. a tree serialization) under <out>.
std::string write_text(const Config& c, const std::string& name, const std::string& text);

}  // namespace ewtlab
