// Copyright (c) 2026 ewt-lab contributors
// SPDX-License-Identifier: MIT
#include "output.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace ewtlab {

namespace fs = std::filesystem;

std::string Table::fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << text;
  if (!os) throw std::runtime_error("write failed: " + p.string());
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string write_table(const Config& c, const std::string& name, const Table& t) {
  if (c.out.empty()) return {};
  fs::create_directories(c.out);
  const fs::path csv = fs::path(c.out) / (name + ".csv");
  std::string text = kSchemaLine;
  text += "\n# config-hash: " + config_hash(c) + " seed: " + std::to_string(c.seed) + "\n";
  text += t.header() + "\n" + t.body();
  write_file(csv, text);
  const json meta{{"file", csv.filename().string()},
                  {"timestamp", utc_now()},
                  {"rows", t.rows()},
                  {"config_hash", config_hash(c)},
                  {"config", to_json(c)}};
  write_file(fs::path(c.out) / (name + ".meta.json"), meta.dump(2) + "\n");
  return csv.string();
}

std::string write_text(const Config& c, const std::string& name, const std::string& text) {
  if (c.out.empty()) return {};
  fs::create_directories(c.out);
  const fs::path p = fs::path(c.out) / name;
  write_file(p, text);
  return p.string();
}

}  // namespace ewtlab
