// Copyright 2026 The revmap Authors. All Rights Reserved.
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

#pragma once

// Flat `key = value` experiment configuration.
//
//   # comment
//   name = desk_scale
//   source = fashion_mnist        # or synthetic
//   data_dir = ../data/fashion-mnist
//   count = 60
//   repeats = 3
//   budget = 150
//   row = amplitude
//   row = twilight 800
//
// `row` may repeat; each row is trained with every model in `models`.
// Relative paths resolve against the config file's directory.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "revmap/alpha.hpp"
#include "revmap/data.hpp"
#include "revmap/error.hpp"
#include "revmap/model.hpp"
#include "revmap/optimize.hpp"
#include "revmap/training.hpp"

#ifndef REVMAP_FASHION_DIR
#define REVMAP_FASHION_DIR "data/fashion-mnist"
#endif

namespace revmap {

inline constexpr const char* kDataDirEnv = "REVMAP_DATA_DIR";

/// REVMAP_DATA_DIR if set and non-empty, else the build-time default.
inline std::filesystem::path default_data_dir() {
  const char* env = std::getenv(kDataDirEnv);
  if (env != nullptr && *env != '\0') return env;
  return REVMAP_FASHION_DIR;
}

struct TableRow {
  EmbeddingChoice embedding;
  double scale_M = 1.0;
};

struct RunConfig {
  std::string name = "experiment";
  /// Embedding, scale and model are taken from `rows` and `models`.
  ExperimentConfig base;
  std::vector<TableRow> rows;
  std::vector<AnsatzKind> models{AnsatzKind::kHardwareEfficient, AnsatzKind::kEquivariant};

  ExperimentConfig experiment(const TableRow& row, AnsatzKind kind) const {
    ExperimentConfig c = base;
    c.embedding = row.embedding;
    c.scale_M = row.scale_M;
    c.model_kind = kind;
    c.data.mode = data_mode_for(kind);
    return c;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != ',') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

[[noreturn]] inline void config_fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kConfigError, "line " + std::to_string(line) + ": " + msg);
}

template <class T>
T parse_number(std::string_view v, std::size_t line, std::string_view key) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    config_fail(line, "bad value for " + std::string(key) + ": '" + std::string(v) + "'");
  }
  return out;
}

inline bool parse_bool(std::string_view v, std::size_t line, std::string_view key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  config_fail(line, "bad boolean for " + std::string(key));
}

inline TableRow parse_row(std::string_view v, std::size_t line) {
  const auto parts = split_ws(v);
  if (parts.empty() || parts.size() > 2) config_fail(line, "row expects '<embedding> [M]'");
  TableRow row;
  try {
    if (parts[0] == "amplitude") {
      row.embedding = EmbeddingChoice::amplitude_embedding();
    } else {
      row.embedding = EmbeddingChoice::reverse(Alpha::parse(parts[0]));
    }
  } catch (const Error& e) {
    config_fail(line, e.what());
  }
  if (parts.size() == 2) row.scale_M = parse_number<double>(parts[1], line, "M");
  if (!(row.scale_M > 0.0) || !std::isfinite(row.scale_M)) {
    config_fail(line, "M must be positive and finite");
  }
  return row;
}

}  // namespace detail

/// Parses config text. Relative paths resolve against `base_dir`.
inline RunConfig parse_run_config(std::string_view text,
                                  const std::filesystem::path& base_dir = {}) {
  using detail::parse_number;
  RunConfig cfg;
  cfg.base.data.source = SourceKind::kFashionMnist;
  cfg.base.data.fashion_dir = default_data_dir();
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) detail::config_fail(line_no, "expected key = value");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (value.empty()) detail::config_fail(line_no, "empty value for " + key);

    auto& d = cfg.base.data;
    auto& o = cfg.base.optimizer;
    if (key == "name") {
      cfg.name = value;
    } else if (key == "source") {
      if (value == "fashion_mnist") d.source = SourceKind::kFashionMnist;
      else if (value == "synthetic") d.source = SourceKind::kSynthetic;
      else detail::config_fail(line_no, "source must be fashion_mnist or synthetic");
    } else if (key == "data_dir") {
      std::filesystem::path p{std::string(value)};
      d.fashion_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    } else if (key == "count") {
      d.count = parse_number<std::size_t>(value, line_no, key);
    } else if (key == "test_fraction") {
      d.test_fraction = parse_number<double>(value, line_no, key);
      if (!(d.test_fraction >= 0.0 && d.test_fraction < 1.0))
        detail::config_fail(line_no, "test_fraction must be in [0, 1)");
    } else if (key == "sample_seed") {
      d.sample_seed = parse_number<std::uint64_t>(value, line_no, key);
    } else if (key == "flip_seed") {
      d.flip_seed = parse_number<std::uint64_t>(value, line_no, key);
    } else if (key == "split_seed") {
      d.split_seed = parse_number<std::uint64_t>(value, line_no, key);
    } else if (key == "corner_rule") {
      if (value == "zero") d.corner_rule = CornerRule::kZero;
      else if (value == "copy_final") d.corner_rule = CornerRule::kCopyFinal;
      else detail::config_fail(line_no, "corner_rule must be zero or copy_final");
    } else if (key == "repeats") {
      cfg.base.repeats = parse_number<std::size_t>(value, line_no, key);
      if (cfg.base.repeats == 0) detail::config_fail(line_no, "repeats must be positive");
    } else if (key == "seed") {
      cfg.base.seed = parse_number<std::uint64_t>(value, line_no, key);
    } else if (key == "reseed_data") {
      cfg.base.reseed_data_per_repeat = detail::parse_bool(value, line_no, key);
    } else if (key == "method") {
      try {
        o.method = parse_method(value);
      } catch (const Error& e) {
        detail::config_fail(line_no, e.what());
      }
    } else if (key == "budget") {
      o.budget = parse_number<std::size_t>(value, line_no, key);
    } else if (key == "nm_initial_step") {
      o.nelder_mead.initial_step = parse_number<double>(value, line_no, key);
    } else if (key == "models") {
      cfg.models.clear();
      for (auto m : detail::split_ws(value)) {
        try {
          cfg.models.push_back(parse_ansatz_kind(m));
        } catch (const Error& e) {
          detail::config_fail(line_no, e.what());
        }
      }
    } else if (key == "row") {
      cfg.rows.push_back(detail::parse_row(value, line_no));
    } else {
      detail::config_fail(line_no, "unknown key '" + key + "'");
    }
  }
  if (cfg.rows.empty()) throw Error(ErrorCode::kConfigError, "config has no rows");
  if (cfg.models.empty()) throw Error(ErrorCode::kConfigError, "config has no models");
  if (cfg.base.data.source == SourceKind::kSynthetic && cfg.base.data.count % 2 != 0) {
    throw Error(ErrorCode::kConfigError, "synthetic count must be even");
  }
  if (cfg.base.data.count < 2) throw Error(ErrorCode::kConfigError, "count must be >= 2");
  return cfg;
}

/// Checks every path the run will read. Call before doing any work.
inline void validate_paths(const RunConfig& cfg) {
  if (cfg.base.data.source != SourceKind::kFashionMnist) return;
  const auto& dir = cfg.base.data.fashion_dir;
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kMissingFiles, "data directory not found: " + dir.string() +
                                              " (run fetch-data or set " + kDataDirEnv + ")");
  }
  for (const auto* name : kFashionFiles) {
    if (detail::locate(dir, name).empty()) {
      throw Error(ErrorCode::kMissingFiles, "missing " + (dir / name).string());
    }
  }
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

}  // namespace revmap
