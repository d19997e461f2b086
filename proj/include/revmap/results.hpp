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

// CSV tables for loss histories, per-repeat outcomes and the accuracy
// summary. Reals are written with %.17g so a re-parse is exact; an empty
// alpha field means amplitude embedding.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "revmap/data.hpp"
#include "revmap/error.hpp"
#include "revmap/model.hpp"
#include "revmap/training.hpp"

namespace revmap {

inline std::string format_real(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_real(std::string_view s) {
  if (s.empty()) return std::nan("");
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size()) {
    throw Error(ErrorCode::kInvalidInput, "not a number: '" + tmp + "'");
  }
  return v;
}

/// Equality that treats two NaNs as equal.
inline bool same_real(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string write_csv(const CsvTable& t) {
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].find_first_of(",\n\"") != std::string::npos) {
        throw Error(ErrorCode::kInvalidInput, "CSV cell needs quoting: " + cells[i]);
      }
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(t.header);
  for (const auto& r : t.rows) emit(r);
  return out;
}

inline CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t b = 0;
    while (true) {
      const auto c = line.find(',', b);
      cells.emplace_back(line.substr(b, c == std::string_view::npos ? line.npos : c - b));
      if (c == std::string_view::npos) break;
      b = c + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size()) {
        throw Error(ErrorCode::kInvalidInput, "CSV row width differs from header");
      }
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw Error(ErrorCode::kEmptyInput, "CSV has no header");
  return t;
}

inline void expect_header(const CsvTable& t, const std::vector<std::string>& want) {
  if (t.header != want) throw Error(ErrorCode::kInvalidInput, "unexpected CSV columns");
}

// ---- loss histories ---------------------------------------------------------

struct LossRow {
  std::string embedding;
  double alpha = 0.0;
  double scale_M = 1.0;
  std::string model_kind;
  std::size_t repeat = 0;
  std::size_t iteration = 0;
  double loss = 0.0;

  bool operator==(const LossRow& o) const {
    return embedding == o.embedding && same_real(alpha, o.alpha) && scale_M == o.scale_M &&
           model_kind == o.model_kind && repeat == o.repeat && iteration == o.iteration &&
           loss == o.loss;
  }
};

inline const std::vector<std::string> kLossColumns = {
    "embedding", "alpha", "M", "model_kind", "repeat", "iteration", "loss"};

/// One row per objective evaluation; `loss` is the best value seen so far.
inline std::vector<LossRow> loss_rows(const RunReport& report) {
  std::vector<LossRow> out;
  for (const auto& rep : report.repeats) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& h : rep.history) {
      best = std::min(best, h.loss);
      out.push_back({report.embedding, report.alpha, report.scale_M,
                     std::string(to_string(report.model_kind)), rep.repeat, h.iteration, best});
    }
  }
  return out;
}

inline std::string write_loss_csv(const std::vector<LossRow>& rows) {
  CsvTable t{kLossColumns, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.embedding, format_real(r.alpha), format_real(r.scale_M), r.model_kind,
                      std::to_string(r.repeat), std::to_string(r.iteration),
                      format_real(r.loss)});
  }
  return write_csv(t);
}

inline std::vector<LossRow> parse_loss_csv(std::string_view text) {
  const CsvTable t = parse_csv(text);
  expect_header(t, kLossColumns);
  std::vector<LossRow> out;
  for (const auto& c : t.rows) {
    out.push_back({c[0], parse_real(c[1]), parse_real(c[2]), c[3],
                   static_cast<std::size_t>(std::stoull(c[4])),
                   static_cast<std::size_t>(std::stoull(c[5])), parse_real(c[6])});
  }
  return out;
}

// ---- per-repeat outcomes ----------------------------------------------------

struct RepeatRow {
  std::string embedding;
  double alpha = 0.0;
  double scale_M = 1.0;
  std::string model_kind;
  std::size_t repeat = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double best_loss = 0.0;
  double flip_gap = 0.0;

  bool operator==(const RepeatRow& o) const {
    return embedding == o.embedding && same_real(alpha, o.alpha) && scale_M == o.scale_M &&
           model_kind == o.model_kind && repeat == o.repeat &&
           train_accuracy == o.train_accuracy && test_accuracy == o.test_accuracy &&
           best_loss == o.best_loss && flip_gap == o.flip_gap;
  }
};

inline const std::vector<std::string> kRepeatColumns = {
    "embedding", "alpha", "M", "model_kind", "repeat",
    "train_acc", "test_acc", "best_loss", "flip_gap"};

inline std::vector<RepeatRow> repeat_rows(const RunReport& report) {
  std::vector<RepeatRow> out;
  for (const auto& r : report.repeats) {
    out.push_back({report.embedding, report.alpha, report.scale_M,
                   std::string(to_string(report.model_kind)), r.repeat, r.train_accuracy,
                   r.test_accuracy, r.best_loss, r.flip_gap});
  }
  return out;
}

inline std::string write_repeat_csv(const std::vector<RepeatRow>& rows) {
  CsvTable t{kRepeatColumns, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.embedding, format_real(r.alpha), format_real(r.scale_M), r.model_kind,
                      std::to_string(r.repeat), format_real(r.train_accuracy),
                      format_real(r.test_accuracy), format_real(r.best_loss),
                      format_real(r.flip_gap)});
  }
  return write_csv(t);
}

inline std::vector<RepeatRow> parse_repeat_csv(std::string_view text) {
  const CsvTable t = parse_csv(text);
  expect_header(t, kRepeatColumns);
  std::vector<RepeatRow> out;
  for (const auto& c : t.rows) {
    out.push_back({c[0], parse_real(c[1]), parse_real(c[2]), c[3],
                   static_cast<std::size_t>(std::stoull(c[4])), parse_real(c[5]),
                   parse_real(c[6]), parse_real(c[7]), parse_real(c[8])});
  }
  return out;
}

// ---- summary ----------------------------------------------------------------

struct SummaryRow {
  std::string embedding;
  double alpha = 0.0;
  double scale_M = 1.0;
  double non_equivariant_mean = std::nan("");
  double non_equivariant_std = std::nan("");
  double equivariant_mean = std::nan("");
  double equivariant_std = std::nan("");

  bool operator==(const SummaryRow& o) const {
    return embedding == o.embedding && same_real(alpha, o.alpha) && scale_M == o.scale_M &&
           same_real(non_equivariant_mean, o.non_equivariant_mean) &&
           same_real(non_equivariant_std, o.non_equivariant_std) &&
           same_real(equivariant_mean, o.equivariant_mean) &&
           same_real(equivariant_std, o.equivariant_std);
  }
};

inline const std::vector<std::string> kSummaryColumns = {
    "embedding", "alpha", "M", "non_equivariant_acc_mean", "non_equivariant_acc_std",
    "equivariant_acc_mean", "equivariant_acc_std"};

/// Folds reports of the same (embedding, M) into one row; absent models stay NaN.
inline std::vector<SummaryRow> summarize(const std::vector<RunReport>& reports) {
  std::vector<SummaryRow> out;
  for (const auto& r : reports) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SummaryRow& s) {
      return s.embedding == r.embedding && same_real(s.alpha, r.alpha) &&
             s.scale_M == r.scale_M;
    });
    if (it == out.end()) {
      out.push_back({r.embedding, r.alpha, r.scale_M});
      it = std::prev(out.end());
    }
    const MeanStd acc = r.test_accuracy();
    if (r.model_kind == AnsatzKind::kEquivariant) {
      it->equivariant_mean = acc.mean;
      it->equivariant_std = acc.std;
    } else {
      it->non_equivariant_mean = acc.mean;
      it->non_equivariant_std = acc.std;
    }
  }
  return out;
}

inline std::string write_summary_csv(const std::vector<SummaryRow>& rows) {
  CsvTable t{kSummaryColumns, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.embedding, format_real(r.alpha), format_real(r.scale_M),
                      format_real(r.non_equivariant_mean), format_real(r.non_equivariant_std),
                      format_real(r.equivariant_mean), format_real(r.equivariant_std)});
  }
  return write_csv(t);
}

inline std::vector<SummaryRow> parse_summary_csv(std::string_view text) {
  const CsvTable t = parse_csv(text);
  expect_header(t, kSummaryColumns);
  std::vector<SummaryRow> out;
  for (const auto& c : t.rows) {
    out.push_back({c[0], parse_real(c[1]), parse_real(c[2]), parse_real(c[3]),
                   parse_real(c[4]), parse_real(c[5]), parse_real(c[6])});
  }
  return out;
}

// ---- prepared samples -------------------------------------------------------

/// Header p0..p254,label; one row per sample.
inline std::string write_prepared_csv(std::span<const Sample> samples) {
  CsvTable t;
  for (int i = 0; i < kFinalPixel; ++i) t.header.push_back("p" + std::to_string(i));
  t.header.push_back("label");
  for (const auto& s : samples) {
    std::vector<std::string> row;
    for (Eigen::Index i = 0; i < s.prepared.vector.size(); ++i) {
      row.push_back(format_real(s.prepared.vector[i]));
    }
    row.push_back(std::to_string(s.prepared.label));
    t.rows.push_back(std::move(row));
  }
  return write_csv(t);
}

inline std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + p.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + p.string());
}

}  // namespace revmap
