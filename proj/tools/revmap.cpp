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

// revmap command-line interface.
//
//   revmap fetch-data [--dir D] [--mirror URL|DIR] [--synthetic]
//   revmap verify [--level fast|full] [--inject-fault] [--json FILE]
//   revmap embed (--alpha A | --amplitude) [--M m] --in X.csv --out Y.csv
//   revmap run --config FILE [--out DIR]
//   revmap plot LOSS.csv... --out FIG.svg
//
// Exit codes: 0 success, 1 verification failure, 2 usage/config error,
// 3 I/O error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "revmap/config.hpp"
#include "revmap/embeddings.hpp"
#include "revmap/fetch.hpp"
#include "revmap/plot.hpp"
#include "revmap/results.hpp"
#include "revmap/training.hpp"
#include "revmap/verify.hpp"

namespace fs = std::filesystem;
using namespace revmap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::kConfigError:
    case ErrorCode::kInvalidInput:
    case ErrorCode::kOutOfDomain:
    case ErrorCode::kZeroVector:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kLengthMismatch:
    case ErrorCode::kBudgetTooSmall:
    case ErrorCode::kEmptyInput:
      return kExitUsage;
    default:
      return kExitIo;
  }
}

int cmd_fetch(const fs::path& dir, const std::string& mirror, bool synthetic) {
  try {
    const auto rep = fetch_fashion(dir, mirror);
    for (const auto& f : rep.already_present) std::cout << "present     " << f << "\n";
    for (const auto& f : rep.downloaded) std::cout << "downloaded  " << f << "\n";
    std::cout << "verified " << dir.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    if (synthetic && e.code() == ErrorCode::kNetworkError) {
      std::cerr << "fetch failed (" << e.what() << "); writing synthetic stand-in data\n";
      write_synthetic_fashion(dir);
      verify_fashion_dir(dir);
      std::cout << "synthetic " << dir.string() << "\n";
      return kExitOk;
    }
    throw;
  }
}

int cmd_verify(const std::string& level, bool fault, const std::string& json_path,
               std::uint64_t seed) {
  VerifyOptions o;
  o.level = level == "full" ? VerifyLevel::kFull : VerifyLevel::kFast;
  o.inject_fault = fault;
  o.seed = seed;
  const auto results = run_verify(o);
  for (const auto& r : results) {
    std::printf("%-26s %s  worst=%.3e tol=%.0e cases=%zu %.2fs%s%s\n", r.name.c_str(),
                r.passed ? "PASS" : "FAIL", r.worst, r.tolerance, r.cases, r.seconds,
                r.detail.empty() ? "" : "  ", r.detail.c_str());
  }
  const std::string json = verify_json(o, results).dump(2);
  if (json_path.empty()) {
    std::cout << json << "\n";
  } else {
    write_text_file(json_path, json + "\n");
  }
  return all_passed(results) ? kExitOk : kExitVerifyFailed;
}

std::vector<Eigen::VectorXd> read_vectors_csv(const fs::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<Eigen::VectorXd> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> v;
    std::size_t b = 0;
    while (true) {
      const auto c = line.find(',', b);
      v.push_back(parse_real(detail::trim(std::string_view(line).substr(
          b, c == std::string::npos ? std::string::npos : c - b))));
      if (c == std::string::npos) break;
      b = c + 1;
    }
    rows.push_back(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "no rows in " + path.string());
  return rows;
}

int cmd_embed(const std::string& alpha_text, bool amplitude, double M, const fs::path& in,
              const fs::path& out) {
  const auto rows = read_vectors_csv(in);
  std::string text;
  for (const auto& x : rows) {
    Eigen::VectorXd y;
    if (amplitude) {
      Eigen::Index dim = 1;
      while (dim < x.size()) dim <<= 1;
      Eigen::VectorXd padded = Eigen::VectorXd::Zero(dim);
      padded.head(x.size()) = x;
      y = amplitude_embed(padded, dim).coords;
    } else {
      y = embed(EmbeddingConfig{Alpha::parse(alpha_text), M}, x).coords;
    }
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (i) text += ',';
      text += format_real(y[i] + 0.0);
    }
    text += '\n';
  }
  write_text_file(out, text);
  return kExitOk;
}

std::string run_file_stem(const RunReport& r) {
  std::string s = r.embedding;
  if (r.embedding != "amplitude") s += "_M" + format_real(r.scale_M);
  return s + "_" + std::string(to_string(r.model_kind));
}

int cmd_run(const fs::path& config_path, fs::path out_dir) {
  if (!fs::exists(config_path)) {
    throw Error(ErrorCode::kConfigError, "config not found: " + config_path.string());
  }
  const RunConfig cfg = load_run_config(config_path);
  validate_paths(cfg);
  if (out_dir.empty()) out_dir = fs::path("results") / cfg.name;
  fs::create_directories(out_dir / "loss");

  std::optional<FashionPool> pool;
  if (cfg.base.data.source == SourceKind::kFashionMnist) {
    pool = load_fashion_pool(cfg.base.data.fashion_dir);
    if (fs::exists(cfg.base.data.fashion_dir / kSyntheticMarker)) {
      std::cerr << "warning: " << cfg.base.data.fashion_dir.string()
                << " holds synthetic stand-in data\n";
    }
  }

  std::vector<RunReport> reports;
  std::vector<RepeatRow> repeat_table;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& row : cfg.rows) {
    for (auto kind : cfg.models) {
      const ExperimentConfig ec = cfg.experiment(row, kind);
      RunReport rep = train(ec, pool ? &*pool : nullptr);
      const MeanStd acc = rep.test_accuracy();
      double gap = 0.0;
      for (const auto& r : rep.repeats) gap = std::max(gap, r.flip_gap);
      std::printf("%-24s M=%-8s %-19s test %.4f +- %.4f  train %.4f  flip_gap %.2e\n",
                  rep.embedding.c_str(), format_real(rep.scale_M).c_str(),
                  std::string(to_string(kind)).c_str(), acc.mean, acc.std,
                  rep.train_accuracy().mean, gap);
      std::fflush(stdout);
      write_text_file(out_dir / "loss" / (run_file_stem(rep) + ".csv"),
                      write_loss_csv(loss_rows(rep)));
      const auto rows = repeat_rows(rep);
      repeat_table.insert(repeat_table.end(), rows.begin(), rows.end());
      reports.push_back(std::move(rep));
    }
  }
  write_text_file(out_dir / "summary.csv", write_summary_csv(summarize(reports)));
  write_text_file(out_dir / "repeats.csv", write_repeat_csv(repeat_table));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("wrote %s (%.1f s)\n", out_dir.string().c_str(), secs);
  return kExitOk;
}

int cmd_plot(const std::vector<std::string>& inputs, const fs::path& out) {
  if (inputs.empty()) throw Error(ErrorCode::kEmptyInput, "no loss CSVs given");
  std::vector<LossRow> rows;
  for (const auto& p : inputs) {
    const auto part = parse_loss_csv(read_text_file(p));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  write_text_file(out, render_loss_svg(rows));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reverse map projection embeddings for quantum classifiers"};
  app.require_subcommand(1);

  auto* fetch = app.add_subcommand("fetch-data", "Download and verify Fashion-MNIST");
  std::string fetch_dir = default_data_dir().string();
  std::string mirror = kDefaultFashionMirror;
  bool synthetic = false;
  fetch->add_option("--dir", fetch_dir, "Destination directory");
  fetch->add_option("--mirror", mirror, "Base URL or local directory holding the .gz files");
  fetch->add_flag("--synthetic", synthetic, "Write synthetic stand-in data if the fetch fails");

  auto* verify = app.add_subcommand("verify", "Run the property suites");
  std::string level = "fast", json_path;
  bool fault = false;
  std::uint64_t seed = VerifyOptions{}.seed;
  verify->add_option("--level", level)->check(CLI::IsMember({"fast", "full"}));
  verify->add_flag("--inject-fault", fault, "Use the linear middle coefficient");
  verify->add_option("--json", json_path, "Write the JSON summary here instead of stdout");
  verify->add_option("--seed", seed);

  auto* embed_cmd = app.add_subcommand("embed", "Embed CSV rows");
  std::string alpha_text, in_path, out_path;
  bool amplitude = false;
  double M = 1.0;
  auto* alpha_opt = embed_cmd->add_option("--alpha", alpha_text,
                                          "gnomonic|stereographic|twilight|orthographic|<real>");
  auto* amp_opt = embed_cmd->add_flag("--amplitude", amplitude);
  alpha_opt->excludes(amp_opt);
  embed_cmd->add_option("--M", M, "Scale divisor")->check(CLI::PositiveNumber);
  embed_cmd->add_option("--in", in_path)->required();
  embed_cmd->add_option("--out", out_path)->required();

  auto* run = app.add_subcommand("run", "Run an experiment table from a config file");
  std::string config_path, run_out;
  run->add_option("--config", config_path)->required();
  run->add_option("--out", run_out, "Output directory");

  auto* plot = app.add_subcommand("plot", "Plot loss CSVs as SVG");
  std::vector<std::string> plot_inputs;
  std::string plot_out;
  plot->add_option("inputs", plot_inputs)->required();
  plot->add_option("--out", plot_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fetch) return cmd_fetch(fetch_dir, mirror, synthetic);
    if (*verify) return cmd_verify(level, fault, json_path, seed);
    if (*embed_cmd) {
      if (alpha_text.empty() && !amplitude) {
        std::cerr << "embed: one of --alpha or --amplitude is required\n";
        return kExitUsage;
      }
      return cmd_embed(alpha_text, amplitude, M, in_path, out_path);
    }
    if (*run) return cmd_run(config_path, run_out);
    if (*plot) return cmd_plot(plot_inputs, plot_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
