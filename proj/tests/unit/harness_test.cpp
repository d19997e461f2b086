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

#include <filesystem>
#include <thread>

#include <gtest/gtest.h>

#include "revmap/config.hpp"
#include "revmap/fetch.hpp"
#include "revmap/plot.hpp"
#include "revmap/results.hpp"
#include "revmap/verify.hpp"

namespace revmap {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("revmap_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(ConfigTest, ParsesRowsAndKeys) {
  const auto cfg = parse_run_config(R"(
# desk run
name = desk
source = synthetic
count = 60   # images
test_fraction = 0.3
repeats = 3
budget = 150
method = spsa
seed = 9
models = equivariant
row = amplitude
row = twilight 800
row = -5, 12.5
)");
  EXPECT_EQ(cfg.name, "desk");
  EXPECT_EQ(cfg.base.data.source, SourceKind::kSynthetic);
  EXPECT_EQ(cfg.base.data.count, 60u);
  EXPECT_EQ(cfg.base.repeats, 3u);
  EXPECT_EQ(cfg.base.optimizer.budget, 150u);
  EXPECT_EQ(cfg.base.optimizer.method, Method::kSpsa);
  ASSERT_EQ(cfg.models.size(), 1u);
  ASSERT_EQ(cfg.rows.size(), 3u);
  EXPECT_TRUE(cfg.rows[0].embedding.amplitude);
  EXPECT_EQ(cfg.rows[1].embedding.alpha, Alpha::twilight());
  EXPECT_EQ(cfg.rows[1].scale_M, 800.0);
  EXPECT_EQ(cfg.rows[2].embedding.alpha.value(), -5.0);
  EXPECT_EQ(cfg.rows[2].scale_M, 12.5);
  const auto ec = cfg.experiment(cfg.rows[1], AnsatzKind::kEquivariant);
  EXPECT_EQ(ec.data.mode, DataMode::kEquivariant);
  EXPECT_EQ(cfg.experiment(cfg.rows[1], AnsatzKind::kHardwareEfficient).data.mode,
            DataMode::kNonEquivariant);
}

TEST(ConfigTest, Rejections) {
  auto code_of = [](const std::string& text) {
    try {
      parse_run_config(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  EXPECT_EQ(code_of("row = amplitude\nbogus = 1\n"), ErrorCode::kConfigError);
  EXPECT_EQ(code_of("count = 10\n"), ErrorCode::kConfigError);
  EXPECT_EQ(code_of("row = twilight 0\n"), ErrorCode::kConfigError);
  EXPECT_EQ(code_of("row = north 1\n"), ErrorCode::kConfigError);
  EXPECT_EQ(code_of("row = amplitude\ncount = ten\n"), ErrorCode::kConfigError);
  EXPECT_EQ(code_of("row = amplitude\nsource = synthetic\ncount = 7\n"), ErrorCode::kConfigError);
  EXPECT_EQ(code_of("row amplitude\n"), ErrorCode::kConfigError);
  EXPECT_THROW(load_run_config("/nonexistent/run.cfg"), Error);
}

TEST(ConfigTest, PathsResolveAndValidate) {
  const auto dir = scratch("cfg");
  write_text_file(dir / "a.cfg", "data_dir = nothere\nrow = amplitude\n");
  const auto cfg = load_run_config(dir / "a.cfg");
  EXPECT_EQ(cfg.base.data.fashion_dir, dir / "nothere");
  EXPECT_THROW(validate_paths(cfg), Error);
  write_synthetic_fashion(dir / "nothere", 4, 2);
  EXPECT_NO_THROW(validate_paths(cfg));
}

TEST(ConfigTest, EnvironmentOverride) {
  setenv(kDataDirEnv, "/tmp/elsewhere", 1);
  EXPECT_EQ(default_data_dir(), fs::path("/tmp/elsewhere"));
  unsetenv(kDataDirEnv);
  EXPECT_EQ(default_data_dir(), fs::path(REVMAP_FASHION_DIR));
}

TEST(CsvTest, LossRoundTripIsExact) {
  std::vector<LossRow> rows;
  for (int k = 1; k <= 5; ++k) {
    rows.push_back({"reverse_twilight", Alpha::twilight().value(), 800.0, "equivariant", 0,
                    static_cast<std::size_t>(k), 1.0 / (3.0 + k)});
  }
  rows.push_back({"amplitude", std::nan(""), 1.0, "hardware_efficient", 1, 1, 0.1 + 0.2});
  rows.push_back({"reverse_orthographic", -INFINITY, 2500.0, "equivariant", 2, 3, 5e-324});
  EXPECT_EQ(parse_loss_csv(write_loss_csv(rows)), rows);
}

TEST(CsvTest, SummaryAndRepeatRoundTrip) {
  std::vector<SummaryRow> s{{"amplitude", std::nan(""), 1.0, 0.8092, 0.0327, 0.6, 0.1},
                            {"reverse_gnomonic", 0.0, 2000.0, 1.0 / 3.0, 0.0, std::nan(""),
                             std::nan("")}};
  EXPECT_EQ(parse_summary_csv(write_summary_csv(s)), s);
  std::vector<RepeatRow> r{{"reverse_stereographic", -1.0, 1.0, "equivariant", 4, 0.5, 2.0 / 3.0,
                            0.693, 1e-17}};
  EXPECT_EQ(parse_repeat_csv(write_repeat_csv(r)), r);
  EXPECT_THROW(parse_loss_csv("a,b\n1,2\n"), Error);
  EXPECT_THROW(parse_csv(""), Error);
}

TEST(CsvTest, SummaryFoldsModels) {
  RunReport a, b;
  a.embedding = b.embedding = "reverse_twilight";
  a.alpha = b.alpha = Alpha::twilight().value();
  a.scale_M = b.scale_M = 800.0;
  a.model_kind = AnsatzKind::kHardwareEfficient;
  b.model_kind = AnsatzKind::kEquivariant;
  auto rep = [](std::size_t r, double acc) {
    RepeatResult x;
    x.repeat = r;
    x.test_accuracy = acc;
    return x;
  };
  a.repeats = {rep(0, 0.5), rep(1, 0.7)};
  b.repeats = {rep(0, 0.9)};
  const auto rows = summarize({a, b});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_DOUBLE_EQ(rows[0].non_equivariant_mean, 0.6);
  EXPECT_NEAR(rows[0].non_equivariant_std, std::sqrt(0.02), 1e-15);
  EXPECT_DOUBLE_EQ(rows[0].equivariant_mean, 0.9);
  EXPECT_EQ(rows[0].equivariant_std, 0.0);
}

TEST(PlotTest, BandOnlyWithRepeats) {
  std::vector<LossRow> single;
  for (int k = 1; k <= 10; ++k) single.push_back({"amplitude", std::nan(""), 1.0, "equivariant", 0, std::size_t(k), 1.0 / k});
  const std::string one = render_loss_svg(single);
  EXPECT_NE(one.find("<polyline"), std::string::npos);
  EXPECT_EQ(one.find("class=\"band\""), std::string::npos);
  EXPECT_NE(one.find(">iterations<"), std::string::npos);
  EXPECT_NE(one.find(">loss<"), std::string::npos);

  auto multi = single;
  for (int k = 1; k <= 10; ++k) multi.push_back({"amplitude", std::nan(""), 1.0, "equivariant", 1, std::size_t(k), 2.0 / k});
  const auto curves = build_curves(multi);
  ASSERT_EQ(curves.size(), 1u);
  EXPECT_TRUE(curves[0].has_band());
  EXPECT_NEAR(curves[0].points[0].std, std::sqrt(0.5), 1e-15);
  EXPECT_NE(render_loss_svg(multi).find("class=\"band\""), std::string::npos);
  EXPECT_THROW(render_loss_svg({}), Error);
}

TEST(FetchTest, LocalMirrorIdempotentAndVerified) {
  const auto mirror = scratch("mirror");
  write_synthetic_fashion(mirror, 10, 4);
  const auto dest = scratch("dest");
  const auto first = fetch_fashion(dest, mirror.string());
  EXPECT_EQ(first.downloaded.size(), 4u);
  const auto second = fetch_fashion(dest, mirror.string());
  EXPECT_EQ(second.downloaded.size(), 0u);
  EXPECT_EQ(second.already_present.size(), 4u);
  EXPECT_NO_THROW(verify_fashion_dir(dest));
}

TEST(FetchTest, HttpMirrorAndTruncatedDownload) {
  const auto mirror = scratch("http_mirror");
  write_synthetic_fashion(mirror, 10, 4);
  // Truncate one payload: drop its last byte after decompression.
  auto bytes = read_file_maybe_gz(mirror / kFashionFiles[2]);
  bytes.pop_back();
  const auto bad_mirror = scratch("http_bad");
  for (const auto* f : kFashionFiles) fs::copy_file(mirror / f, bad_mirror / f);
  write_file_gz(bad_mirror / kFashionFiles[2], bytes);

  httplib::Server server;
  server.set_mount_point("/good", mirror.string());
  server.set_mount_point("/bad", bad_mirror.string());
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const std::string base = "http://127.0.0.1:" + std::to_string(port);

  const auto dest = scratch("http_dest");
  EXPECT_EQ(fetch_fashion(dest, base + "/good").downloaded.size(), 4u);
  const auto dest2 = scratch("http_dest2");
  try {
    fetch_fashion(dest2, base + "/bad");
    ADD_FAILURE() << "truncated payload accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncatedPayload);
  }
  EXPECT_FALSE(fs::exists(dest2 / kFashionFiles[2]));
  try {
    fetch_fashion(scratch("http_dest3"), base + "/missing");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNetworkError);
  }
  server.stop();
  th.join();
}

TEST(VerifyTest, FastLevelPassesAndFaultIsCaught) {
  VerifyOptions o;
  const auto ok = run_verify(o);
  for (const auto& r : ok) EXPECT_TRUE(r.passed) << r.name << " " << r.worst << " " << r.detail;
  const auto j = verify_json(o, ok);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["suites"].size(), ok.size());

  o.inject_fault = true;
  EXPECT_FALSE(suite_round_trip(o).passed);
  EXPECT_FALSE(suite_last_coordinate(o).passed);
}

TEST(VerifyTest, BisectionOracleMatchesClosedForms) {
  EXPECT_NEAR(bisect_last_coordinate(Alpha::stereographic(), 2.0), 0.0, 1e-12);
  EXPECT_NEAR(bisect_last_coordinate(Alpha::gnomonic(), 1.0), M_SQRT1_2, 1e-12);
  EXPECT_NEAR(bisect_last_coordinate(Alpha::orthographic(), 0.6), 0.8, 1e-12);
}

}  // namespace
}  // namespace revmap
