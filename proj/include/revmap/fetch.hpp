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

// Download and verification of the four Fashion-MNIST IDX files, plus an
// offline synthetic stand-in written in the same format. Links OpenSSL.

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "revmap/data.hpp"
#include "revmap/error.hpp"
#include "revmap/rng.hpp"

namespace revmap {

inline constexpr const char* kDefaultFashionMirror =
    "https://raw.githubusercontent.com/zalandoresearch/fashion-mnist/master/data/fashion";
inline constexpr const char* kSyntheticMarker = "SYNTHETIC";

/// Parses and shape-checks one downloaded file; returns its item count.
inline std::size_t verify_fashion_file(const std::filesystem::path& path, bool images) {
  const IdxTensor t = read_idx_file(path);
  const std::uint32_t want = images ? kIdxImagesMagic : kIdxLabelsMagic;
  if (t.magic != want) throw Error(ErrorCode::kBadMagic, path.string() + ": wrong IDX kind");
  if (images && (t.dims[1] != kSourceSide || t.dims[2] != kSourceSide)) {
    throw Error(ErrorCode::kInvalidInput, path.string() + ": images are not 28x28");
  }
  return t.dims[0];
}

/// Verifies all four files and that image/label counts agree per split.
inline void verify_fashion_dir(const std::filesystem::path& dir) {
  for (int split = 0; split < 2; ++split) {
    const auto img = detail::locate(dir, kFashionFiles[2 * split]);
    const auto lab = detail::locate(dir, kFashionFiles[2 * split + 1]);
    if (img.empty() || lab.empty()) {
      throw Error(ErrorCode::kMissingFiles, "Fashion-MNIST files missing in " + dir.string());
    }
    if (verify_fashion_file(img, true) != verify_fashion_file(lab, false)) {
      throw Error(ErrorCode::kTruncatedPayload, "image/label counts differ in " + dir.string());
    }
  }
}

namespace detail {

/// Fetches `base/name` over http(s), or copies it when `base` is a local
/// directory.
inline std::string fetch_bytes(const std::string& base, const std::string& name) {
  const bool remote = base.rfind("http://", 0) == 0 || base.rfind("https://", 0) == 0;
  if (!remote) {
    std::ifstream in(std::filesystem::path(base) / name, std::ios::binary);
    if (!in) throw Error(ErrorCode::kNetworkError, "mirror file not found: " + base + "/" + name);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
  const auto scheme_end = base.find("://") + 3;
  const auto path_start = base.find('/', scheme_end);
  const std::string host = base.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "" : base.substr(path_start);
  if (path.empty() || path.back() != '/') path += '/';
  path += name;

  httplib::Client cli(host);
  cli.set_follow_location(true);
  cli.set_connection_timeout(15);
  cli.set_read_timeout(120);
  auto res = cli.Get(path);
  if (!res) {
    throw Error(ErrorCode::kNetworkError,
                host + path + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kNetworkError, host + path + ": HTTP " + std::to_string(res->status));
  }
  return std::move(res->body);
}

}  // namespace detail

struct FetchReport {
  std::vector<std::string> downloaded;
  std::vector<std::string> already_present;
};

/// Ensures the four files exist under `dir` and verify. Present, valid files
/// are left untouched. A file that fails verification after download is
/// deleted and the error rethrown.
inline FetchReport fetch_fashion(const std::filesystem::path& dir,
                                 const std::string& mirror = kDefaultFashionMirror) {
  std::filesystem::create_directories(dir);
  FetchReport report;
  for (int k = 0; k < 4; ++k) {
    const std::string name = kFashionFiles[k];
    const bool images = k % 2 == 0;
    const auto dest = dir / name;
    if (std::filesystem::exists(dest)) {
      try {
        verify_fashion_file(dest, images);
        report.already_present.push_back(name);
        continue;
      } catch (const Error&) {
        std::filesystem::remove(dest);
      }
    }
    const std::string body = detail::fetch_bytes(mirror, name);
    auto tmp = dest;
    tmp += ".part";
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
      out.write(body.data(), static_cast<std::streamsize>(body.size()));
    }
    try {
      verify_fashion_file(tmp, images);
    } catch (...) {
      std::filesystem::remove(tmp);
      throw;
    }
    std::filesystem::rename(tmp, dest);
    report.downloaded.push_back(name);
  }
  verify_fashion_dir(dir);
  return report;
}

/// Writes norm-separated 28x28 stand-in images under the standard file
/// names (labels 5 and 9) and drops a marker file.
inline void write_synthetic_fashion(const std::filesystem::path& dir,
                                    std::size_t train_per_class = 1000,
                                    std::size_t test_per_class = 200,
                                    std::uint64_t seed = 7) {
  std::filesystem::create_directories(dir);
  Rng rng(seed);
  constexpr std::size_t per = kSourceSide * kSourceSide;
  for (int split = 0; split < 2; ++split) {
    const std::size_t n = split == 0 ? train_per_class : test_per_class;
    IdxTensor images{kIdxImagesMagic, {static_cast<std::uint32_t>(2 * n), kSourceSide, kSourceSide}, {}};
    IdxTensor labels{kIdxLabelsMagic, {static_cast<std::uint32_t>(2 * n)}, {}};
    for (std::size_t i = 0; i < 2 * n; ++i) {
      const bool boot = i % 2 == 1;
      const double scale = boot ? kSyntheticBootScale : kSyntheticSandalScale;
      for (std::size_t p = 0; p < per; ++p) {
        images.data.push_back(static_cast<std::uint8_t>(std::lround(scale * rng.uniform(0.0, 255.0))));
      }
      labels.data.push_back(boot ? kFashionBootLabel : kFashionSandalLabel);
    }
    write_file_gz(dir / kFashionFiles[2 * split], encode_idx(images));
    write_file_gz(dir / kFashionFiles[2 * split + 1], encode_idx(labels));
  }
  std::ofstream(dir / kSyntheticMarker) << "synthetic stand-in data, seed " << seed << "\n";
}

}  // namespace revmap
