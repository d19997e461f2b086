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

// Fashion-MNIST ingestion and the image preparation pipeline:
//   IDX (optionally gzip) -> 28x28 -> area-averaged 16x16 -> random
//   horizontal flip -> final-pixel surgery -> 255-vector.
//
// Image16 stores pixel (x, y) at index 16 x + y, x horizontal and y
// vertical, so the horizontal coordinate is the leading four qubits of the
// amplitude index. The stored row-major IDX image has index 28 row + col
// with col horizontal; the two layouts are transposes of each other.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <zlib.h>

#include <Eigen/Dense>

#include "revmap/error.hpp"
#include "revmap/rng.hpp"

namespace revmap {

// ---------------------------------------------------------------------------
// IDX
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

struct IdxTensor {
  std::uint32_t magic = 0;
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> data;

  std::size_t element_count() const {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return n;
  }
};

namespace detail {

inline std::uint32_t read_be32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

inline void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

}  // namespace detail

/// Parses an unsigned-byte IDX buffer (3-D images or 1-D labels). Trailing
/// bytes beyond the declared payload are rejected as well.
inline IdxTensor parse_idx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw Error(ErrorCode::kTruncatedPayload, "missing IDX header");
  IdxTensor t;
  t.magic = detail::read_be32(bytes, 0);
  std::size_t ndims = 0;
  if (t.magic == kIdxImagesMagic) {
    ndims = 3;
  } else if (t.magic == kIdxLabelsMagic) {
    ndims = 1;
  } else {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08X", t.magic);
    throw Error(ErrorCode::kBadMagic, std::string("unexpected IDX magic ") + buf);
  }
  const std::size_t header = 4 + 4 * ndims;
  if (bytes.size() < header) {
    throw Error(ErrorCode::kTruncatedPayload, "IDX header cut short");
  }
  for (std::size_t k = 0; k < ndims; ++k) {
    t.dims.push_back(detail::read_be32(bytes, 4 + 4 * k));
  }
  const std::size_t expected = t.element_count();
  if (bytes.size() - header != expected) {
    throw Error(ErrorCode::kTruncatedPayload,
                "IDX payload has " + std::to_string(bytes.size() - header) +
                    " bytes, header declares " + std::to_string(expected));
  }
  t.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
  return t;
}

inline std::vector<std::uint8_t> encode_idx(const IdxTensor& t) {
  std::vector<std::uint8_t> out;
  detail::write_be32(out, t.magic);
  for (auto d : t.dims) detail::write_be32(out, d);
  out.insert(out.end(), t.data.begin(), t.data.end());
  return out;
}

/// Reads a whole file, inflating it if it is gzip-compressed.
inline std::vector<std::uint8_t> read_file_maybe_gz(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingFiles, "missing file " + path.string());
  }
  gzFile f = gzopen(path.string().c_str(), "rb");
  if (f == nullptr) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<std::uint8_t> out;
  std::array<std::uint8_t, 1 << 16> buf{};
  int n = 0;
  while ((n = gzread(f, buf.data(), static_cast<unsigned>(buf.size()))) > 0) {
    out.insert(out.end(), buf.begin(), buf.begin() + n);
  }
  int errnum = 0;
  const char* msg = gzerror(f, &errnum);
  const std::string err = msg ? msg : "";
  gzclose(f);
  if (n < 0 || (errnum != Z_OK && errnum != Z_STREAM_END)) {
    throw Error(ErrorCode::kTruncatedPayload, "gzip stream error in " +
                                                  path.string() + ": " + err);
  }
  return out;
}

inline void write_file_gz(const std::filesystem::path& path,
                          std::span<const std::uint8_t> bytes) {
  gzFile f = gzopen(path.string().c_str(), "wb");
  if (f == nullptr) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  const int written = gzwrite(f, bytes.data(), static_cast<unsigned>(bytes.size()));
  gzclose(f);
  if (written != static_cast<int>(bytes.size())) {
    throw Error(ErrorCode::kIoError, "short write to " + path.string());
  }
}

inline IdxTensor read_idx_file(const std::filesystem::path& path) {
  const auto bytes = read_file_maybe_gz(path);
  return parse_idx(bytes);
}

// ---------------------------------------------------------------------------
// Images
// ---------------------------------------------------------------------------

inline constexpr int kSourceSide = 28;
inline constexpr int kSide = 16;
inline constexpr int kPixels = kSide * kSide;
inline constexpr int kFinalPixel = kPixels - 1;        // (x, y) = (15, 15)
inline constexpr int kMirrorOfFinal = kSide - 1;       // (x, y) = (0, 15)

inline constexpr int kSandal = 0;
inline constexpr int kBoot = 1;
inline constexpr std::uint8_t kFashionSandalLabel = 5;
inline constexpr std::uint8_t kFashionBootLabel = 9;

struct Image16 {
  std::array<double, kPixels> pixels{};
  int label = kSandal;

  double& at(int x, int y) { return pixels[static_cast<std::size_t>(kSide * x + y)]; }
  double at(int x, int y) const { return pixels[static_cast<std::size_t>(kSide * x + y)]; }

  friend bool operator==(const Image16&, const Image16&) = default;
};

/// Area-weighted box resize of a row-major 28x28 image to row-major 16x16.
inline std::array<double, kPixels> resize_28_to_16(std::span<const double> src) {
  if (src.size() != static_cast<std::size_t>(kSourceSide * kSourceSide)) {
    throw Error(ErrorCode::kDimensionMismatch, "expected 784 source pixels");
  }
  constexpr double step = static_cast<double>(kSourceSide) / kSide;
  // weight[t][s]: overlap of target cell t with source cell s, over the cell width.
  std::array<std::array<double, kSourceSide>, kSide> weight{};
  for (int t = 0; t < kSide; ++t) {
    const double lo = t * step, hi = (t + 1) * step;
    for (int s = 0; s < kSourceSide; ++s) {
      const double overlap = std::min(hi, s + 1.0) - std::max(lo, static_cast<double>(s));
      weight[t][s] = overlap > 0.0 ? overlap / step : 0.0;
    }
  }
  // Separable: rows first, then columns.
  std::array<double, kSide * kSourceSide> tmp{};
  for (int tr = 0; tr < kSide; ++tr) {
    for (int sr = 0; sr < kSourceSide; ++sr) {
      const double w = weight[tr][sr];
      if (w == 0.0) continue;
      for (int sc = 0; sc < kSourceSide; ++sc) {
        tmp[tr * kSourceSide + sc] += w * src[sr * kSourceSide + sc];
      }
    }
  }
  std::array<double, kPixels> out{};
  for (int tr = 0; tr < kSide; ++tr) {
    for (int tc = 0; tc < kSide; ++tc) {
      double acc = 0.0;
      for (int sc = 0; sc < kSourceSide; ++sc) {
        acc += weight[tc][sc] * tmp[tr * kSourceSide + sc];
      }
      out[tr * kSide + tc] = acc;
    }
  }
  return out;
}

/// Builds an Image16 from a row-major 28x28 byte image.
inline Image16 image_from_source(std::span<const std::uint8_t> src28, int label) {
  std::vector<double> src(src28.begin(), src28.end());
  const auto rows = resize_28_to_16(src);
  Image16 img;
  img.label = label;
  for (int row = 0; row < kSide; ++row)
    for (int col = 0; col < kSide; ++col) img.at(col, row) = rows[row * kSide + col];
  return img;
}

/// (x, y) -> (15 - x, y).
inline Image16 hflip(const Image16& img) {
  Image16 out;
  out.label = img.label;
  for (int x = 0; x < kSide; ++x)
    for (int y = 0; y < kSide; ++y) out.at(kSide - 1 - x, y) = img.at(x, y);
  return out;
}

// ---------------------------------------------------------------------------
// Preparation
// ---------------------------------------------------------------------------

enum class DataMode { kNonEquivariant, kEquivariant };

/// What the equivariant surgery writes into pixel 15, the mirror image of
/// the removed final pixel.
///   kZero:      0, the value the final (bottom corner) pixel is expected to
///               hold. Commutes with hflip for every image.
///   kCopyFinal: the final pixel's value. Equal to kZero when that pixel is
///               black; commutes with hflip only when pixels 15 and 255 agree.
enum class CornerRule { kZero, kCopyFinal };

struct PreparedSample {
  Eigen::VectorXd vector;  // 255 entries, before division by M
  int label = kSandal;
  double norm_before_scale = 0.0;
};

namespace detail {

/// Sum of squares accumulated over flip orbits {i, i ^ 240} in a fixed order,
/// so a vector and its mirror image give bitwise equal results.
template <class Vec>
double orbit_sq_norm(const Vec& v, int size) {
  double acc = 0.0;
  for (int i = 0; i < size; ++i) {
    if ((i & 0xF0) >= 0x80) continue;
    const int j = i ^ 0xF0;
    const double a = v[i] * v[i];
    acc += j < size ? a + v[j] * v[j] : a;
  }
  return acc;
}

}  // namespace detail

inline PreparedSample prepare(const Image16& img, DataMode mode,
                              CornerRule rule = CornerRule::kZero) {
  PreparedSample out;
  out.label = img.label;
  out.vector.resize(kFinalPixel);
  for (int i = 0; i < kFinalPixel; ++i) out.vector[i] = img.pixels[static_cast<std::size_t>(i)];
  if (mode == DataMode::kEquivariant) {
    const double pre = std::sqrt(detail::orbit_sq_norm(img.pixels, kPixels));
    out.vector[kMirrorOfFinal] =
        rule == CornerRule::kZero ? 0.0 : img.pixels[kFinalPixel];
    const double post = std::sqrt(detail::orbit_sq_norm(out.vector, kFinalPixel));
    if (post > 0.0) out.vector *= pre / post;
  }
  out.norm_before_scale = out.vector.norm();
  return out;
}

/// The flip permutation i -> i XOR 240 on {0..254}, with index 15 (whose
/// partner 255 was removed) held fixed.
inline Eigen::VectorXd flip_prepared(const Eigen::VectorXd& v) {
  if (v.size() != kFinalPixel) throw Error(ErrorCode::kDimensionMismatch, "expected 255 entries");
  Eigen::VectorXd out(kFinalPixel);
  for (int i = 0; i < kFinalPixel; ++i) {
    const int j = i ^ 0xF0;
    out[i] = j < kFinalPixel ? v[j] : v[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sources and dataset construction
// ---------------------------------------------------------------------------

struct FashionPool {
  std::vector<Image16> sandals;
  std::vector<Image16> boots;
};

inline const char* const kFashionFiles[4] = {
    "train-images-idx3-ubyte.gz", "train-labels-idx1-ubyte.gz",
    "t10k-images-idx3-ubyte.gz", "t10k-labels-idx1-ubyte.gz"};

namespace detail {

inline std::filesystem::path locate(const std::filesystem::path& dir,
                                    const std::string& gz_name) {
  const auto gz = dir / gz_name;
  if (std::filesystem::exists(gz)) return gz;
  const auto plain = dir / gz_name.substr(0, gz_name.size() - 3);
  if (std::filesystem::exists(plain)) return plain;
  return {};
}

inline void append_split(FashionPool& pool, const IdxTensor& images,
                         const IdxTensor& labels) {
  if (images.magic != kIdxImagesMagic || labels.magic != kIdxLabelsMagic ||
      images.dims[1] != kSourceSide || images.dims[2] != kSourceSide ||
      images.dims[0] != labels.dims[0]) {
    throw Error(ErrorCode::kInvalidInput, "IDX image/label files do not match");
  }
  const std::size_t per = kSourceSide * kSourceSide;
  for (std::size_t k = 0; k < images.dims[0]; ++k) {
    const auto label = labels.data[k];
    if (label != kFashionSandalLabel && label != kFashionBootLabel) continue;
    std::span<const std::uint8_t> src(images.data.data() + k * per, per);
    if (label == kFashionSandalLabel) {
      pool.sandals.push_back(image_from_source(src, kSandal));
    } else {
      pool.boots.push_back(image_from_source(src, kBoot));
    }
  }
}

}  // namespace detail

/// Sandal and ankle-boot images from the train split, then t10k if present.
inline FashionPool load_fashion_pool(const std::filesystem::path& dir) {
  FashionPool pool;
  bool any = false;
  for (int split = 0; split < 2; ++split) {
    const auto img = detail::locate(dir, kFashionFiles[2 * split]);
    const auto lab = detail::locate(dir, kFashionFiles[2 * split + 1]);
    if (img.empty() || lab.empty()) continue;
    detail::append_split(pool, read_idx_file(img), read_idx_file(lab));
    any = true;
  }
  if (!any) {
    throw Error(ErrorCode::kMissingFiles,
                "no Fashion-MNIST IDX files under " + dir.string());
  }
  return pool;
}

inline constexpr double kSyntheticSandalScale = 0.45;
inline constexpr double kSyntheticBootScale = 0.9;

/// `pairs` base patterns u with uniform(0, 255) pixels and black bottom
/// corners; sandal k = 0.45 u_k, boot k = 0.9 u_k. The two classes differ
/// only in norm.
inline FashionPool synthetic_pool(std::size_t pairs, std::uint64_t seed) {
  Rng rng(seed);
  FashionPool pool;
  for (std::size_t k = 0; k < pairs; ++k) {
    Image16 base;
    for (auto& p : base.pixels) p = rng.uniform(0.0, 255.0);
    base.pixels[kFinalPixel] = 0.0;
    base.pixels[kMirrorOfFinal] = 0.0;
    Image16 sandal = base, boot = base;
    for (auto& p : sandal.pixels) p *= kSyntheticSandalScale;
    for (auto& p : boot.pixels) p *= kSyntheticBootScale;
    sandal.label = kSandal;
    boot.label = kBoot;
    pool.sandals.push_back(sandal);
    pool.boots.push_back(boot);
  }
  return pool;
}

enum class SourceKind { kFashionMnist, kSynthetic };

struct DatasetOptions {
  SourceKind source = SourceKind::kSynthetic;
  std::filesystem::path fashion_dir;
  std::size_t count = 260;
  double test_fraction = 0.3;
  std::uint64_t sample_seed = 1;
  std::uint64_t flip_seed = 2;
  std::uint64_t split_seed = 3;
  DataMode mode = DataMode::kNonEquivariant;
  CornerRule corner_rule = CornerRule::kZero;
};

struct Sample {
  Image16 image;  // after the random flip
  PreparedSample prepared;
  bool flipped = false;
  std::size_t group = 0;
};

struct DatasetSplit {
  std::vector<Sample> train;
  std::vector<Sample> test;
  std::uint64_t seed = 0;
  double test_fraction = 0.3;

  std::size_t size() const noexcept { return train.size() + test.size(); }
};

/// Draws a balanced sample, flips each flip-group with probability 1/2 and
/// splits stratified by group. Fashion images form singleton groups grouped
/// by class; a synthetic sandal/boot pair is one group that shares its flip
/// and its side of the split.
inline DatasetSplit build_dataset(const DatasetOptions& opt,
                                  const FashionPool* preloaded = nullptr) {
  if (opt.count < 2) throw Error(ErrorCode::kInvalidInput, "count must be >= 2");
  if (!(opt.test_fraction >= 0.0 && opt.test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "test fraction must be in [0, 1)");
  }
  const bool paired = opt.source == SourceKind::kSynthetic;
  if (paired && opt.count % 2 != 0) {
    throw Error(ErrorCode::kInvalidInput, "synthetic count must be even");
  }
  const std::size_t n_sandal = opt.count / 2, n_boot = opt.count - n_sandal;

  std::vector<Image16> sandals, boots;
  if (paired) {
    auto pool = synthetic_pool(n_sandal, opt.sample_seed);
    sandals = std::move(pool.sandals);
    boots = std::move(pool.boots);
  } else {
    FashionPool loaded;
    const FashionPool& pool = preloaded ? *preloaded
                                        : (loaded = load_fashion_pool(opt.fashion_dir));
    if (pool.sandals.size() < n_sandal || pool.boots.size() < n_boot) {
      throw Error(ErrorCode::kInsufficientSamples,
                  "pool has " + std::to_string(pool.sandals.size()) + " sandals, " +
                      std::to_string(pool.boots.size()) + " boots");
    }
    Rng rng(opt.sample_seed);
    auto pick = [&](const std::vector<Image16>& src, std::size_t n) {
      std::vector<std::size_t> idx(src.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      rng.shuffle(idx);
      idx.resize(n);
      std::sort(idx.begin(), idx.end());
      std::vector<Image16> out;
      for (auto i : idx) out.push_back(src[i]);
      return out;
    };
    sandals = pick(pool.sandals, n_sandal);
    boots = pick(pool.boots, n_boot);
  }

  // Groups: (stratum, members).
  struct Group {
    int stratum;
    std::vector<Image16> members;
  };
  std::vector<Group> groups;
  if (paired) {
    for (std::size_t k = 0; k < n_sandal; ++k) groups.push_back({0, {sandals[k], boots[k]}});
  } else {
    for (auto& s : sandals) groups.push_back({kSandal, {s}});
    for (auto& b : boots) groups.push_back({kBoot, {b}});
  }

  Rng flip_rng(opt.flip_seed);
  std::vector<bool> flips;
  flips.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) flips.push_back(flip_rng.coin());

  Rng split_rng(opt.split_seed);
  std::vector<bool> in_test(groups.size(), false);
  for (int stratum : {0, 1}) {
    std::vector<std::size_t> ids;
    for (std::size_t g = 0; g < groups.size(); ++g)
      if (groups[g].stratum == stratum) ids.push_back(g);
    if (ids.empty()) continue;
    split_rng.shuffle(ids);
    const auto n_test = static_cast<std::size_t>(
        std::llround(opt.test_fraction * static_cast<double>(ids.size())));
    for (std::size_t k = 0; k < n_test; ++k) in_test[ids[k]] = true;
  }

  DatasetSplit split;
  split.seed = opt.split_seed;
  split.test_fraction = opt.test_fraction;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const auto& member : groups[g].members) {
      Sample s;
      s.flipped = flips[g];
      s.image = s.flipped ? hflip(member) : member;
      s.prepared = prepare(s.image, opt.mode, opt.corner_rule);
      s.group = g;
      (in_test[g] ? split.test : split.train).push_back(std::move(s));
    }
  }
  return split;
}

}  // namespace revmap
