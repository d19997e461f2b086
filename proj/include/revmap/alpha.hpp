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

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <charconv>

#include "revmap/error.hpp"

namespace revmap {

/// Position (0, ..., 0, alpha) of the centre of projection on the last axis.
///
/// Either a finite value strictly below 1 or negative infinity. The
/// orthographic member is carried as a flag and never as a large negative
/// number, so that code paths can branch on it exactly.
class Alpha {
 public:
  static Alpha finite(double value) {
    if (!std::isfinite(value) || !(value < 1.0)) {
      throw Error(ErrorCode::kInvalidInput,
                  "alpha must be finite and < 1, got " + std::to_string(value));
    }
    return Alpha(value, false);
  }
  static Alpha negative_infinity() { return Alpha(0.0, true); }

  static Alpha gnomonic() { return finite(0.0); }
  static Alpha stereographic() { return finite(-1.0); }
  static Alpha twilight() { return finite(-1.0 - std::sqrt(2.0) / 2.0); }
  static Alpha orthographic() { return negative_infinity(); }

  /// Accepts a named projection, "-inf", or a decimal number.
  static Alpha parse(std::string_view text) {
    if (text == "gnomonic") return gnomonic();
    if (text == "stereographic") return stereographic();
    if (text == "twilight") return twilight();
    if (text == "orthographic" || text == "-inf" || text == "-infinity") {
      return orthographic();
    }
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
      throw Error(ErrorCode::kInvalidInput,
                  "cannot parse alpha '" + std::string(text) + "'");
    }
    return finite(v);
  }

  bool is_infinite() const noexcept { return infinite_; }
  /// The finite value; -infinity for the orthographic member.
  double value() const noexcept {
    return infinite_ ? -std::numeric_limits<double>::infinity() : value_;
  }

  /// alpha in [-1, 1): the restricted range is all of R^n.
  bool has_unbounded_range() const noexcept {
    return !infinite_ && value_ >= -1.0;
  }

  /// Radius of the ball the restricted projection maps onto, if bounded.
  std::optional<double> range_radius() const noexcept {
    if (infinite_) return 1.0;
    if (value_ >= -1.0) return std::nullopt;
    return std::sqrt((value_ - 1.0) / (value_ + 1.0));
  }

  std::string name() const {
    if (infinite_) return "orthographic";
    if (value_ == 0.0) return "gnomonic";
    if (value_ == -1.0) return "stereographic";
    if (value_ == twilight().value_) return "twilight";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value_);
    return std::string(buf, ptr);
  }

  friend bool operator==(const Alpha& a, const Alpha& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  Alpha(double value, bool infinite) : value_(value), infinite_(infinite) {}

  double value_;
  bool infinite_;
};

}  // namespace revmap
