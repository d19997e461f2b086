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

// Reverse map projections E_alpha : R^n -> unit sphere of R^{n+1}, and the
// amplitude-embedding baseline.
//
// The last coordinate t = E_alpha(x)_n solves
//   t^2 = 1 - ((t - alpha) / (1 - alpha))^2 s^2,     s = ||x||,
// i.e. A t^2 + B t + C = 0 with
//   A = s^2 + (1 - alpha)^2,  B = -2 alpha s^2,  C = alpha^2 s^2 - (1 - alpha)^2.
// Erratum: a middle coefficient of -2 alpha s (linear in s) is sometimes
// quoted for this quadratic. It is not what the constraint expands to and
// yields negative discriminants for admissible inputs (alpha = -1, s = 3).
// MiddleCoefficient::kLinearInS keeps that variant around for fault-injection
// checks only.
//
// For alpha = -infinity the map is x -> (x, sqrt(1 - ||x||^2)). Inputs outside
// the unit ball are first scaled onto its boundary, so their last coordinate
// is 0 (the unit-norm value), not 1.

#include <cmath>
#include <span>

#include <Eigen/Dense>

#include "revmap/alpha.hpp"
#include "revmap/error.hpp"
#include "revmap/projections.hpp"

namespace revmap {

inline constexpr double kDomainSlack = 1e-12;
inline constexpr double kDiscriminantSlack = 1e-9;

enum class MiddleCoefficient { kQuadraticInS, kLinearInS };

/// Coefficients of the quadratic the last coordinate solves.
struct LastCoordInputs {
  double s;
  double A;
  double B;
  double C;
  double f_value;
};

namespace detail {

inline LastCoordInputs solve_last_coordinate(double alpha, double s,
                                             MiddleCoefficient middle) {
  const double one_minus = 1.0 - alpha;
  LastCoordInputs in{};
  in.s = s;
  in.A = s * s + one_minus * one_minus;
  in.B = middle == MiddleCoefficient::kQuadraticInS ? -2.0 * alpha * s * s
                                                    : -2.0 * alpha * s;
  in.C = s * s * alpha * alpha - one_minus * one_minus;
  double disc;
  if (middle == MiddleCoefficient::kLinearInS) {
    disc = in.B * in.B - 4.0 * in.A * in.C;
  } else if (alpha < -1.0) {
    // B^2 - 4AC = 4(1-a)^2 (a^2-1)(r-s)(r+s), exactly zero on the boundary.
    const double r = std::sqrt((alpha - 1.0) / (alpha + 1.0));
    disc = 4.0 * one_minus * one_minus * (alpha * alpha - 1.0) * (r - s) * (r + s);
  } else {
    disc = 4.0 * one_minus * one_minus *
           (one_minus * one_minus + s * s * (1.0 - alpha * alpha));
  }
  if (disc < 0.0) {
    if (disc < -kDiscriminantSlack) {
      throw Error(ErrorCode::kOutOfDomain,
                  "negative discriminant " + std::to_string(disc) +
                      " for s = " + std::to_string(s));
    }
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  // Larger root, evaluated without cancellation.
  in.f_value = in.B > 0.0 ? -2.0 * in.C / (in.B + root)
                          : (-in.B + root) / (2.0 * in.A);
  return in;
}

inline void check_finite(const Eigen::VectorXd& x) {
  if (!x.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, "input contains NaN or Inf");
  }
}

}  // namespace detail

/// Full coefficient record for E_alpha(x)_n at effective norm `s`.
inline LastCoordInputs last_coordinate_inputs(
    const Alpha& alpha, double s,
    MiddleCoefficient middle = MiddleCoefficient::kQuadraticInS) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw Error(ErrorCode::kInvalidInput, "s must be a finite nonnegative real");
  }
  if (const auto r = alpha.range_radius(); r && s > *r + kDomainSlack) {
    throw Error(ErrorCode::kOutOfDomain,
                "s = " + std::to_string(s) + " exceeds radius " +
                    std::to_string(*r));
  }
  if (alpha.is_infinite()) {
    const double t = std::sqrt(std::max(0.0, 1.0 - s * s));
    return {s, 0.0, 0.0, 0.0, t};
  }
  return detail::solve_last_coordinate(alpha.value(), s, middle);
}

inline double last_coordinate(
    const Alpha& alpha, double s,
    MiddleCoefficient middle = MiddleCoefficient::kQuadraticInS) {
  return last_coordinate_inputs(alpha, s, middle).f_value;
}

struct EmbeddingConfig {
  Alpha alpha;
  double scale_M = 1.0;
};

/// A point on the unit sphere of R^{n+1}.
struct EmbeddedVector {
  Eigen::VectorXd coords;
};

/// E_alpha(x_raw / M).
inline EmbeddedVector embed(
    const EmbeddingConfig& cfg, const Eigen::VectorXd& x_raw,
    MiddleCoefficient middle = MiddleCoefficient::kQuadraticInS) {
  if (!(cfg.scale_M > 0.0) || !std::isfinite(cfg.scale_M)) {
    throw Error(ErrorCode::kInvalidInput, "scale M must be positive");
  }
  if (x_raw.size() < 1) throw Error(ErrorCode::kInvalidInput, "empty input");
  detail::check_finite(x_raw);

  const Eigen::Index n = x_raw.size();
  Eigen::VectorXd x = x_raw / cfg.scale_M;
  double s = x.norm();
  if (const auto r = cfg.alpha.range_radius(); r && s > *r) {
    x *= *r / s;
    s = *r;
  }
  const double t = last_coordinate(cfg.alpha, s, middle);

  EmbeddedVector out{Eigen::VectorXd(n + 1)};
  if (cfg.alpha.is_infinite()) {
    out.coords.head(n) = x;
  } else {
    const double a = cfg.alpha.value();
    out.coords.head(n) = ((t - a) / (1.0 - a)) * x;
  }
  out.coords[n] = t;
  return out;
}

inline EmbeddedVector embed(const Alpha& alpha, const Eigen::VectorXd& x) {
  return embed(EmbeddingConfig{alpha, 1.0}, x);
}

/// x / ||x||.
inline EmbeddedVector amplitude_embed(const Eigen::VectorXd& x_raw,
                                      Eigen::Index dim) {
  if (dim < 1 || (dim & (dim - 1)) != 0) {
    throw Error(ErrorCode::kInvalidInput, "dimension must be a power of two");
  }
  if (x_raw.size() != dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input length " + std::to_string(x_raw.size()) +
                    " != " + std::to_string(dim));
  }
  detail::check_finite(x_raw);
  const double norm = x_raw.norm();
  if (norm < 1e-15) throw Error(ErrorCode::kZeroVector, "cannot normalize 0");
  return {x_raw / norm};
}

/// ||P_alpha(E_alpha(x)) - x||_inf for x in R_alpha.
inline double round_trip_check(
    const Alpha& alpha, const Eigen::VectorXd& x,
    MiddleCoefficient middle = MiddleCoefficient::kQuadraticInS) {
  const auto y = embed(EmbeddingConfig{alpha, 1.0}, x, middle);
  return (p_alpha(alpha, y.coords) - x).lpNorm<Eigen::Infinity>();
}

}  // namespace revmap
