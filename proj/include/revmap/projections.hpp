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

// Central projections onto hyperplanes and the P_alpha family of map
// projections from the unit sphere of R^{n+1} onto its tangent hyperplane
// {x_n = 1}, identified with R^n.
//
// Note on the general projection: project_from_point implements the central
// projection p + lambda (x - p), with lambda chosen so the result lies on W.
// This is the reading under which the closed form
//   P_alpha x = (1 - alpha) / (x_n - alpha) * (x_0, ..., x_{n-1})
// holds. An orthogonal projection onto W (or onto W - p without translating
// x) does not reproduce that closed form and is not what is computed here.

#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "revmap/alpha.hpp"
#include "revmap/error.hpp"

namespace revmap {

inline constexpr double kDegenerateDirectionTol = 1e-15;
inline constexpr double kSphereNormTol = 1e-9;

/// W = {x : <normal, x> = offset}.
class Hyperplane {
 public:
  Hyperplane(Eigen::VectorXd normal, double offset)
      : normal_(std::move(normal)), offset_(offset) {
    if (normal_.size() == 0 || !(normal_.norm() > 0.0)) {
      throw Error(ErrorCode::kInvalidInput, "hyperplane normal must be nonzero");
    }
  }

  /// The tangent hyperplane {x_n = 1} of the unit sphere in R^{n+1}.
  static Hyperplane north_tangent(Eigen::Index ambient_dim) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(ambient_dim);
    a[ambient_dim - 1] = 1.0;
    return Hyperplane(std::move(a), 1.0);
  }

  const Eigen::VectorXd& normal() const noexcept { return normal_; }
  double offset() const noexcept { return offset_; }
  Eigen::Index dim() const noexcept { return normal_.size(); }

  double residual(const Eigen::VectorXd& x) const {
    return normal_.dot(x) - offset_;
  }

 private:
  Eigen::VectorXd normal_;
  double offset_;
};

/// Intersection of the line through `p` and `x` with `w`.
inline Eigen::VectorXd project_from_point(
    const Eigen::VectorXd& p, const Hyperplane& w, const Eigen::VectorXd& x,
    double tol = kDegenerateDirectionTol) {
  if (p.size() != w.dim() || x.size() != w.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "point and hyperplane dimensions differ");
  }
  const Eigen::VectorXd dir = x - p;
  const double denom = w.normal().dot(dir);
  if (std::abs(denom) < tol) {
    throw Error(ErrorCode::kParallelLine,
                "line through p and x does not meet the hyperplane");
  }
  const double lambda = (w.offset() - w.normal().dot(p)) / denom;
  return p + lambda * dir;
}

/// P_alpha : R^{n+1} -> R^n.
inline Eigen::VectorXd p_alpha(const Alpha& alpha, const Eigen::VectorXd& x,
                               double tol = kDegenerateDirectionTol) {
  if (x.size() < 2) {
    throw Error(ErrorCode::kDimensionMismatch, "P_alpha needs n + 1 >= 2");
  }
  const Eigen::Index n = x.size() - 1;
  if (alpha.is_infinite()) return x.head(n);
  const double a = alpha.value();
  const double gap = x[n] - a;
  if (std::abs(gap) < tol) {
    throw Error(ErrorCode::kDegenerateProjection,
                "x_n coincides with the centre of projection");
  }
  return ((1.0 - a) / gap) * x.head(n);
}

/// S_alpha (a cap of the sphere) and R_alpha (a ball or all of R^n), between
/// which P_alpha restricts to a bijection.
struct ProjectionDomain {
  Alpha alpha;
  Eigen::Index dim_n;
  /// Radius of R_alpha; empty when R_alpha = R^n.
  std::optional<double> radius;
  /// S_alpha = {x on the sphere : x_n > threshold} (strict) or >= threshold.
  double cap_threshold;
  bool cap_strict;
};

inline ProjectionDomain domain_of(const Alpha& alpha, Eigen::Index n) {
  if (n < 1) throw Error(ErrorCode::kInvalidInput, "n must be positive");
  if (alpha.is_infinite()) return {alpha, n, 1.0, 0.0, false};
  const double a = alpha.value();
  if (a >= -1.0) return {alpha, n, std::nullopt, a, true};
  return {alpha, n, alpha.range_radius(), 1.0 / a, false};
}

inline bool in_R(const Alpha& alpha, const Eigen::VectorXd& x) {
  const auto r = alpha.range_radius();
  return !r || x.norm() <= *r;
}

inline bool in_S(const Alpha& alpha, const Eigen::VectorXd& x) {
  if (x.size() < 2) {
    throw Error(ErrorCode::kDimensionMismatch, "S_alpha lives in R^{n+1}, n >= 1");
  }
  if (std::abs(x.norm() - 1.0) > kSphereNormTol) {
    throw Error(ErrorCode::kNotOnSphere, "point is not on the unit sphere");
  }
  const auto dom = domain_of(alpha, x.size() - 1);
  const double last = x[x.size() - 1];
  return dom.cap_strict ? last > dom.cap_threshold : last >= dom.cap_threshold;
}

}  // namespace revmap
