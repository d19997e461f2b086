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

#include <cmath>

#include <gtest/gtest.h>

#include "revmap/alpha.hpp"
#include "revmap/projections.hpp"

namespace revmap {
namespace {

using Eigen::VectorXd;

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(AlphaTest, NamedMembers) {
  EXPECT_EQ(Alpha::gnomonic().value(), 0.0);
  EXPECT_EQ(Alpha::stereographic().value(), -1.0);
  EXPECT_NEAR(Alpha::twilight().value(), -1.7071067811865475, 1e-15);
  EXPECT_TRUE(Alpha::orthographic().is_infinite());
  EXPECT_TRUE(std::isinf(Alpha::orthographic().value()));
  EXPECT_EQ(Alpha::parse("twilight"), Alpha::twilight());
  EXPECT_EQ(Alpha::parse("-inf"), Alpha::orthographic());
  EXPECT_EQ(Alpha::parse("-5").value(), -5.0);
  EXPECT_EQ(Alpha::twilight().name(), "twilight");
}

TEST(AlphaTest, RejectsOutOfFamily) {
  EXPECT_THROW(Alpha::finite(1.0), Error);
  EXPECT_THROW(Alpha::finite(2.0), Error);
  EXPECT_THROW(Alpha::finite(std::nan("")), Error);
  EXPECT_THROW(Alpha::parse("north"), Error);
  EXPECT_THROW(Alpha::finite(-std::numeric_limits<double>::infinity()), Error);
}

TEST(ProjectFromPointTest, LinePlaneIntersection) {
  const Hyperplane w(vec({0, 0, 1}), 1.0);
  const VectorXd y = project_from_point(vec({0, 0, -1}), w, vec({0.6, 0.8, 0}));
  EXPECT_NEAR(y[0], 1.2, 1e-15);
  EXPECT_NEAR(y[1], 1.6, 1e-15);
  EXPECT_NEAR(y[2], 1.0, 1e-15);
  const VectorXd z = project_from_point(VectorXd::Zero(3), w, vec({0, 0, 1}));
  EXPECT_NEAR((z - vec({0, 0, 1})).norm(), 0.0, 1e-15);
}

TEST(ProjectFromPointTest, ParallelLineThrows) {
  const Hyperplane w(vec({0, 0, 1}), 1.0);
  try {
    project_from_point(vec({0, 0, 0}), w, vec({1, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParallelLine);
  }
  EXPECT_THROW(Hyperplane(VectorXd::Zero(3), 1.0), Error);
}

TEST(PAlphaTest, Examples) {
  EXPECT_NEAR(p_alpha(Alpha::stereographic(), vec({0.6, 0.8}))[0], 2.0 * 0.6 / 1.8, 1e-15);
  EXPECT_EQ(p_alpha(Alpha::gnomonic(), vec({0, 0, 1})).norm(), 0.0);
  const VectorXd o = p_alpha(Alpha::orthographic(), vec({0.3, 0.4, 0.866}));
  EXPECT_EQ(o.size(), 2);
  EXPECT_EQ(o[0], 0.3);
  EXPECT_EQ(o[1], 0.4);
}

TEST(PAlphaTest, MatchesCentralProjectionOntoTangentPlane) {
  // P_alpha equals projection from (0, ..., alpha) onto {x_n = 1}, first n coordinates.
  for (double a : {0.0, -1.0, -2.5, 0.5}) {
    const VectorXd x = vec({0.36, 0.48, 0.8});
    VectorXd p = VectorXd::Zero(3);
    p[2] = a;
    const VectorXd y = project_from_point(p, Hyperplane::north_tangent(3), x);
    EXPECT_NEAR((p_alpha(Alpha::finite(a), x) - y.head(2)).norm(), 0.0, 1e-14);
  }
}

TEST(PAlphaTest, DegenerateCentre) {
  try {
    p_alpha(Alpha::finite(-0.5), vec({0.8660254037844386, -0.5}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateProjection);
  }
}

TEST(DomainTest, Examples) {
  const auto tw = domain_of(Alpha::twilight(), 255);
  ASSERT_TRUE(tw.radius);
  EXPECT_NEAR(*tw.radius, std::sqrt(1.0 + 2.0 * std::sqrt(2.0)), 1e-15);
  EXPECT_FALSE(tw.cap_strict);
  EXPECT_NEAR(tw.cap_threshold, 1.0 / Alpha::twilight().value(), 1e-15);

  const auto orth = domain_of(Alpha::orthographic(), 2);
  EXPECT_EQ(*orth.radius, 1.0);
  EXPECT_EQ(orth.cap_threshold, 0.0);
  EXPECT_FALSE(orth.cap_strict);

  const auto gn = domain_of(Alpha::gnomonic(), 2);
  EXPECT_FALSE(gn.radius);
  EXPECT_EQ(gn.cap_threshold, 0.0);
  EXPECT_TRUE(gn.cap_strict);
}

TEST(DomainTest, Membership) {
  EXPECT_TRUE(in_R(Alpha::finite(-2.0), vec({std::sqrt(3.0)})));
  EXPECT_FALSE(in_R(Alpha::finite(-2.0), vec({1.8})));
  EXPECT_TRUE(in_R(Alpha::stereographic(), vec({1e6, -3e7})));
  EXPECT_TRUE(in_S(Alpha::orthographic(), vec({1, 0, 0})));
  EXPECT_FALSE(in_S(Alpha::gnomonic(), vec({1, 0, 0})));
  EXPECT_FALSE(in_S(Alpha::orthographic(), vec({0.6, 0, -0.8})));
  EXPECT_THROW(in_S(Alpha::gnomonic(), vec({1, 1, 0})), Error);
}

TEST(DomainTest, RadiusIsTangencyOfCapBoundary) {
  // The boundary x_n = 1/alpha of S_alpha projects onto the sphere of radius(alpha).
  for (double a : {-1.5, -2.0, -5.0, -1.0 - std::sqrt(2.0) / 2.0, -40.0}) {
    const double t = 1.0 / a;
    const VectorXd y = vec({std::sqrt(1.0 - t * t), t});
    EXPECT_NEAR(p_alpha(Alpha::finite(a), y).norm(), *Alpha::finite(a).range_radius(), 1e-12);
  }
}

}  // namespace
}  // namespace revmap
