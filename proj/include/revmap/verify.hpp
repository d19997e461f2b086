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

// Property suites behind `revmap verify`. Failures are reported, never
// thrown. The fast level skips the n = 255 sweeps.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "revmap/alpha.hpp"
#include "revmap/embeddings.hpp"
#include "revmap/model.hpp"
#include "revmap/projections.hpp"
#include "revmap/rng.hpp"
#include "revmap/simulator.hpp"
#include "revmap/symmetry.hpp"
#include "revmap/training.hpp"

namespace revmap {

enum class VerifyLevel { kFast, kFull };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::kFast;
  /// Uses the linear-in-s middle coefficient in the round-trip and
  /// last-coordinate suites.
  bool inject_fault = false;
  std::uint64_t seed = 20240601;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  double worst = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;
  double seconds = 0.0;
  std::string detail;
};

inline std::vector<Alpha> standard_alphas() {
  return {Alpha::gnomonic(), Alpha::stereographic(), Alpha::twilight(), Alpha::finite(-5.0),
          Alpha::orthographic()};
}

/// Uniform direction times a norm in [0, reach).
inline Eigen::VectorXd random_point(Eigen::Index n, double reach, Rng& rng) {
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.normal();
  return x * (rng.uniform(0.0, reach) / x.norm());
}

/// Largest cap coordinate t with ||P_alpha(y)|| = s for y = (sqrt(1-t^2) u, t),
/// by bisection on the monotone norm-versus-t relation.
inline double bisect_last_coordinate(const Alpha& alpha, double s) {
  auto norm_at = [&](double t) {
    const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
    if (alpha.is_infinite()) return r;
    const double a = alpha.value();
    return (1.0 - a) * r / (t - a);
  };
  double lo;
  if (alpha.is_infinite()) lo = 0.0;
  else if (alpha.value() >= -1.0) lo = std::max(alpha.value(), -1.0);
  else lo = 1.0 / alpha.value();
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (norm_at(mid) > s) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

template <class Fn>
SuiteResult timed_suite(std::string name, double tol, Fn&& body) {
  SuiteResult r;
  r.name = std::move(name);
  r.tolerance = tol;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.worst > r.tolerance || std::isnan(r.worst)) r.passed = false;
  return r;
}

inline Eigen::MatrixXcd flip_matrix() { return build_flip_representation(4, 4)[1]; }

}  // namespace detail

inline SuiteResult suite_round_trip(const VerifyOptions& o) {
  const auto middle = o.inject_fault ? MiddleCoefficient::kLinearInS
                                     : MiddleCoefficient::kQuadraticInS;
  return detail::timed_suite("round_trip", 1e-9, [&](SuiteResult& r) {
    Rng rng(o.seed);
    std::vector<Eigen::Index> dims{1, 2, 7};
    if (o.level == VerifyLevel::kFull) dims.push_back(255);
    const std::size_t points = o.level == VerifyLevel::kFull ? 1000 : 200;
    double norm_err = 0.0;
    for (const auto& a : standard_alphas()) {
      const double reach = a.range_radius() ? 0.999 * *a.range_radius() : 5.0;
      for (auto n : dims) {
        for (std::size_t k = 0; k < points; ++k) {
          const Eigen::VectorXd x = random_point(n, reach, rng);
          const auto y = embed(EmbeddingConfig{a, 1.0}, x, middle);
          norm_err = std::max(norm_err, std::abs(y.coords.norm() - 1.0));
          r.worst = std::max(r.worst, round_trip_check(a, x, middle));
          ++r.cases;
        }
      }
    }
    if (norm_err > 1e-12) {
      r.passed = false;
      r.detail = "unit-norm violation " + std::to_string(norm_err);
    }
  });
}

inline SuiteResult suite_last_coordinate(const VerifyOptions& o) {
  const auto middle = o.inject_fault ? MiddleCoefficient::kLinearInS
                                     : MiddleCoefficient::kQuadraticInS;
  return detail::timed_suite("last_coordinate", 1e-9, [&](SuiteResult& r) {
    Rng rng(o.seed + 1);
    const std::size_t pairs = o.level == VerifyLevel::kFull ? 10000 : 2000;
    const auto alphas = standard_alphas();
    std::size_t failures = 0;
    for (std::size_t k = 0; k < pairs; ++k) {
      const Alpha& a = alphas[k % alphas.size()];
      const double reach = a.range_radius().value_or(5.0);
      const double s = k % 50 == 0 && a.range_radius() ? reach : rng.uniform(0.0, reach);
      ++r.cases;
      try {
        const double t = last_coordinate(a, s, middle);
        r.worst = std::max(r.worst, std::abs(t - bisect_last_coordinate(a, s)));
      } catch (const Error& e) {
        ++failures;
        r.detail = std::string(e.what()) + " at alpha=" + a.name() + ", s=" + std::to_string(s);
      }
    }
    // The erratum's signature case.
    ++r.cases;
    try {
      const double t = last_coordinate(Alpha::stereographic(), 3.0, middle);
      r.worst = std::max(r.worst, std::abs(t - bisect_last_coordinate(Alpha::stereographic(), 3.0)));
    } catch (const Error& e) {
      ++failures;
      r.detail = std::string(e.what()) + " at alpha=-1, s=3";
    }
    if (failures) r.passed = false;
  });
}

inline SuiteResult suite_equivariance(const VerifyOptions& o) {
  return detail::timed_suite("embedding_equivariance", 1e-9, [&](SuiteResult& r) {
    Rng rng(o.seed + 2);
    std::vector<Eigen::Index> dims{2, 3, 7};
    if (o.level == VerifyLevel::kFull) dims.push_back(255);
    for (auto n : dims) {
      std::vector<RandomGroup> groups{RandomGroup::kHouseholder, RandomGroup::kZ2Signs};
      if (n >= 3) groups.push_back(RandomGroup::kS3);
      for (auto g : groups) {
        const Representation rep = random_representation(g, n, rng);
        for (const auto& a : standard_alphas()) {
          const std::size_t samples = n == 255 ? 10 : 50;
          r.worst = std::max(r.worst, check_embedding_equivariance(rep, a, samples, rng.next_u64()));
          r.cases += samples;
        }
      }
    }
  });
}

inline SuiteResult suite_twirl(const VerifyOptions& o) {
  return detail::timed_suite("twirl_projection", 1e-10, [&](SuiteResult& r) {
    Rng rng(o.seed + 3);
    const std::size_t trials = o.level == VerifyLevel::kFull ? 20 : 5;
    auto random_complex = [&](Eigen::Index d) {
      Eigen::MatrixXcd m(d, d);
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) m(i, j) = {rng.normal(), rng.normal()};
      return m;
    };
    for (Eigen::Index d : {3, 8, 16}) {
      std::vector<Representation> reps;
      for (int order = 2; order <= 6; ++order)
        reps.push_back(random_representation(RandomGroup::kCyclic, d, rng, order));
      reps.push_back(random_representation(RandomGroup::kS3, d, rng));
      for (const auto& rep : reps) {
        for (std::size_t k = 0; k < trials; ++k) {
          const Eigen::MatrixXcd A = random_complex(d), B = random_complex(d);
          const std::complex<double> a{rng.normal(), rng.normal()}, b{rng.normal(), rng.normal()};
          const Eigen::MatrixXcd tA = twirl(rep, A), tB = twirl(rep, B);
          r.worst = std::max(r.worst, max_abs(twirl(rep, tA) - tA));
          r.worst = std::max(r.worst, max_abs(twirl(rep, Eigen::MatrixXcd(a * A + b * B)) -
                                              (a * tA + b * tB)));
          r.worst = std::max(r.worst, commutator_residual(rep, tA));
          ++r.cases;
        }
      }
    }
  });
}

/// Frobenius norm of [U, phi(H)] for the 8-qubit ansatz unitary.
inline double ansatz_flip_residual(const AnsatzSpec& spec, std::span<const double> params) {
  const Eigen::MatrixXcd U = circuit_unitary(spec.circuit, params);
  const Eigen::MatrixXcd F = detail::flip_matrix();
  return (U * F - F * U).norm();
}

inline SuiteResult suite_ansatz(const VerifyOptions& o) {
  return detail::timed_suite("ansatz_commutation", 1e-10, [&](SuiteResult& r) {
    Rng rng(o.seed + 4);
    const auto eq = build_ansatz(AnsatzKind::kEquivariant);
    const auto he = build_ansatz(AnsatzKind::kHardwareEfficient);
    const Eigen::MatrixXcd F = detail::flip_matrix();
    const std::size_t trials = o.level == VerifyLevel::kFull ? 20 : 3;
    double he_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < trials; ++k) {
      const auto theta = initial_parameters(eq.param_count(), rng.next_u64());
      r.worst = std::max(r.worst, ansatz_flip_residual(eq, theta));
      for (const auto& g : eq.circuit.gates) {
        const Eigen::MatrixXcd G = gate_unitary(g, resolve_angle(g, theta), 8);
        r.worst = std::max(r.worst, (G * F - F * G).norm());
      }
      he_min = std::min(he_min, ansatz_flip_residual(he, theta));
      ++r.cases;
    }
    if (!(he_min > 1e-3)) {
      r.passed = false;
      r.detail = "hardware-efficient ansatz unexpectedly commutes";
    }
  });
}

inline SuiteResult suite_model_flip(const VerifyOptions& o) {
  return detail::timed_suite("model_flip_invariance", 1e-9, [&](SuiteResult& r) {
    Rng rng(o.seed + 5);
    const auto eq = build_ansatz(AnsatzKind::kEquivariant);
    const std::size_t trials = o.level == VerifyLevel::kFull ? 100 : 20;
    for (std::size_t k = 0; k < trials; ++k) {
      const auto theta = initial_parameters(eq.param_count(), rng.next_u64());
      Eigen::VectorXcd psi(kPixels);
      for (int i = 0; i < kPixels; ++i) psi[i] = {rng.normal(), rng.normal()};
      psi.normalize();
      Eigen::VectorXcd flipped(kPixels);
      for (int i = 0; i < kPixels; ++i) flipped[i ^ 0xF0] = psi[i];
      const double p0 = forward(eq, theta, QuantumState::from_amplitudes(psi)).probability;
      const double p1 = forward(eq, theta, QuantumState::from_amplitudes(flipped)).probability;
      r.worst = std::max(r.worst, std::abs(p1 - p0));
      ++r.cases;
    }
  });
}

inline SuiteResult suite_strict_flip(const VerifyOptions& o) {
  return detail::timed_suite("strict_flip_equivariance", 1e-9, [&](SuiteResult& r) {
    const std::size_t samples = o.level == VerifyLevel::kFull ? 200 : 20;
    for (const auto& a : standard_alphas()) {
      const double M = a.range_radius() ? 1000.0 : 2000.0;
      r.worst = std::max(r.worst, strict_flip_equivariance_residual(a, M, samples, o.seed + 6));
      r.cases += samples;
    }
  });
}

inline std::vector<SuiteResult> run_verify(const VerifyOptions& o) {
  return {suite_round_trip(o), suite_last_coordinate(o), suite_equivariance(o),
          suite_twirl(o),      suite_ansatz(o),          suite_model_flip(o),
          suite_strict_flip(o)};
}

inline bool all_passed(const std::vector<SuiteResult>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const SuiteResult& r) { return r.passed; });
}

inline nlohmann::json verify_json(const VerifyOptions& o, const std::vector<SuiteResult>& rs) {
  nlohmann::json j;
  j["level"] = o.level == VerifyLevel::kFull ? "full" : "fast";
  j["inject_fault"] = o.inject_fault;
  j["passed"] = all_passed(rs);
  j["suites"] = nlohmann::json::array();
  for (const auto& r : rs) {
    j["suites"].push_back({{"name", r.name},
                           {"passed", r.passed},
                           {"worst", r.worst},
                           {"tolerance", r.tolerance},
                           {"cases", r.cases},
                           {"seconds", r.seconds},
                           {"detail", r.detail}});
  }
  return j;
}

}  // namespace revmap
