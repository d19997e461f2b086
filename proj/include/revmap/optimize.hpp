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

// Derivative-free minimizers behind one interface. Both count every
// objective evaluation against the budget and record it in the history.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revmap/error.hpp"
#include "revmap/rng.hpp"

namespace revmap {

class Objective {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  Objective(std::size_t arity, Fn fn) : arity_(arity), fn_(std::move(fn)) {}

  double operator()(std::span<const double> x) {
    if (x.size() != arity_) throw Error(ErrorCode::kLengthMismatch, "objective arity");
    ++evals_;
    return fn_(x);
  }

  std::size_t arity() const noexcept { return arity_; }
  std::size_t eval_count() const noexcept { return evals_; }

 private:
  std::size_t arity_;
  Fn fn_;
  std::size_t evals_ = 0;
};

struct HistoryEntry {
  std::size_t iteration;  // 1-based evaluation index
  double loss;
};

struct OptResult {
  std::vector<double> best_params;
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<HistoryEntry> history;
  std::size_t evals_used = 0;

  /// Best loss seen up to and including each history entry.
  std::vector<double> running_min() const {
    std::vector<double> out;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& h : history) out.push_back(best = std::min(best, h.loss));
    return out;
  }
};

enum class Method { kNelderMead, kSpsa };

inline constexpr std::string_view to_string(Method m) {
  return m == Method::kNelderMead ? "nelder_mead" : "spsa";
}

inline Method parse_method(std::string_view s) {
  if (s == "nelder_mead") return Method::kNelderMead;
  if (s == "spsa") return Method::kSpsa;
  throw Error(ErrorCode::kInvalidInput, "unknown optimizer '" + std::string(s) + "'");
}

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double initial_step = 0.25;
  /// Stop once both the value spread and the simplex diameter fall below.
  double ftol = 1e-14;
  double xtol = 1e-10;
};

struct SpsaOptions {
  double a = 0.1;
  double A = 10.0;
  double alpha = 0.602;
  double c = 0.1;
  double gamma = 0.101;
};

struct MinimizeOptions {
  Method method = Method::kNelderMead;
  std::size_t budget = 200;
  std::uint64_t seed = 0;
  NelderMeadOptions nelder_mead;
  SpsaOptions spsa;
};

namespace detail {

/// Evaluation bookkeeping shared by both methods.
class Tracker {
 public:
  Tracker(Objective& obj, std::size_t budget) : obj_(obj), budget_(budget) {}

  bool exhausted() const noexcept { return used_ >= budget_; }
  std::size_t remaining() const noexcept { return budget_ - used_; }

  double eval(const std::vector<double>& x) {
    const double f = obj_(x);
    ++used_;
    result_.history.push_back({used_, f});
    if (f < result_.best_loss) {
      result_.best_loss = f;
      result_.best_params = x;
    }
    return f;
  }

  OptResult finish() {
    result_.evals_used = used_;
    return std::move(result_);
  }

 private:
  Objective& obj_;
  std::size_t budget_;
  std::size_t used_ = 0;
  OptResult result_;
};

inline std::vector<double> affine(const std::vector<double>& base, double t,
                                  const std::vector<double>& toward) {
  std::vector<double> out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + t * (toward[i] - base[i]);
  return out;
}

inline OptResult nelder_mead(Objective& obj, const std::vector<double>& x0,
                             std::size_t budget, const NelderMeadOptions& o) {
  const std::size_t n = x0.size();
  Tracker tr(obj, budget);
  std::vector<std::vector<double>> simplex{x0};
  std::vector<double> fvals{tr.eval(x0)};
  for (std::size_t i = 0; i < n && !tr.exhausted(); ++i) {
    auto v = x0;
    v[i] += o.initial_step;
    fvals.push_back(tr.eval(v));
    simplex.push_back(std::move(v));
  }
  std::vector<std::size_t> order(n + 1);

  while (!tr.exhausted()) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
    const std::size_t best = order.front(), worst = order.back(),
                      second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        diameter = std::max(diameter, std::abs(simplex[order[k]][i] - simplex[best][i]));
      }
    }
    if (fvals[worst] - fvals[best] <= o.ftol && diameter <= o.xtol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[order[k]][i];
    }
    for (auto& c : centroid) c /= static_cast<double>(n);

    const auto xr = affine(centroid, -o.reflection, simplex[worst]);
    const double fr = tr.eval(xr);
    if (fr < fvals[best]) {
      if (tr.exhausted()) {
        simplex[worst] = xr, fvals[worst] = fr;
        break;
      }
      const auto xe = affine(centroid, o.expansion, xr);
      const double fe = tr.eval(xe);
      if (fe < fr) {
        simplex[worst] = xe, fvals[worst] = fe;
      } else {
        simplex[worst] = xr, fvals[worst] = fr;
      }
      continue;
    }
    if (fr < fvals[second]) {
      simplex[worst] = xr, fvals[worst] = fr;
      continue;
    }
    if (tr.exhausted()) break;
    bool accepted = false;
    if (fr < fvals[worst]) {
      const auto xc = affine(centroid, o.contraction, xr);
      const double fc = tr.eval(xc);
      if (fc <= fr) {
        simplex[worst] = xc, fvals[worst] = fc;
        accepted = true;
      }
    } else {
      const auto xc = affine(centroid, o.contraction, simplex[worst]);
      const double fc = tr.eval(xc);
      if (fc < fvals[worst]) {
        simplex[worst] = xc, fvals[worst] = fc;
        accepted = true;
      }
    }
    if (accepted) continue;
    for (std::size_t k = 1; k <= n && !tr.exhausted(); ++k) {
      auto& v = simplex[order[k]];
      v = affine(simplex[best], o.shrink, v);
      fvals[order[k]] = tr.eval(v);
    }
  }
  return tr.finish();
}

inline OptResult spsa(Objective& obj, const std::vector<double>& x0,
                      std::size_t budget, std::uint64_t seed, const SpsaOptions& o) {
  const std::size_t n = x0.size();
  Tracker tr(obj, budget);
  Rng rng(seed);
  std::vector<double> theta = x0;
  tr.eval(theta);
  std::vector<double> delta(n), plus(n), minus(n);
  for (std::size_t k = 0; tr.remaining() >= 2; ++k) {
    const double kk = static_cast<double>(k);
    const double ak = o.a / std::pow(kk + 1.0 + o.A, o.alpha);
    const double ck = o.c / std::pow(kk + 1.0, o.gamma);
    for (std::size_t i = 0; i < n; ++i) {
      delta[i] = rng.rademacher();
      plus[i] = theta[i] + ck * delta[i];
      minus[i] = theta[i] - ck * delta[i];
    }
    const double fp = tr.eval(plus);
    const double fm = tr.eval(minus);
    const double diff = (fp - fm) / (2.0 * ck);
    for (std::size_t i = 0; i < n; ++i) theta[i] -= ak * diff / delta[i];
  }
  if (!tr.exhausted()) tr.eval(theta);
  return tr.finish();
}

}  // namespace detail

/// Minimizes `obj` from `x0` using at most `opts.budget` evaluations.
/// Nelder-Mead is deterministic and ignores the seed.
inline OptResult minimize(Objective& obj, const std::vector<double>& x0,
                          const MinimizeOptions& opts) {
  if (x0.size() != obj.arity()) throw Error(ErrorCode::kLengthMismatch, "x0 arity");
  if (opts.budget < obj.arity() + 2) {
    throw Error(ErrorCode::kBudgetTooSmall,
                "budget " + std::to_string(opts.budget) + " < arity + 2");
  }
  return opts.method == Method::kNelderMead
             ? detail::nelder_mead(obj, x0, opts.budget, opts.nelder_mead)
             : detail::spsa(obj, x0, opts.budget, opts.seed, opts.spsa);
}

inline constexpr double kCrossEntropyClamp = 1e-7;

/// Mean binary cross-entropy.
inline double cross_entropy(std::span<const double> probs, std::span<const int> labels) {
  if (probs.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "probabilities and labels differ in length");
  }
  if (probs.empty()) throw Error(ErrorCode::kEmptyInput, "no samples");
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], kCrossEntropyClamp, 1.0 - kCrossEntropyClamp);
    acc += labels[i] ? std::log(p) : std::log1p(-p);
  }
  return -acc / static_cast<double>(probs.size());
}

}  // namespace revmap
