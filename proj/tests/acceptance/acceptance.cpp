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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "../oracles.hpp"
#include "revmap/config.hpp"
#include "revmap/symmetry.hpp"
#include "revmap/training.hpp"

using namespace revmap;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<Alpha> alphas() {
  return {Alpha::gnomonic(), Alpha::stereographic(), Alpha::twilight(), Alpha::finite(-5.0),
          Alpha::orthographic()};
}

VectorXd random_point(Eigen::Index n, double norm, Rng& rng) {
  VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.normal();
  return x * (norm / x.norm());
}

// Central projection from (0, ..., 0, alpha) onto x_n = 1, written out directly.
VectorXd project_back(const Alpha& a, const VectorXd& y) {
  const Eigen::Index n = y.size() - 1;
  if (a.is_infinite()) return y.head(n);
  return y.head(n) * ((1.0 - a.value()) / (y[n] - a.value()));
}

std::filesystem::path data_dir() { return default_data_dir(); }

Outcome criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst = 0.0, norm_err = 0.0;
  std::size_t cases = 0;
  for (const auto& a : alphas()) {
    const double reach = a.range_radius() ? 0.999 * *a.range_radius() : 5.0;
    for (Eigen::Index n : {1, 2, 7, 255}) {
      for (int k = 0; k < 1000; ++k) {
        const VectorXd x = random_point(n, rng.uniform(0.0, reach), rng);
        const VectorXd y = embed(a, x).coords;
        norm_err = std::max(norm_err, std::abs(y.norm() - 1.0));
        worst = std::max(worst, (project_back(a, y) - x).lpNorm<Eigen::Infinity>());
        ++cases;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && norm_err <= 1e-12 && secs < 10.0,
          fmt("%zu points, max round-trip error %.3g, max |norm-1| %.3g, %.2f s", cases, worst,
              norm_err, secs)};
}

Outcome criterion_2() {
  Rng rng(202);
  const auto as = alphas();
  double worst = 0.0, boundary_worst = 0.0, oracle_edge = 0.0;
  std::size_t boundary = 0;
  bool threw = false;
  for (int k = 0; k < 10000; ++k) {
    const Alpha& a = as[static_cast<std::size_t>(k) % as.size()];
    const auto r = a.range_radius();
    const bool at_edge = r && k % 20 < 5;
    const double s = at_edge ? *r : rng.uniform(0.0, r.value_or(6.0));
    try {
      const double t = last_coordinate(a, s);
      const double want =
          oracle::last_coordinate_line_sphere(a.is_infinite() ? 0.0 : a.value(), s, a.is_infinite());
      if (at_edge) {
        ++boundary;
        boundary_worst = std::max(boundary_worst,
                                  std::abs(t - (a.is_infinite() ? 0.0 : 1.0 / a.value())));
        oracle_edge = std::max(oracle_edge, std::abs(t - want));
      } else {
        worst = std::max(worst, std::abs(t - want));
      }
    } catch (const Error&) {
      threw = true;
    }
  }
  bool literal_fails = false;
  std::string literal_note = "no error";
  try {
    last_coordinate(Alpha::stereographic(), 3.0, MiddleCoefficient::kLinearInS);
  } catch (const Error& e) {
    literal_fails = e.code() == ErrorCode::kOutOfDomain;
    literal_note = e.what();
  }
  return {!threw && worst <= 1e-9 && boundary_worst <= 1e-8 && literal_fails,
          fmt("10000 pairs, max interior deviation from line-sphere oracle %.3g; %zu boundary "
              "pairs, max |t - 1/alpha| %.3g (oracle itself %.3g off at tangency); linear "
              "middle coefficient at alpha=-1, s=3: %s",
              worst, boundary, boundary_worst, oracle_edge, literal_note.c_str())};
}

Outcome criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(303);
  double worst = 0.0;
  std::size_t cases = 0, clamped = 0;
  for (Eigen::Index n : {2, 3, 7, 255}) {
    std::vector<RandomGroup> groups{RandomGroup::kZ2Signs, RandomGroup::kHouseholder};
    if (n >= 3) groups.push_back(RandomGroup::kS3);
    for (auto g : groups) {
      const Representation rep = random_representation(g, n, rng);
      std::vector<MatrixXd> rho;
      for (const auto& e : rep.elements()) rho.push_back(e.real());
      for (const auto& a : alphas()) {
        const double reach = 2.0 * a.range_radius().value_or(3.0);
        const int samples = n == 255 ? 20 : 100;
        for (int k = 0; k < samples; ++k) {
          const VectorXd x = random_point(n, rng.uniform(0.0, reach), rng);
          if (a.range_radius() && x.norm() > *a.range_radius()) ++clamped;
          const VectorXd ex = embed(a, x).coords;
          for (const auto& r : rho) {
            VectorXd rhs(n + 1);
            rhs.head(n) = r * ex.head(n);
            rhs[n] = ex[n];
            worst = std::max(worst, (embed(a, VectorXd(r * x)).coords - rhs).lpNorm<Eigen::Infinity>());
            ++cases;
          }
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && clamped > 0 && secs < 30.0,
          fmt("%zu (g, x) pairs, %zu out-of-range inputs, max residual %.3g, %.2f s", cases,
              clamped, worst, secs)};
}

Outcome criterion_4() {
  Rng rng(404);
  double idem = 0.0, lin = 0.0, comm = 0.0, vs_oracle = 0.0;
  std::size_t cases = 0;
  auto random_complex = [&](Eigen::Index d) {
    MatrixXcd m(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i < d; ++i) m(i, j) = {rng.normal(), rng.normal()};
    return m;
  };
  for (Eigen::Index d : {2, 3, 8, 16}) {
    std::vector<Representation> reps;
    for (int order = 2; order <= 6; ++order)
      reps.push_back(random_representation(RandomGroup::kCyclic, d, rng, order));
    reps.push_back(random_representation(RandomGroup::kZ2Signs, d, rng));
    if (d >= 3) reps.push_back(random_representation(RandomGroup::kS3, d, rng));
    for (const auto& rep : reps) {
      const std::vector<MatrixXcd> group(rep.elements().begin(), rep.elements().end());
      for (int k = 0; k < 10; ++k) {
        const MatrixXcd A = random_complex(d), B = random_complex(d);
        const std::complex<double> a{rng.normal(), rng.normal()}, b{rng.normal(), rng.normal()};
        const MatrixXcd tA = twirl(rep, A), tB = twirl(rep, B);
        idem = std::max(idem, max_abs(twirl(rep, tA) - tA));
        lin = std::max(lin, max_abs(twirl(rep, MatrixXcd(a * A + b * B)) - (a * tA + b * tB)));
        for (const auto& g : group) comm = std::max(comm, max_abs(g * tA - tA * g));
        vs_oracle = std::max(vs_oracle, max_abs(tA - oracle::twirl(group, A)));
        ++cases;
      }
    }
  }
  const double worst = std::max({idem, lin, comm, vs_oracle});
  return {worst <= 1e-10,
          fmt("%zu matrices; idempotence %.3g, linearity %.3g, commutation %.3g, vs direct sum "
              "%.3g",
              cases, idem, lin, comm, vs_oracle)};
}

MatrixXcd flip_operator() {
  return oracle::pauli_string("XXXXIIII");
}

Outcome criterion_5() {
  Rng rng(505);
  const MatrixXcd F = flip_operator();
  const auto eq = build_ansatz(AnsatzKind::kEquivariant);
  const auto he = build_ansatz(AnsatzKind::kHardwareEfficient);
  double circuit = 0.0, gate = 0.0, he_min = INFINITY;
  for (int k = 0; k < 20; ++k) {
    std::vector<double> theta(eq.param_count());
    for (auto& t : theta) t = rng.uniform(-M_PI, M_PI);
    const MatrixXcd U = circuit_unitary(eq.circuit, theta);
    circuit = std::max(circuit, (U * F - F * U).norm());
    for (const auto& g : eq.circuit.gates) {
      const MatrixXcd G = gate_unitary(g, resolve_angle(g, theta), 8);
      gate = std::max(gate, (G * F - F * G).norm());
    }
    std::vector<double> phi(he.param_count());
    for (auto& t : phi) t = rng.uniform(-M_PI, M_PI);
    const MatrixXcd V = circuit_unitary(he.circuit, phi);
    he_min = std::min(he_min, (V * F - F * V).norm());
  }
  return {circuit <= 1e-10 && gate <= 1e-10 && he_min > 1e-3,
          fmt("equivariant circuit max residual %.3g, worst single gate %.3g; hardware-efficient "
              "min residual %.3g",
              circuit, gate, he_min)};
}

Outcome criterion_6() {
  Rng rng(606);
  const MatrixXcd F = flip_operator();
  const auto eq = build_ansatz(AnsatzKind::kEquivariant);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> theta(eq.param_count());
    for (auto& t : theta) t = rng.uniform(-M_PI, M_PI);
    Eigen::VectorXcd psi(kPixels);
    for (int i = 0; i < kPixels; ++i) psi[i] = {rng.normal(), rng.normal()};
    psi.normalize();
    const Eigen::VectorXcd fpsi = F * psi;
    const double p0 = forward(eq, theta, QuantumState::from_amplitudes(psi)).probability;
    const double p1 = forward(eq, theta, QuantumState::from_amplitudes(fpsi)).probability;
    worst = std::max(worst, std::abs(p0 - p1));
  }
  return {worst <= 1e-9, fmt("100 random (theta, psi), max |p - p_flipped| %.3g", worst)};
}

ExperimentConfig desk_config(EmbeddingChoice e, double M, AnsatzKind kind, SourceKind src) {
  ExperimentConfig c;
  c.embedding = e;
  c.scale_M = M;
  c.model_kind = kind;
  c.data.source = src;
  c.data.fashion_dir = data_dir();
  c.data.count = 60;
  c.repeats = 3;
  c.optimizer.budget = 150;
  return c;
}

std::string describe(const RunReport& r) {
  const auto t = r.test_accuracy();
  return fmt("%s M=%g %s %.3f+-%.3f", r.embedding.c_str(), r.scale_M,
             std::string(to_string(r.model_kind)).c_str(), t.mean, t.std);
}

Outcome criterion_7() {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig probe;
  probe.base = desk_config({}, 1, AnsatzKind::kEquivariant, SourceKind::kFashionMnist);
  validate_paths(probe);
  const FashionPool pool = load_fashion_pool(data_dir());
  auto run = [&](EmbeddingChoice e, double M, AnsatzKind kind) {
    const auto r = train(desk_config(e, M, kind, SourceKind::kFashionMnist), &pool);
    std::printf("  %s\n", describe(r).c_str());
    return r.test_accuracy().mean;
  };
  const auto EQ = AnsatzKind::kEquivariant, HE = AnsatzKind::kHardwareEfficient;
  const auto stereo = EmbeddingChoice::reverse(Alpha::stereographic());

  const double a = run(EmbeddingChoice::reverse(Alpha::twilight()), 800, EQ);
  const bool pass_a = a >= 0.70;

  bool pass_b = true;
  for (auto kind : {HE, EQ}) {
    const double lo = run(stereo, 1, kind), hi = run(stereo, 2000, kind);
    pass_b = pass_b && lo <= 0.65 && hi >= 0.75;
  }

  const double amp_he = run(EmbeddingChoice::amplitude_embedding(), 1, HE);
  const double amp_eq = run(EmbeddingChoice::amplitude_embedding(), 1, EQ);
  const bool pass_c = amp_eq >= amp_he - 0.05;

  const double secs = seconds_since(t0);
  const bool pass_t = secs <= 900.0;
  return {pass_a && pass_b && pass_c && pass_t,
          fmt("(a) %s twilight M=800 equivariant %.3f >= 0.70; (b) %s stereographic M=1 <= 0.65 "
              "and M=2000 >= 0.75 for both models; (c) %s amplitude equivariant %.3f vs "
              "non-equivariant %.3f; %s %.1f s",
              pass_a ? "ok" : "MISS", a, pass_b ? "ok" : "MISS", pass_c ? "ok" : "MISS", amp_eq,
              amp_he, pass_t ? "ok" : "MISS", secs)};
}

Outcome criterion_8() {
  // Function level: x and x / M give the same amplitude state.
  Rng rng(808);
  const std::vector<double> scales{2.0, 1024.0, 0.5, 3.0, 800.0, 1e-3, 7.1e5};
  double func_dev = 0.0;
  bool pow2_exact = true;
  for (int k = 0; k < 200; ++k) {
    VectorXd x(kPixels);
    for (int i = 0; i < kPixels; ++i) x[i] = 255.0 * rng.uniform01();
    const VectorXd base = amplitude_embed(x, kPixels).coords;
    for (double M : scales) {
      const VectorXd y = amplitude_embed(VectorXd(x / M), kPixels).coords;
      const double d = (y - base).lpNorm<Eigen::Infinity>();
      if (std::exp2(std::round(std::log2(M))) == M && d != 0.0) pow2_exact = false;
      func_dev = std::max(func_dev, d);
    }
  }

  // Pipeline level: embedded states and full training runs do not depend on M.
  DatasetOptions o;
  o.source = SourceKind::kSynthetic;
  o.count = 40;
  bool states_equal = true;
  for (auto mode : {DataMode::kNonEquivariant, DataMode::kEquivariant}) {
    o.mode = mode;
    const auto split = build_dataset(o);
    for (const auto* part : {&split.train, &split.test}) {
      for (const auto& s : *part) {
        const auto ref = embed_sample(EmbeddingChoice::amplitude_embedding(), 1.0, s);
        for (double M : scales) {
          const auto st = embed_sample(EmbeddingChoice::amplitude_embedding(), M, s);
          if (st.amplitudes() != ref.amplitudes()) states_equal = false;
        }
      }
    }
  }
  bool reports_equal = true;
  for (auto kind : {AnsatzKind::kHardwareEfficient, AnsatzKind::kEquivariant}) {
    auto c = desk_config(EmbeddingChoice::amplitude_embedding(), 1.0, kind, SourceKind::kSynthetic);
    c.optimizer.budget = 60;
    c.repeats = 2;
    const auto r1 = train(c);
    c.scale_M = 800.0;
    const auto r2 = train(c);
    for (std::size_t i = 0; i < r1.repeats.size(); ++i) {
      const auto &x = r1.repeats[i], &y = r2.repeats[i];
      if (x.params != y.params || x.test_accuracy != y.test_accuracy ||
          x.train_accuracy != y.train_accuracy || x.best_loss != y.best_loss ||
          x.history.size() != y.history.size())
        reports_equal = false;
      for (std::size_t h = 0; reports_equal && h < x.history.size(); ++h)
        if (x.history[h].loss != y.history[h].loss) reports_equal = false;
    }
  }
  return {states_equal && reports_equal && pow2_exact && func_dev <= 1e-15,
          fmt("pipeline states bit-identical across M: %s; run reports identical: %s; "
              "power-of-two M bit-exact: %s; other M max deviation %.3g",
              states_equal ? "yes" : "no", reports_equal ? "yes" : "no",
              pow2_exact ? "yes" : "no", func_dev)};
}

Outcome criterion_9() {
  double best_reverse = 0.0, worst_amp = 0.0;
  std::string lines;
  for (auto kind : {AnsatzKind::kHardwareEfficient, AnsatzKind::kEquivariant}) {
    for (const auto& a : {Alpha::twilight(), Alpha::stereographic()}) {
      const auto r = train(desk_config(EmbeddingChoice::reverse(a), 2000.0, kind, SourceKind::kSynthetic));
      std::printf("  %s\n", describe(r).c_str());
      best_reverse = std::max(best_reverse, r.test_accuracy().mean);
    }
    const auto r = train(desk_config(EmbeddingChoice::amplitude_embedding(), 1.0, kind, SourceKind::kSynthetic));
    std::printf("  %s\n", describe(r).c_str());
    worst_amp = std::max(worst_amp, r.test_accuracy().mean);
  }
  return {best_reverse >= 0.9 && worst_amp <= 0.6,
          fmt("best reverse test accuracy %.3f (>= 0.9), highest amplitude %.3f (<= 0.6)",
              best_reverse, worst_amp)};
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return (std::uint32_t(b[at]) << 24) | (std::uint32_t(b[at + 1]) << 16) |
         (std::uint32_t(b[at + 2]) << 8) | std::uint32_t(b[at + 3]);
}

Outcome criterion_10() {
  const auto dir = data_dir();
  std::string notes;
  bool ok = true;
  std::size_t total = 0;
  for (int split = 0; split < 2; ++split) {
    const auto img_path = detail::locate(dir, kFashionFiles[2 * split]);
    const auto lab_path = detail::locate(dir, kFashionFiles[2 * split + 1]);
    const auto img_raw = read_file_maybe_gz(img_path);
    const auto lab_raw = read_file_maybe_gz(lab_path);
    const auto images = parse_idx(img_raw);
    const auto labels = parse_idx(lab_raw);
    const std::uint32_t n = be32(img_raw, 4);
    ok = ok && be32(img_raw, 0) == 2051 && be32(lab_raw, 0) == 2049;
    ok = ok && be32(img_raw, 8) == 28 && be32(img_raw, 12) == 28 && be32(lab_raw, 4) == n;
    ok = ok && img_raw.size() == 16 + std::size_t(n) * 784 && lab_raw.size() == 8 + std::size_t(n);
    ok = ok && images.magic == 2051 && images.dims == std::vector<std::uint32_t>{n, 28, 28};
    ok = ok && labels.magic == 2049 && labels.dims == std::vector<std::uint32_t>{n};
    ok = ok && std::equal(images.data.begin(), images.data.end(), img_raw.begin() + 16);
    ok = ok && std::equal(labels.data.begin(), labels.data.end(), lab_raw.begin() + 8);
    for (auto l : labels.data) ok = ok && l <= 9;
    total += n;
  }

  const FashionPool pool = load_fashion_pool(dir);
  std::size_t exact = 0, checked = 0;
  for (const auto* cls : {&pool.sandals, &pool.boots}) {
    for (std::size_t i = 0; i < cls->size() && i < 1000; ++i) {
      const Image16& img = (*cls)[i];
      const VectorXd a = prepare(hflip(img), DataMode::kEquivariant).vector;
      const VectorXd b = flip_prepared(prepare(img, DataMode::kEquivariant).vector);
      exact += a == b && a[kMirrorOfFinal] == 0.0;
      ++checked;
    }
  }

  DatasetOptions o;
  o.source = SourceKind::kFashionMnist;
  o.fashion_dir = dir;
  const auto split = build_dataset(o, &pool);
  int train_boots = 0, test_boots = 0;
  for (const auto& s : split.train) train_boots += s.image.label == kBoot;
  for (const auto& s : split.test) test_boots += s.image.label == kBoot;
  const bool split_ok = split.train.size() == 182 && split.test.size() == 78 &&
                        train_boots == 91 && test_boots == 39;

  return {ok && exact == checked && split_ok,
          fmt("IDX headers and payloads %s over %zu images; surgery flip-compatible bitwise on "
              "%zu/%zu images; split %zu/%zu with %d/%d boots",
              ok ? "consistent" : "INCONSISTENT", total, exact, checked, split.train.size(),
              split.test.size(), train_boots, test_boots)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-10); default all")
      ->check(CLI::Range(0, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria{
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  bool all = true;
  for (int k = 1; k <= 10; ++k) {
    if (only && k != only) continue;
    Outcome out;
    try {
      out = criteria[static_cast<std::size_t>(k - 1)]();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s\n", k, out.passed ? "PASS" : "FAIL", out.detail.c_str());
    std::fflush(stdout);
    all = all && out.passed;
  }
  return all ? 0 : 1;
}
