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

// Finite-group unitary representations stored extensionally: one matrix per
// group element plus the group's multiplication table. Element 0 is the
// identity.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "revmap/alpha.hpp"
#include "revmap/embeddings.hpp"
#include "revmap/error.hpp"
#include "revmap/rng.hpp"

namespace revmap {

using Complex = std::complex<double>;
using ProductTable = std::vector<std::vector<std::size_t>>;

inline constexpr double kRepresentationTol = 1e-10;

inline double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

class Representation {
 public:
  /// Validates unitarity, closure under the table, and identity at index 0.
  Representation(std::vector<Eigen::MatrixXcd> elements, ProductTable table)
      : elements_(std::move(elements)), table_(std::move(table)) {
    validate();
  }

  /// Builds the product table by matching products against the element list.
  /// The list must already be closed under multiplication.
  static Representation from_closed_set(std::vector<Eigen::MatrixXcd> elements,
                                        double tol = kRepresentationTol) {
    const std::size_t order = elements.size();
    ProductTable table(order, std::vector<std::size_t>(order));
    for (std::size_t g = 0; g < order; ++g) {
      for (std::size_t h = 0; h < order; ++h) {
        const Eigen::MatrixXcd gh = elements[g] * elements[h];
        std::size_t found = order;
        for (std::size_t k = 0; k < order && found == order; ++k) {
          if (gh.rows() == elements[k].rows() &&
              max_abs(gh - elements[k]) <= tol) {
            found = k;
          }
        }
        if (found == order) {
          throw Error(ErrorCode::kGroupMismatch, "element set is not closed");
        }
        table[g][h] = found;
      }
    }
    return Representation(std::move(elements), std::move(table));
  }

  /// Cyclic group generated by `generator`, which must have finite order.
  static Representation cyclic(const Eigen::MatrixXcd& generator,
                               std::size_t max_order = 64) {
    const Eigen::Index d = generator.rows();
    std::vector<Eigen::MatrixXcd> elems{Eigen::MatrixXcd::Identity(d, d)};
    Eigen::MatrixXcd power = generator;
    while (max_abs(power - elems.front()) > kRepresentationTol) {
      if (elems.size() >= max_order) {
        throw Error(ErrorCode::kInvalidInput, "generator order exceeds limit");
      }
      elems.push_back(power);
      power = power * generator;
    }
    const std::size_t order = elems.size();
    ProductTable table(order, std::vector<std::size_t>(order));
    for (std::size_t g = 0; g < order; ++g)
      for (std::size_t h = 0; h < order; ++h) table[g][h] = (g + h) % order;
    return Representation(std::move(elems), std::move(table));
  }

  /// The trivial representation of the group described by `table`.
  static Representation trivial(Eigen::Index dim, ProductTable table) {
    std::vector<Eigen::MatrixXcd> elems(table.size(),
                                        Eigen::MatrixXcd::Identity(dim, dim));
    return Representation(std::move(elems), std::move(table));
  }

  std::size_t order() const noexcept { return elements_.size(); }
  Eigen::Index dim() const noexcept { return elements_.front().rows(); }
  const Eigen::MatrixXcd& operator[](std::size_t g) const { return elements_[g]; }
  const std::vector<Eigen::MatrixXcd>& elements() const noexcept { return elements_; }
  const ProductTable& product_table() const noexcept { return table_; }

  bool is_real(double tol = 1e-12) const {
    for (const auto& m : elements_)
      if (m.imag().cwiseAbs().maxCoeff() > tol) return false;
    return true;
  }

 private:
  void validate() const {
    const std::size_t order = elements_.size();
    if (order == 0) throw Error(ErrorCode::kInvalidInput, "empty group");
    if (table_.size() != order) {
      throw Error(ErrorCode::kGroupMismatch, "product table size != group order");
    }
    const Eigen::Index d = elements_.front().rows();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    for (const auto& m : elements_) {
      if (m.rows() != d || m.cols() != d) {
        throw Error(ErrorCode::kDimensionMismatch, "elements differ in dimension");
      }
      if (max_abs(m * m.adjoint() - id) > kRepresentationTol) {
        throw Error(ErrorCode::kInvalidInput, "element is not unitary");
      }
    }
    if (max_abs(elements_.front() - id) > kRepresentationTol) {
      throw Error(ErrorCode::kInvalidInput, "element 0 must be the identity");
    }
    for (std::size_t g = 0; g < order; ++g) {
      if (table_[g].size() != order) {
        throw Error(ErrorCode::kGroupMismatch, "ragged product table");
      }
      for (std::size_t h = 0; h < order; ++h) {
        const std::size_t gh = table_[g][h];
        if (gh >= order ||
            max_abs(elements_[gh] - elements_[g] * elements_[h]) >
                kRepresentationTol) {
          throw Error(ErrorCode::kGroupMismatch, "representation is not closed");
        }
      }
    }
  }

  std::vector<Eigen::MatrixXcd> elements_;
  ProductTable table_;
};

/// Block-diagonal (r1 (+) r2)(g) = diag(r1(g), r2(g)).
inline Representation direct_sum(const Representation& r1,
                                 const Representation& r2) {
  if (r1.product_table() != r2.product_table()) {
    throw Error(ErrorCode::kGroupMismatch, "direct sum needs the same group");
  }
  const Eigen::Index d1 = r1.dim(), d2 = r2.dim();
  std::vector<Eigen::MatrixXcd> elems;
  elems.reserve(r1.order());
  for (std::size_t g = 0; g < r1.order(); ++g) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d1 + d2, d1 + d2);
    m.topLeftCorner(d1, d1) = r1[g];
    m.bottomRightCorner(d2, d2) = r2[g];
    elems.push_back(std::move(m));
  }
  return Representation(std::move(elems), r1.product_table());
}

/// (1/|G|) sum_g phi(g) U phi(g)^*, summed in element order.
inline Eigen::MatrixXcd twirl(const Representation& rep,
                              const Eigen::MatrixXcd& u) {
  if (u.rows() != rep.dim() || u.cols() != rep.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "operator does not match rep");
  }
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(u.rows(), u.cols());
  for (const auto& g : rep.elements()) acc += g * u * g.adjoint();
  return acc / static_cast<double>(rep.order());
}

/// max_g ||phi(g) U - U phi(g)||_max.
inline double commutator_residual(const Representation& rep,
                                  const Eigen::MatrixXcd& u) {
  if (u.rows() != rep.dim() || u.cols() != rep.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "operator does not match rep");
  }
  double worst = 0.0;
  for (const auto& g : rep.elements()) {
    worst = std::max(worst, max_abs(g * u - u * g));
  }
  return worst;
}

inline bool is_equivariant_matrix(const Representation& rep,
                                  const Eigen::MatrixXcd& u,
                                  double tol = kRepresentationTol) {
  return commutator_residual(rep, u) <= tol;
}

/// Z2 acting on q = x_qubits + y_qubits qubits by flipping every bit of the
/// x register (the leading qubits; qubit 0 is the most significant bit).
/// The non-identity element permutes basis index i to i XOR mask.
inline Representation build_flip_representation(int x_qubits, int y_qubits) {
  if (x_qubits < 1 || y_qubits < 1 || x_qubits + y_qubits > 12) {
    throw Error(ErrorCode::kInvalidInput, "register sizes out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << (x_qubits + y_qubits);
  const std::uint64_t mask = ((std::uint64_t{1} << x_qubits) - 1) << y_qubits;
  Eigen::MatrixXcd flip = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    flip(static_cast<Eigen::Index>(static_cast<std::uint64_t>(i) ^ mask), i) = 1.0;
  }
  return Representation({Eigen::MatrixXcd::Identity(dim, dim), std::move(flip)},
                        {{0, 1}, {1, 0}});
}

/// Max over random x and all g of ||E(rho(g) x) - (rho(g) (+) 1) E(x)||_inf.
///
/// Sample norms are spread over [0, 2 R] (R = radius of R_alpha, or 3 when
/// R_alpha is unbounded), so roughly half the samples exercise clamping.
/// Haar-ish random orthogonal matrix: QR of a Gaussian matrix with the sign
/// of R's diagonal folded into Q.
inline Eigen::MatrixXd random_orthogonal(Eigen::Index n, Rng& rng) {
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

enum class RandomGroup { kHouseholder, kZ2Signs, kS3, kCyclic };

inline std::string_view to_string(RandomGroup g) {
  switch (g) {
    case RandomGroup::kHouseholder: return "householder";
    case RandomGroup::kZ2Signs: return "z2_signs";
    case RandomGroup::kS3: return "s3";
    case RandomGroup::kCyclic: return "cyclic";
  }
  return "?";
}

/// Random real orthogonal representation in dimension n.
///   kHouseholder: {I, I - 2vv^T} for a random unit v.
///   kZ2Signs:     Q diag(+-1) Q^T with at least one -1.
///   kS3:          permutations of the first three coordinates, conjugated
///                 by a random Q (n >= 3).
///   kCyclic:      Q diag(R(2 pi / order), ..., 1) Q^T (n >= 2, order >= 2).
inline Representation random_representation(RandomGroup kind, Eigen::Index n, Rng& rng,
                                             int order = 3) {
  using Eigen::MatrixXd;
  if (n < 1) throw Error(ErrorCode::kInvalidInput, "dimension must be positive");
  const MatrixXd eye = MatrixXd::Identity(n, n);
  switch (kind) {
    case RandomGroup::kHouseholder: {
      Eigen::VectorXd v(n);
      for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
      v.normalize();
      const MatrixXd h = eye - 2.0 * v * v.transpose();
      return Representation::cyclic(h.cast<std::complex<double>>(), 2);
    }
    case RandomGroup::kZ2Signs: {
      Eigen::VectorXd d(n);
      for (Eigen::Index i = 0; i < n; ++i) d[i] = rng.coin() ? -1.0 : 1.0;
      d[static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)))] = -1.0;
      const MatrixXd q = random_orthogonal(n, rng);
      const MatrixXd g = q * d.asDiagonal() * q.transpose();
      return Representation::cyclic(g.cast<std::complex<double>>(), 2);
    }
    case RandomGroup::kS3: {
      if (n < 3) throw Error(ErrorCode::kInvalidInput, "S3 needs dimension >= 3");
      const MatrixXd q = random_orthogonal(n, rng);
      const int perms[6][3] = {{0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
      std::vector<Eigen::MatrixXcd> els;
      for (const auto& p : perms) {
        MatrixXd m = eye;
        for (int i = 0; i < 3; ++i) m(i, i) = 0.0;
        for (int i = 0; i < 3; ++i) m(p[i], i) = 1.0;
        els.push_back((q * m * q.transpose()).cast<std::complex<double>>());
      }
      return Representation::from_closed_set(std::move(els));
    }
    case RandomGroup::kCyclic: {
      if (n < 2 || order < 2) throw Error(ErrorCode::kInvalidInput, "cyclic needs n >= 2, order >= 2");
      const double t = 2.0 * std::numbers::pi / order;
      MatrixXd m = eye;
      m(0, 0) = std::cos(t);
      m(0, 1) = -std::sin(t);
      m(1, 0) = std::sin(t);
      m(1, 1) = std::cos(t);
      const MatrixXd q = random_orthogonal(n, rng);
      return Representation::cyclic((q * m * q.transpose()).cast<std::complex<double>>(),
                                    order);
    }
  }
  throw Error(ErrorCode::kInvalidInput, "unknown group");
}

inline double check_embedding_equivariance(const Representation& rep_in,
                                           const Alpha& alpha,
                                           std::size_t samples,
                                           std::uint64_t seed = 0) {
  if (!rep_in.is_real()) {
    throw Error(ErrorCode::kInvalidInput, "representation must be real orthogonal");
  }
  const Eigen::Index n = rep_in.dim();
  std::vector<Eigen::MatrixXd> rho;
  for (const auto& g : rep_in.elements()) rho.push_back(g.real());

  const double reach = 2.0 * alpha.range_radius().value_or(3.0);
  Rng rng(seed);

  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.normal();
    const double norm = x.norm();
    if (norm > 0.0) x *= rng.uniform(0.0, reach) / norm;
    const Eigen::VectorXd ex = embed(alpha, x).coords;
    for (const auto& r : rho) {
      Eigen::VectorXd rhs(n + 1);
      rhs.head(n) = r * ex.head(n);
      rhs[n] = ex[n];
      const Eigen::VectorXd lhs = embed(alpha, Eigen::VectorXd(r * x)).coords;
      worst = std::max(worst, (lhs - rhs).lpNorm<Eigen::Infinity>());
    }
  }
  return worst;
}

}  // namespace revmap
