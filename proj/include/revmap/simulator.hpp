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

// Dense statevector simulation.
//
// Conventions:
//  * basis index i has qubit 0 as its most significant bit;
//  * R_P(theta) = exp(-i theta P / 2) = cos(theta/2) I - i sin(theta/2) P
//    for P in {X, Y, Z, XX, YY, ZZ};
//  * CNOT qubits are {control, target}.

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "revmap/error.hpp"

namespace revmap {

using Complex = std::complex<double>;

inline constexpr double kStateNormTol = 1e-9;
inline constexpr int kMaxUnitaryQubits = 10;

class QuantumState {
 public:
  /// Renormalizes to machine precision; rejects amplitudes whose norm is
  /// off by more than kStateNormTol or whose length is not a power of two.
  static QuantumState from_amplitudes(Eigen::VectorXcd amps) {
    const Eigen::Index dim = amps.size();
    if (dim < 2 || (dim & (dim - 1)) != 0) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "amplitude count must be a power of two >= 2");
    }
    const double norm = amps.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kStateNormTol) {
      throw Error(ErrorCode::kNotNormalized,
                  "amplitude norm " + std::to_string(norm));
    }
    amps /= norm;
    return QuantumState(std::move(amps));
  }

  static QuantumState from_real(const Eigen::VectorXd& amps) {
    return from_amplitudes(amps.cast<Complex>());
  }

  static QuantumState basis(int qubits, std::uint64_t index) {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << qubits);
    amps[static_cast<Eigen::Index>(index)] = 1.0;
    return QuantumState(std::move(amps));
  }

  int qubits() const noexcept { return qubits_; }
  Eigen::Index dim() const noexcept { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
  Complex operator[](Eigen::Index i) const { return amps_[i]; }

  /// Mutable access for gate kernels; callers own the unitarity guarantee.
  Eigen::VectorXcd& mutable_amplitudes() noexcept { return amps_; }

 private:
  explicit QuantumState(Eigen::VectorXcd amps)
      : amps_(std::move(amps)),
        qubits_(static_cast<int>(std::countr_zero(
            static_cast<std::uint64_t>(amps_.size())))) {}

  Eigen::VectorXcd amps_;
  int qubits_;
};

enum class GateKind { kRX, kRY, kRZ, kCNOT, kRXX, kRYY, kRZZ, kPauliX, kFixed };

inline constexpr bool is_two_qubit(GateKind k) {
  return k == GateKind::kCNOT || k == GateKind::kRXX || k == GateKind::kRYY ||
         k == GateKind::kRZZ;
}

inline constexpr bool is_rotation(GateKind k) {
  return k == GateKind::kRX || k == GateKind::kRY || k == GateKind::kRZ ||
         k == GateKind::kRXX || k == GateKind::kRYY || k == GateKind::kRZZ;
}

inline constexpr std::string_view to_string(GateKind k) {
  switch (k) {
    case GateKind::kRX: return "RX";
    case GateKind::kRY: return "RY";
    case GateKind::kRZ: return "RZ";
    case GateKind::kCNOT: return "CNOT";
    case GateKind::kRXX: return "RXX";
    case GateKind::kRYY: return "RYY";
    case GateKind::kRZZ: return "RZZ";
    case GateKind::kPauliX: return "X";
    case GateKind::kFixed: return "U";
  }
  return "?";
}

/// One gate of a circuit. Rotations carry either a fixed angle or the index
/// of a parameter slot bound at execution time.
struct Gate {
  GateKind kind;
  std::array<int, 2> qubits{0, 0};
  int arity = 1;
  std::optional<double> angle;
  std::optional<std::size_t> slot;
  /// Local 2x2 or 4x4 matrix for GateKind::kFixed.
  Eigen::MatrixXcd matrix;

  static Gate rotation(GateKind kind, int q, std::size_t slot) {
    return Gate{kind, {q, q}, 1, std::nullopt, slot, {}};
  }
  static Gate rotation2(GateKind kind, int a, int b, double fixed_angle) {
    return Gate{kind, {a, b}, 2, fixed_angle, std::nullopt, {}};
  }
  static Gate rotation2_slot(GateKind kind, int a, int b, std::size_t slot) {
    return Gate{kind, {a, b}, 2, std::nullopt, slot, {}};
  }
  static Gate fixed_rotation(GateKind kind, int q, double fixed_angle) {
    return Gate{kind, {q, q}, 1, fixed_angle, std::nullopt, {}};
  }
  static Gate cnot(int control, int target) {
    return Gate{GateKind::kCNOT, {control, target}, 2, std::nullopt, std::nullopt, {}};
  }
  static Gate pauli_x(int q) {
    return Gate{GateKind::kPauliX, {q, q}, 1, std::nullopt, std::nullopt, {}};
  }
  static Gate fixed(Eigen::MatrixXcd m, int a, int b = -1) {
    const int arity = b < 0 ? 1 : 2;
    return Gate{GateKind::kFixed, {a, b < 0 ? a : b}, arity, std::nullopt,
                std::nullopt, std::move(m)};
  }
};

inline void validate_gate(const Gate& g, int qubits) {
  const bool two = g.arity == 2;
  if (two != (is_two_qubit(g.kind) || (g.kind == GateKind::kFixed && two))) {
    throw Error(ErrorCode::kInvalidInput, "gate arity does not match its kind");
  }
  for (int k = 0; k < g.arity; ++k) {
    if (g.qubits[k] < 0 || g.qubits[k] >= qubits) {
      throw Error(ErrorCode::kBadQubitIndex,
                  "qubit " + std::to_string(g.qubits[k]) + " out of range");
    }
  }
  if (two && g.qubits[0] == g.qubits[1]) {
    throw Error(ErrorCode::kBadQubitIndex, "two-qubit gate on a single qubit");
  }
  if (g.kind == GateKind::kFixed) {
    const Eigen::Index d = two ? 4 : 2;
    if (g.matrix.rows() != d || g.matrix.cols() != d) {
      throw Error(ErrorCode::kDimensionMismatch, "fixed gate matrix has wrong size");
    }
  }
}

/// Angle for a gate given the bound parameter vector.
inline double resolve_angle(const Gate& g, std::span<const double> params) {
  if (g.angle) return *g.angle;
  if (g.slot) {
    if (*g.slot >= params.size()) {
      throw Error(ErrorCode::kLengthMismatch, "parameter slot out of range");
    }
    return params[*g.slot];
  }
  return 0.0;
}

/// Local matrix of a gate: 2x2, or 4x4 on (qubits[0], qubits[1]) with
/// qubits[0] as the more significant local bit.
inline Eigen::MatrixXcd local_matrix(const Gate& g, double theta) {
  const Complex I(0.0, 1.0);
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  Eigen::MatrixXcd m;
  switch (g.kind) {
    case GateKind::kRX:
      m.resize(2, 2);
      m << c, -I * s, -I * s, c;
      break;
    case GateKind::kRY:
      m.resize(2, 2);
      m << c, -s, s, c;
      break;
    case GateKind::kRZ:
      m.resize(2, 2);
      m << std::exp(-I * theta / 2.0), 0.0, 0.0, std::exp(I * theta / 2.0);
      break;
    case GateKind::kPauliX:
      m.resize(2, 2);
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case GateKind::kCNOT:
      m = Eigen::MatrixXcd::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      break;
    case GateKind::kRXX:
    case GateKind::kRYY:
    case GateKind::kRZZ: {
      Eigen::Matrix2cd p1;
      if (g.kind == GateKind::kRXX) p1 << 0.0, 1.0, 1.0, 0.0;
      if (g.kind == GateKind::kRYY) p1 << 0.0, -I, I, 0.0;
      if (g.kind == GateKind::kRZZ) p1 << 1.0, 0.0, 0.0, -1.0;
      Eigen::MatrixXcd pp(4, 4);
      for (int r = 0; r < 4; ++r)
        for (int col = 0; col < 4; ++col)
          pp(r, col) = p1(r >> 1, col >> 1) * p1(r & 1, col & 1);
      m = c * Eigen::MatrixXcd::Identity(4, 4) - I * s * pp;
      break;
    }
    case GateKind::kFixed:
      m = g.matrix;
      break;
  }
  return m;
}

namespace detail {

inline std::uint64_t bit_of(int qubit, int qubits) {
  return std::uint64_t{1} << (qubits - 1 - qubit);
}

inline void apply_local_1q(Eigen::VectorXcd& psi, int qubits, int q,
                           const Eigen::MatrixXcd& m) {
  const std::uint64_t bit = bit_of(q, qubits);
  const std::uint64_t dim = static_cast<std::uint64_t>(psi.size());
  const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const Complex a = psi[i], b = psi[i | bit];
    psi[i] = m00 * a + m01 * b;
    psi[i | bit] = m10 * a + m11 * b;
  }
}

inline void apply_local_2q(Eigen::VectorXcd& psi, int qubits, int qa, int qb,
                           const Eigen::MatrixXcd& m) {
  const std::uint64_t ba = bit_of(qa, qubits), bb = bit_of(qb, qubits);
  const std::uint64_t dim = static_cast<std::uint64_t>(psi.size());
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & (ba | bb)) continue;
    const std::uint64_t idx[4] = {i, i | bb, i | ba, i | ba | bb};
    Complex in[4], out[4];
    for (int k = 0; k < 4; ++k) in[k] = psi[idx[k]];
    for (int r = 0; r < 4; ++r) {
      out[r] = m(r, 0) * in[0] + m(r, 1) * in[1] + m(r, 2) * in[2] + m(r, 3) * in[3];
    }
    for (int k = 0; k < 4; ++k) psi[idx[k]] = out[k];
  }
}

inline void apply_cnot(Eigen::VectorXcd& psi, int qubits, int control, int target) {
  const std::uint64_t bc = bit_of(control, qubits), bt = bit_of(target, qubits);
  const std::uint64_t dim = static_cast<std::uint64_t>(psi.size());
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & bc) && !(i & bt)) std::swap(psi[i], psi[i | bt]);
  }
}

}  // namespace detail

/// In-place gate application on a raw amplitude buffer.
inline void apply_gate_inplace(Eigen::VectorXcd& psi, int qubits, const Gate& g,
                               double theta) {
  validate_gate(g, qubits);
  if (g.kind == GateKind::kCNOT) {
    detail::apply_cnot(psi, qubits, g.qubits[0], g.qubits[1]);
    return;
  }
  const Eigen::MatrixXcd m = local_matrix(g, theta);
  if (g.arity == 1) {
    detail::apply_local_1q(psi, qubits, g.qubits[0], m);
  } else {
    detail::apply_local_2q(psi, qubits, g.qubits[0], g.qubits[1], m);
  }
}

inline QuantumState apply_gate(const QuantumState& state, const Gate& g,
                               double bound_angle = 0.0) {
  QuantumState out = state;
  apply_gate_inplace(out.mutable_amplitudes(), state.qubits(), g,
                     g.angle ? *g.angle : bound_angle);
  return out;
}

/// An ordered gate list over a fixed register; `param_count` slots.
struct Circuit {
  int qubits = 0;
  std::size_t param_count = 0;
  std::vector<Gate> gates;
};

inline QuantumState run_circuit(const Circuit& c, std::span<const double> params,
                                const QuantumState& input) {
  if (input.qubits() != c.qubits) {
    throw Error(ErrorCode::kLengthMismatch, "state and circuit qubit counts differ");
  }
  if (params.size() != c.param_count) {
    throw Error(ErrorCode::kLengthMismatch, "wrong number of parameters");
  }
  QuantumState out = input;
  for (const auto& g : c.gates) {
    apply_gate_inplace(out.mutable_amplitudes(), c.qubits, g, resolve_angle(g, params));
  }
  return out;
}

/// The gate as a sparse operator on the full register, built entry by entry
/// from its local matrix.
inline Eigen::SparseMatrix<Complex> full_operator(const Gate& g, double theta,
                                                  int qubits) {
  validate_gate(g, qubits);
  const Eigen::MatrixXcd m = local_matrix(g, theta);
  const std::uint64_t dim = std::uint64_t{1} << qubits;
  std::vector<std::uint64_t> bits;
  for (int k = 0; k < g.arity; ++k) bits.push_back(detail::bit_of(g.qubits[k], qubits));
  std::uint64_t support = 0;
  for (auto b : bits) support |= b;
  auto local_index = [&](std::uint64_t i) {
    std::uint64_t li = 0;
    for (auto b : bits) li = (li << 1) | ((i & b) ? 1 : 0);
    return li;
  };
  std::vector<Eigen::Triplet<Complex>> entries;
  for (std::uint64_t row = 0; row < dim; ++row) {
    const std::uint64_t rest = row & ~support;
    const std::uint64_t lr = local_index(row);
    for (std::uint64_t lc = 0; lc < (std::uint64_t{1} << g.arity); ++lc) {
      std::uint64_t col = rest;
      for (std::size_t k = 0; k < bits.size(); ++k) {
        if ((lc >> (bits.size() - 1 - k)) & 1) col |= bits[k];
      }
      const Complex v = m(static_cast<Eigen::Index>(lr), static_cast<Eigen::Index>(lc));
      if (v != Complex(0.0)) {
        entries.emplace_back(static_cast<int>(row), static_cast<int>(col), v);
      }
    }
  }
  Eigen::SparseMatrix<Complex> op(static_cast<Eigen::Index>(dim),
                                  static_cast<Eigen::Index>(dim));
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

/// Product of the full gate operators in application order.
inline Eigen::MatrixXcd circuit_unitary(const Circuit& c,
                                        std::span<const double> params) {
  if (c.qubits > kMaxUnitaryQubits) {
    throw Error(ErrorCode::kTooManyQubits, "unitary too large to materialize");
  }
  if (params.size() != c.param_count) {
    throw Error(ErrorCode::kLengthMismatch, "wrong number of parameters");
  }
  const Eigen::Index dim = Eigen::Index{1} << c.qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& g : c.gates) {
    u = full_operator(g, resolve_angle(g, params), c.qubits) * u;
  }
  return u;
}

inline Eigen::MatrixXcd gate_unitary(const Gate& g, double theta, int qubits) {
  return Eigen::MatrixXcd(full_operator(g, theta, qubits));
}

/// Tensor product of single-qubit Paulis, one letter per qubit.
class PauliString {
 public:
  explicit PauliString(std::string letters) : letters_(std::move(letters)) {
    if (letters_.empty()) throw Error(ErrorCode::kInvalidInput, "empty Pauli string");
    for (char ch : letters_) {
      if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z') {
        throw Error(ErrorCode::kInvalidInput,
                    std::string("bad Pauli letter '") + ch + "'");
      }
    }
  }

  /// `letter` on `qubit`, identity elsewhere.
  static PauliString single(int qubits, int qubit, char letter) {
    std::string s(static_cast<std::size_t>(qubits), 'I');
    s[static_cast<std::size_t>(qubit)] = letter;
    return PauliString(std::move(s));
  }

  int size() const noexcept { return static_cast<int>(letters_.size()); }
  const std::string& letters() const noexcept { return letters_; }

 private:
  std::string letters_;
};

/// <psi| P |psi>.
inline double expectation(const QuantumState& state, const PauliString& pauli) {
  const int q = state.qubits();
  if (pauli.size() != q) {
    throw Error(ErrorCode::kLengthMismatch, "Pauli string length != qubit count");
  }
  std::uint64_t flip = 0, zmask = 0, ymask = 0;
  int n_y = 0;
  for (int k = 0; k < q; ++k) {
    const std::uint64_t b = detail::bit_of(k, q);
    const char ch = pauli.letters()[static_cast<std::size_t>(k)];
    if (ch == 'X' || ch == 'Y') flip |= b;
    if (ch == 'Z') zmask |= b;
    if (ch == 'Y') { ymask |= b; ++n_y; }
  }
  // P|i> = phase(i) |i ^ flip>, phase(i) = i^{n_y} (-1)^{popcount(i & (zmask|ymask))}.
  const Complex i_pow[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  const Complex base = i_pow[n_y % 4];
  const auto& psi = state.amplitudes();
  Complex acc = 0.0;
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(psi.size()); ++i) {
    const int parity = std::popcount(i & (zmask | ymask)) & 1;
    const Complex phase = parity ? -base : base;
    acc += std::conj(psi[static_cast<Eigen::Index>(i ^ flip)]) * phase *
           psi[static_cast<Eigen::Index>(i)];
  }
  if (std::abs(acc.imag()) > 1e-10) {
    throw Error(ErrorCode::kInvalidInput, "expectation has imaginary residue");
  }
  return acc.real();
}

}  // namespace revmap
