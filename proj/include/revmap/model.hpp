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

// The two single-repetition ansatz circuits and the classifier readout.
//
// Hardware-efficient (q qubits, 4q parameters):
//   RY(t[2i]) RZ(t[2i+1]) on every qubit i,
//   CNOT(i -> i+1) for i = q-2 down to 0,
//   RY(t[2q+2i]) RZ(t[2q+2i+1]) on every qubit i,
//   measure Z on every qubit.
//
// Equivariant under flipping the leading h = q/2 qubits:
//   RX(t[2i]) RX(t[2i+1]) on i < h, RY RZ on i >= h,
//   CNOT(i -> i+1) for i = q-2 down to h,
//   then fixed pi/2 rotations on (i, i+1) for i = h-1 down to 0, cycling
//   through RXX, RYY, RZZ (for q = 8: RXX(3,4) RYY(2,3) RZZ(1,2) RXX(0,1)),
//   the same rotation layer again with slots 2q..4q-1,
//   measure X on i < h and Z on i >= h.
// Every gate and every observable commutes with X on each of the leading h
// qubits.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revmap/error.hpp"
#include "revmap/simulator.hpp"

namespace revmap {

enum class AnsatzKind { kHardwareEfficient, kEquivariant };

inline constexpr std::string_view to_string(AnsatzKind k) {
  return k == AnsatzKind::kHardwareEfficient ? "hardware_efficient" : "equivariant";
}

inline AnsatzKind parse_ansatz_kind(std::string_view s) {
  if (s == "hardware_efficient" || s == "non_equivariant") {
    return AnsatzKind::kHardwareEfficient;
  }
  if (s == "equivariant") return AnsatzKind::kEquivariant;
  throw Error(ErrorCode::kInvalidInput, "unknown ansatz kind '" + std::string(s) + "'");
}

struct AnsatzSpec {
  AnsatzKind kind;
  Circuit circuit;
  /// Measured single-qubit Pauli per qubit ('X' or 'Z').
  std::string measurement;

  int qubits() const noexcept { return circuit.qubits; }
  std::size_t param_count() const noexcept { return circuit.param_count; }
};

inline constexpr double kProbabilityClamp = 1e-7;

struct ModelOutput {
  std::vector<double> expectations;
  double probability;
  int predicted_label;
};

namespace detail {

inline void rotation_layer(Circuit& c, AnsatzKind kind, std::size_t first_slot) {
  const int h = c.qubits / 2;
  for (int i = 0; i < c.qubits; ++i) {
    const std::size_t s = first_slot + 2 * static_cast<std::size_t>(i);
    if (kind == AnsatzKind::kEquivariant && i < h) {
      c.gates.push_back(Gate::rotation(GateKind::kRX, i, s));
      c.gates.push_back(Gate::rotation(GateKind::kRX, i, s + 1));
    } else {
      c.gates.push_back(Gate::rotation(GateKind::kRY, i, s));
      c.gates.push_back(Gate::rotation(GateKind::kRZ, i, s + 1));
    }
  }
}

}  // namespace detail

inline AnsatzSpec build_ansatz(AnsatzKind kind, int q = 8) {
  if (q < 2 || q > 20) throw Error(ErrorCode::kInvalidInput, "qubit count out of range");
  if (kind == AnsatzKind::kEquivariant && (q % 2 != 0 || q < 4)) {
    throw Error(ErrorCode::kInvalidInput, "equivariant ansatz needs an even q >= 4");
  }
  AnsatzSpec spec{kind, Circuit{q, 4 * static_cast<std::size_t>(q), {}}, {}};
  Circuit& c = spec.circuit;
  const int h = q / 2;

  detail::rotation_layer(c, kind, 0);
  if (kind == AnsatzKind::kHardwareEfficient) {
    for (int i = q - 2; i >= 0; --i) c.gates.push_back(Gate::cnot(i, i + 1));
    spec.measurement = std::string(static_cast<std::size_t>(q), 'Z');
  } else {
    for (int i = q - 2; i >= h; --i) c.gates.push_back(Gate::cnot(i, i + 1));
    constexpr GateKind cycle[3] = {GateKind::kRXX, GateKind::kRYY, GateKind::kRZZ};
    for (int i = h - 1, k = 0; i >= 0; --i, ++k) {
      c.gates.push_back(
          Gate::rotation2(cycle[k % 3], i, i + 1, std::numbers::pi / 2.0));
    }
    spec.measurement = std::string(static_cast<std::size_t>(h), 'X') +
                       std::string(static_cast<std::size_t>(q - h), 'Z');
  }
  detail::rotation_layer(c, kind, 2 * static_cast<std::size_t>(q));
  return spec;
}

/// Per-qubit expectation of the measured Pauli.
inline std::vector<double> measure(const AnsatzSpec& spec, const QuantumState& state) {
  std::vector<double> out;
  out.reserve(spec.measurement.size());
  for (int i = 0; i < spec.qubits(); ++i) {
    out.push_back(expectation(
        state, PauliString::single(spec.qubits(), i,
                                   spec.measurement[static_cast<std::size_t>(i)])));
  }
  return out;
}

/// clamp((1 + mean(expectations)) / 2, eps, 1 - eps).
inline double readout_probability(std::span<const double> expectations) {
  double mean = 0.0;
  for (double e : expectations) mean += e;
  mean /= static_cast<double>(expectations.size());
  return std::clamp((1.0 + mean) / 2.0, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

inline ModelOutput forward(const AnsatzSpec& spec, std::span<const double> params,
                           const QuantumState& input) {
  for (double p : params) {
    if (!std::isfinite(p)) throw Error(ErrorCode::kInvalidInput, "non-finite parameter");
  }
  const QuantumState out = run_circuit(spec.circuit, params, input);
  ModelOutput result;
  result.expectations = measure(spec, out);
  result.probability = readout_probability(result.expectations);
  result.predicted_label = result.probability >= 0.5 ? 1 : 0;
  return result;
}

}  // namespace revmap
