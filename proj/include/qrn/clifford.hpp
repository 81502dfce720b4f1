// Copyright 2026 The qrn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrn/pauli.hpp"

namespace qrn {

enum class GateKind { H, S, CNOT, CZ };
enum class MeasureBasis { None, X, Z };

struct Gate {
    GateKind kind;
    std::size_t a;
    std::size_t b = 0;  ///< target for CNOT, partner for CZ; unused otherwise

    bool two_qubit() const noexcept { return kind == GateKind::CNOT || kind == GateKind::CZ; }

    static Gate h(std::size_t q) { return {GateKind::H, q}; }
    static Gate s(std::size_t q) { return {GateKind::S, q}; }
    static Gate cnot(std::size_t control, std::size_t target) { return {GateKind::CNOT, control, target}; }
    static Gate cz(std::size_t a, std::size_t b) { return {GateKind::CZ, a, b}; }

    friend bool operator==(const Gate&, const Gate&) = default;
};

/// Heisenberg update P -> G P G† of the symplectic part (signs dropped).
inline void conjugate_in_place(const Gate& g, PauliOperator& p) {
    const std::size_t a = g.a, b = g.b;
    switch (g.kind) {
        case GateKind::H: p.set(a, p.z(a), p.x(a)); break;
        case GateKind::S: p.set(a, p.x(a), p.z(a) != p.x(a)); break;
        case GateKind::CNOT: {
            const bool xa = p.x(a), za = p.z(a), xb = p.x(b), zb = p.z(b);
            p.set(a, xa, za != zb);
            p.set(b, xb != xa, zb);
            break;
        }
        case GateKind::CZ: {
            const bool xa = p.x(a), za = p.z(a), xb = p.x(b), zb = p.z(b);
            p.set(a, xa, za != xb);
            p.set(b, xb, zb != xa);
            break;
        }
    }
}

/// Gate list followed by a single measurement layer.
class CliffordCircuit {
  public:
    explicit CliffordCircuit(std::size_t n) : n_(n), measure_(n, MeasureBasis::None) {
        if (n > PauliOperator::kMaxQubits) throw std::invalid_argument("too many qubits");
    }

    CliffordCircuit& add(const Gate& g) {
        if (g.a >= n_ || (g.two_qubit() && (g.b >= n_ || g.b == g.a))) {
            throw std::invalid_argument("gate index out of range");
        }
        gates_.push_back(g);
        return *this;
    }

    void set_measurement(std::size_t q, MeasureBasis basis) { measure_.at(q) = basis; }

    std::size_t size() const noexcept { return n_; }
    const std::vector<Gate>& gates() const noexcept { return gates_; }
    const std::vector<MeasureBasis>& measurements() const noexcept { return measure_; }

    std::size_t two_qubit_gate_count() const {
        std::size_t c = 0;
        for (const auto& g : gates_) c += g.two_qubit() ? 1 : 0;
        return c;
    }

    std::string str() const {
        static constexpr const char* kNames[] = {"H", "S", "CNOT", "CZ"};
        std::string out;
        for (const auto& g : gates_) {
            out += kNames[static_cast<int>(g.kind)];
            out += ' ' + std::to_string(g.a);
            if (g.two_qubit()) out += ' ' + std::to_string(g.b);
            out += '\n';
        }
        for (std::size_t q = 0; q < n_; ++q) {
            if (measure_[q] == MeasureBasis::X) out += "MX " + std::to_string(q) + '\n';
            if (measure_[q] == MeasureBasis::Z) out += "MZ " + std::to_string(q) + '\n';
        }
        return out;
    }

  private:
    std::size_t n_;
    std::vector<Gate> gates_;
    std::vector<MeasureBasis> measure_;
};

/// U P U† for the circuit unitary U, gate by gate.
inline PauliOperator conjugate_through(const CliffordCircuit& c, PauliOperator p) {
    if (p.size() != c.size()) throw std::invalid_argument("Pauli size does not match circuit");
    for (const auto& g : c.gates()) conjugate_in_place(g, p);
    return p;
}

}  // namespace qrn
