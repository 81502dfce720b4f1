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

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qrn {

/// Pauli operator on up to 64 qubits in symplectic form. Qubit i carries
/// X^x_i Z^z_i with Y identified as (x, z) = (1, 1). Global phase is not
/// stored; products report it separately.
class PauliOperator {
  public:
    static constexpr std::size_t kMaxQubits = 64;

    PauliOperator() = default;

    explicit PauliOperator(std::size_t n, std::uint64_t x = 0, std::uint64_t z = 0) : n_(n), x_(x), z_(z) {
        if (n > kMaxQubits) throw std::invalid_argument("PauliOperator supports at most 64 qubits");
        const std::uint64_t m = mask();
        if ((x & ~m) || (z & ~m)) throw std::invalid_argument("Pauli bits outside the qubit range");
    }

    /// Parses a string over {I, X, Y, Z} (also accepts '_' for identity).
    static PauliOperator from_string(std::string_view s) {
        PauliOperator p(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            switch (s[i]) {
                case 'I':
                case '_': break;
                case 'X': p.x_ |= bit(i); break;
                case 'Y': p.x_ |= bit(i); p.z_ |= bit(i); break;
                case 'Z': p.z_ |= bit(i); break;
                default: throw std::invalid_argument("invalid Pauli character '" + std::string(1, s[i]) + "'");
            }
        }
        return p;
    }

    static PauliOperator single(std::size_t n, std::size_t qubit, char kind) {
        std::string s(n, 'I');
        s.at(qubit) = kind;
        return from_string(s);
    }

    std::size_t size() const noexcept { return n_; }
    std::uint64_t x_bits() const noexcept { return x_; }
    std::uint64_t z_bits() const noexcept { return z_; }

    bool x(std::size_t i) const noexcept { return (x_ >> i) & 1U; }
    bool z(std::size_t i) const noexcept { return (z_ >> i) & 1U; }

    void set(std::size_t i, bool xb, bool zb) noexcept {
        x_ = (x_ & ~bit(i)) | (xb ? bit(i) : 0);
        z_ = (z_ & ~bit(i)) | (zb ? bit(i) : 0);
    }

    /// Single-qubit factor as one of 'I', 'X', 'Y', 'Z'.
    char at(std::size_t i) const noexcept { return "IXZY"[x(i) + 2 * z(i)]; }

    std::size_t weight() const noexcept { return static_cast<std::size_t>(std::popcount(x_ | z_)); }
    bool is_identity() const noexcept { return (x_ | z_) == 0; }

    bool commutes_with(const PauliOperator& o) const {
        check_size(o);
        return (std::popcount((x_ & o.z_) ^ (z_ & o.x_)) & 1) == 0;
    }

    /// Product modulo phase (the symplectic sum).
    PauliOperator& operator*=(const PauliOperator& o) {
        check_size(o);
        x_ ^= o.x_;
        z_ ^= o.z_;
        return *this;
    }
    friend PauliOperator operator*(PauliOperator a, const PauliOperator& b) { return a *= b; }

    friend bool operator==(const PauliOperator&, const PauliOperator&) = default;

    std::string str() const {
        std::string s(n_, 'I');
        for (std::size_t i = 0; i < n_; ++i) s[i] = at(i);
        return s;
    }

    void check_size(const PauliOperator& o) const {
        if (o.n_ != n_) throw std::invalid_argument("Pauli size mismatch");
    }

  private:
    static constexpr std::uint64_t bit(std::size_t i) noexcept { return std::uint64_t{1} << i; }
    std::uint64_t mask() const noexcept { return n_ == 64 ? ~std::uint64_t{0} : (bit(n_) - 1); }

    std::size_t n_ = 0;
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
};

/// Product a·b = i^phase · c, with Paulis taken as the Hermitian matrices
/// I, X, Y, Z (so Y = iXZ).
struct PauliProduct {
    PauliOperator product;
    int phase = 0;  ///< exponent of i, in [0, 4)
};

inline PauliProduct pauli_mul(const PauliOperator& a, const PauliOperator& b) {
    a.check_size(b);
    int e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int x1 = a.x(i), z1 = a.z(i), x2 = b.x(i), z2 = b.z(i);
        if (x1 && z1) {
            e += z2 - x2;
        } else if (x1) {
            e += z2 * (2 * x2 - 1);
        } else if (z1) {
            e += x2 * (1 - 2 * z2);
        }
    }
    return {a * b, ((e % 4) + 4) % 4};
}

}  // namespace qrn
