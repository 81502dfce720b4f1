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
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrn/clifford.hpp"
#include "qrn/pauli.hpp"

namespace qrn {

/// Syndrome bit string; bit i is the outcome of generator i.
using Syndrome = std::uint64_t;

enum class Logical { I, X, Y, Z };

inline char to_char(Logical l) { return "IXYZ"[static_cast<int>(l)]; }

namespace detail {

/// Pauli as a 2n-bit vector (x in the low half) for GF(2) rank checks.
inline std::uint64_t packed(const PauliOperator& p) { return p.x_bits() | (p.z_bits() << p.size()); }

inline std::size_t gf2_rank(std::vector<std::uint64_t> rows) {
    std::size_t rank = 0;
    for (int bit = 63; bit >= 0; --bit) {
        const std::uint64_t m = std::uint64_t{1} << bit;
        std::size_t pivot = rank;
        while (pivot < rows.size() && !(rows[pivot] & m)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && (rows[r] & m)) rows[r] ^= rows[rank];
        }
        ++rank;
    }
    return rank;
}

/// Calls f(p) for every n-qubit Pauli in order of increasing weight; stops
/// early when f returns true.
template <class F>
bool for_each_pauli_by_weight(std::size_t n, F&& f) {
    const std::uint64_t total = std::uint64_t{1} << (2 * n);
    for (std::size_t w = 0; w <= n; ++w) {
        for (std::uint64_t v = 0; v < total; ++v) {
            const std::uint64_t x = v & ((std::uint64_t{1} << n) - 1);
            const std::uint64_t z = v >> n;
            if (static_cast<std::size_t>(std::popcount(x | z)) != w) continue;
            if (f(PauliOperator(n, x, z))) return true;
        }
    }
    return false;
}

}  // namespace detail

/// [[n,1,d]] stabilizer code with n-1 generators and one logical qubit.
class StabilizerCode {
  public:
    static constexpr std::size_t kMaxQubits = 10;

    StabilizerCode(std::vector<PauliOperator> generators, PauliOperator logical_x, PauliOperator logical_z,
                   std::string name = {})
        : n_(logical_x.size()),
          generators_(std::move(generators)),
          logical_x_(std::move(logical_x)),
          logical_z_(std::move(logical_z)),
          name_(std::move(name)) {
        validate();
        distance_ = compute_distance();
        build_correction_table();
    }

    /// The perfect five-qubit code, generated by XZZXI and its cyclic shifts.
    static StabilizerCode five_qubit() {
        return StabilizerCode({PauliOperator::from_string("XZZXI"), PauliOperator::from_string("IXZZX"),
                               PauliOperator::from_string("XIXZZ"), PauliOperator::from_string("ZXIXZ")},
                              PauliOperator::from_string("XXXXX"), PauliOperator::from_string("ZZZZZ"), "513");
    }

    /// Four-qubit error-detecting code: the [[4,2,2]] code with its second
    /// logical qubit fixed by promoting ZZII to a stabilizer.
    static StabilizerCode four_qubit() {
        return StabilizerCode({PauliOperator::from_string("XXXX"), PauliOperator::from_string("ZZZZ"),
                               PauliOperator::from_string("ZZII")},
                              PauliOperator::from_string("XXII"), PauliOperator::from_string("ZIZI"), "412");
    }

    /// Looks up "513" / "412" (also "[[5,1,3]]" / "[[4,1,2]]").
    static StabilizerCode by_name(std::string_view name) {
        if (name == "513" || name == "[[5,1,3]]") return five_qubit();
        if (name == "412" || name == "[[4,1,2]]") return four_qubit();
        throw std::invalid_argument("unknown code '" + std::string(name) + "'");
    }

    /// Plain-text form: one generator per line over {I,X,Y,Z}; optional lines
    /// "X_L <pauli>" and "Z_L <pauli>" give the logicals (searched for when
    /// absent); '#' starts a comment.
    static StabilizerCode from_text(std::string_view text, std::string name = {}) {
        std::vector<PauliOperator> gens;
        std::optional<PauliOperator> lx, lz;
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream words(line);
            std::string first, second, extra;
            if (!(words >> first)) continue;
            if (first == "X_L" || first == "Z_L") {
                if (!(words >> second)) throw std::invalid_argument("missing operator after " + first);
                (first == "X_L" ? lx : lz) = PauliOperator::from_string(second);
            } else {
                gens.push_back(PauliOperator::from_string(first));
            }
            if (words >> extra) throw std::invalid_argument("unexpected token '" + extra + "' in code text");
        }
        if (gens.empty()) throw std::invalid_argument("code text has no generators");
        if (!lx || !lz) {
            auto [fx, fz] = find_logicals(gens);
            if (!lx) lx = fx;
            if (!lz) lz = fz;
        }
        return StabilizerCode(std::move(gens), *lx, *lz, std::move(name));
    }

    std::string to_text() const {
        std::string out;
        for (const auto& g : generators_) out += g.str() + '\n';
        out += "X_L " + logical_x_.str() + '\n';
        out += "Z_L " + logical_z_.str() + '\n';
        return out;
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t distance() const noexcept { return distance_; }
    const std::string& name() const noexcept { return name_; }
    const std::vector<PauliOperator>& generators() const noexcept { return generators_; }
    const PauliOperator& logical_x() const noexcept { return logical_x_; }
    const PauliOperator& logical_z() const noexcept { return logical_z_; }

    /// Minimum-weight Pauli with the given syndrome (first in a fixed
    /// enumeration order when several tie).
    const PauliOperator& min_weight_correction(Syndrome s) const { return corrections_.at(s); }

  private:
    void validate() const {
        if (n_ < 2 || n_ > kMaxQubits) throw std::invalid_argument("code block size must lie in [2, 10]");
        if (generators_.size() != n_ - 1) throw std::invalid_argument("a k=1 code needs n-1 generators");
        std::vector<std::uint64_t> rows;
        for (const auto& g : generators_) {
            if (g.size() != n_) throw std::invalid_argument("generator size mismatch");
            for (const auto& h : generators_) {
                if (!g.commutes_with(h)) throw std::invalid_argument("generators must commute");
            }
            if (!g.commutes_with(logical_x_) || !g.commutes_with(logical_z_)) {
                throw std::invalid_argument("logicals must commute with the generators");
            }
            rows.push_back(detail::packed(g));
        }
        if (logical_z_.size() != n_) throw std::invalid_argument("logical size mismatch");
        if (logical_x_.commutes_with(logical_z_)) throw std::invalid_argument("logical X and Z must anticommute");
        if (detail::gf2_rank(rows) != n_ - 1) throw std::invalid_argument("generators are not independent");
    }

    std::size_t compute_distance() const {
        std::size_t d = 0;
        detail::for_each_pauli_by_weight(n_, [&](const PauliOperator& p) {
            if (p.is_identity()) return false;
            for (const auto& g : generators_) {
                if (!g.commutes_with(p)) return false;
            }
            if (p.commutes_with(logical_x_) && p.commutes_with(logical_z_)) return false;
            d = p.weight();
            return true;
        });
        return d;
    }

    void build_correction_table() {
        const std::size_t m = generators_.size();
        corrections_.assign(std::size_t{1} << m, PauliOperator(n_));
        std::vector<bool> seen(corrections_.size(), false);
        std::size_t filled = 0;
        detail::for_each_pauli_by_weight(n_, [&](const PauliOperator& p) {
            Syndrome s = 0;
            for (std::size_t i = 0; i < m; ++i) s |= Syndrome{!generators_[i].commutes_with(p)} << i;
            if (!seen[s]) {
                seen[s] = true;
                corrections_[s] = p;
                ++filled;
            }
            return filled == corrections_.size();
        });
    }

    static std::pair<PauliOperator, PauliOperator> find_logicals(const std::vector<PauliOperator>& gens) {
        const std::size_t n = gens.front().size();
        if (n > kMaxQubits) throw std::invalid_argument("code block size must lie in [2, 10]");
        std::vector<std::uint64_t> base;
        for (const auto& g : gens) base.push_back(detail::packed(g));
        const std::size_t r0 = detail::gf2_rank(base);
        std::vector<PauliOperator> normalizer;
        detail::for_each_pauli_by_weight(n, [&](const PauliOperator& p) {
            for (const auto& g : gens) {
                if (!g.commutes_with(p)) return false;
            }
            auto rows = base;
            rows.push_back(detail::packed(p));
            if (detail::gf2_rank(rows) > r0) normalizer.push_back(p);
            return false;
        });
        for (const auto& a : normalizer) {
            for (const auto& b : normalizer) {
                if (!a.commutes_with(b)) return {a, b};
            }
        }
        throw std::invalid_argument("could not find an anticommuting logical pair");
    }

    std::size_t n_;
    std::vector<PauliOperator> generators_;
    PauliOperator logical_x_;
    PauliOperator logical_z_;
    std::string name_;
    std::size_t distance_ = 0;
    std::vector<PauliOperator> corrections_;
};

inline Syndrome syndrome_of(const StabilizerCode& code, const PauliOperator& e) {
    if (e.size() != code.n()) throw std::invalid_argument("error size does not match code");
    Syndrome s = 0;
    const auto& gens = code.generators();
    for (std::size_t i = 0; i < gens.size(); ++i) s |= Syndrome{!gens[i].commutes_with(e)} << i;
    return s;
}

inline std::string syndrome_string(Syndrome s, std::size_t bits) {
    std::string out(bits, '0');
    for (std::size_t i = 0; i < bits; ++i) out[i] = ((s >> i) & 1U) ? '1' : '0';
    return out;
}

/// Logical class of a Pauli by its commutation with the logical operators:
/// anticommuting with Z_L only is X, with X_L only is Z, with both is Y.
/// The class is linear in the Pauli.
inline Logical logical_class(const StabilizerCode& code, const PauliOperator& e) {
    const bool flips_z = !e.commutes_with(code.logical_z());
    const bool flips_x = !e.commutes_with(code.logical_x());
    if (flips_z && flips_x) return Logical::Y;
    if (flips_z) return Logical::X;
    if (flips_x) return Logical::Z;
    return Logical::I;
}

/// Action of `e` on the encoded qubit; nullopt ("detected") when the syndrome
/// is nonzero.
inline std::optional<Logical> logical_action(const StabilizerCode& code, const PauliOperator& e) {
    if (syndrome_of(code, e) != 0) return std::nullopt;
    return logical_class(code, e);
}

/// Action of `e` after applying `correction`; nullopt if the pair does not
/// return to the code space.
inline std::optional<Logical> logical_action(const StabilizerCode& code, const PauliOperator& e,
                                             const PauliOperator& correction) {
    return logical_action(code, e * correction);
}

inline Logical compose(Logical a, Logical b) {
    // I=0, X=1, Y=2, Z=3 -> symplectic (x, z) and back.
    static constexpr int kX[] = {0, 1, 1, 0};
    static constexpr int kZ[] = {0, 0, 1, 1};
    const int x = kX[static_cast<int>(a)] ^ kX[static_cast<int>(b)];
    const int z = kZ[static_cast<int>(a)] ^ kZ[static_cast<int>(b)];
    return x ? (z ? Logical::Y : Logical::X) : (z ? Logical::Z : Logical::I);
}

/// Clifford circuit U with U S_j U† = Z_j for each generator j (qubits
/// 0..n-2, measured in Z) and U X_L U† = X, U Z_L U† = Z on qubit n-1, all
/// up to sign. Run at both ends of n shared pairs, the XOR of the two nodes'
/// outcomes is the code syndrome of the relative Pauli error and the
/// unmeasured pair carries its logical class.
inline CliffordCircuit purification_circuit(const StabilizerCode& code) {
    const std::size_t n = code.n();
    const std::size_t m = code.generators().size();

    // Destabilizers: D_j anticommutes with S_j only and commutes with the
    // logicals, then symplectic Gram-Schmidt so the D_j commute pairwise.
    std::vector<PauliOperator> destab(m, PauliOperator(n));
    std::vector<bool> found(m, false);
    detail::for_each_pauli_by_weight(n, [&](const PauliOperator& p) {
        if (!p.commutes_with(code.logical_x()) || !p.commutes_with(code.logical_z())) return false;
        const Syndrome s = syndrome_of(code, p);
        if (std::popcount(s) != 1) return false;
        const auto j = static_cast<std::size_t>(std::countr_zero(s));
        if (!found[j]) {
            found[j] = true;
            destab[j] = p;
        }
        for (bool f : found) {
            if (!f) return false;
        }
        return true;
    });
    for (std::size_t j = 0; j < m; ++j) {
        if (!found[j]) throw std::logic_error("no destabilizer for generator " + std::to_string(j));
        for (std::size_t k = j + 1; k < m; ++k) {
            if (!destab[j].commutes_with(destab[k])) destab[k] *= code.generators()[j];
        }
    }

    // Pairs (destabilizer, stabilizer) reduced in turn to (X_j, Z_j).
    std::vector<PauliOperator> zs(code.generators());
    std::vector<PauliOperator> xs(destab);
    zs.push_back(code.logical_z());
    xs.push_back(code.logical_x());

    CliffordCircuit circuit(n);
    auto apply = [&](const Gate& g) {
        circuit.add(g);
        for (auto& p : zs) conjugate_in_place(g, p);
        for (auto& p : xs) conjugate_in_place(g, p);
    };

    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j; k < n; ++k) {
            const char c = zs[j].at(k);
            if (c == 'Y') apply(Gate::s(k));
            if (c == 'X' || c == 'Y') apply(Gate::h(k));
        }
        if (!zs[j].z(j)) {
            std::size_t k = j + 1;
            while (k < n && !zs[j].z(k)) ++k;
            if (k == n) throw std::logic_error("stabilizer image has no support");
            apply(Gate::cnot(j, k));
        }
        for (std::size_t k = j + 1; k < n; ++k) {
            if (zs[j].z(k)) apply(Gate::cnot(k, j));
        }
        if (xs[j].at(j) == 'Y') apply(Gate::s(j));
        for (std::size_t k = j + 1; k < n; ++k) {
            const char c = xs[j].at(k);
            if (c == 'Z') apply(Gate::cz(j, k));
            if (c == 'Y') apply(Gate::s(k));
            if (c == 'X' || c == 'Y') apply(Gate::cnot(j, k));
        }
        if (zs[j] != PauliOperator::single(n, j, 'Z') || xs[j] != PauliOperator::single(n, j, 'X')) {
            throw std::logic_error("decoder synthesis failed to reduce pair " + std::to_string(j));
        }
    }
    for (std::size_t q = 0; q + 1 < n; ++q) circuit.set_measurement(q, MeasureBasis::Z);
    return circuit;
}

}  // namespace qrn
