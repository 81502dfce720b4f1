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

#include <algorithm>
#include <cstdint>
#include <vector>

#include "qrn/random.hpp"
#include "qrn/stats.hpp"
#include "qrn/topo/lattice.hpp"

namespace qrn::topo {

struct TopoErrorModel {
    double p_cz = 0.0;     ///< two-qubit depolarizing probability per CZ
    double p_prep = 0.001;  ///< Z flip on a freshly prepared |+>
    double p_meas = 0.001;  ///< X-measurement outcome flip
    double l_prime = 0.0;  ///< probability that a CZ is abandoned (heralded)

    void validate() const {
        require_probability(p_cz, "p_cz");
        require_probability(p_prep, "p_prep");
        require_probability(p_meas, "p_meas");
        require_probability(l_prime, "l_prime");
    }
};

/// A two-qubit Pauli drawn after a CZ. Bits 0-1 act on the face qubit and
/// bits 2-3 on the edge qubit, each as (x, z).
struct CzFault {
    int bond;
    std::uint8_t pauli;

    int weight() const noexcept { return ((pauli & 3U) != 0) + ((pauli & 12U) != 0); }
};

/// One sampled noise realization, folded onto the X-measurement outcomes.
struct ErrorSample {
    std::vector<std::uint8_t> flip;  ///< per qubit: measurement outcome is flipped
    std::vector<std::uint8_t> lost;  ///< per qubit: outcome unavailable
    std::vector<CzFault> faults;
    int prep_flips = 0;
    int meas_flips = 0;

    void reset(const ClusterLattice& lat) {
        flip.assign(lat.num_qubits(), 0);
        lost.assign(lat.num_qubits(), 0);
        faults.clear();
        prep_flips = meas_flips = 0;
    }

    /// Number of non-identity single-qubit factors over all CZ faults.
    int fault_weight() const {
        int w = 0;
        for (const auto& f : faults) w += f.weight();
        return w;
    }
    int lost_count() const { return static_cast<int>(std::count(lost.begin(), lost.end(), 1)); }
    int flip_count() const { return static_cast<int>(std::count(flip.begin(), flip.end(), 1)); }
};

/// Folds a Pauli on `qubit` just after time step `step` into outcome flips.
/// Z flips the qubit's own X outcome. X picks up a Z on every partner whose
/// CZ comes later in the schedule.
inline void apply_pauli_after_step(const ClusterLattice& lat, int qubit, bool x, bool z, int step,
                                   std::vector<std::uint8_t>& flip) {
    if (z) flip[qubit] ^= 1U;
    if (!x) return;
    for (int b : lat.bonds_of(qubit)) {
        if (lat.bonds()[b].step > step) flip[lat.partner(b, qubit)] ^= 1U;
    }
}

inline void apply_cz_fault(const ClusterLattice& lat, const CzFault& fault, std::vector<std::uint8_t>& flip) {
    const Bond& b = lat.bonds().at(fault.bond);
    apply_pauli_after_step(lat, b.face, fault.pauli & 1U, fault.pauli & 2U, b.step, flip);
    apply_pauli_after_step(lat, b.edge, fault.pauli & 4U, fault.pauli & 8U, b.step, flip);
}

/// Samples bonds in index order (abandonment, then CZ fault), then qubits in
/// index order (preparation, then measurement). An abandoned CZ marks both
/// endpoints lost and draws no fault.
inline void sample_errors(const ClusterLattice& lat, const TopoErrorModel& model, Rng& rng, ErrorSample& out) {
    out.reset(lat);
    const auto& bonds = lat.bonds();
    for (int k = 0; k < lat.num_bonds(); ++k) {
        if (model.l_prime > 0.0 && rng.bernoulli(model.l_prime)) {
            out.lost[bonds[k].face] = 1;
            out.lost[bonds[k].edge] = 1;
            continue;
        }
        if (model.p_cz > 0.0 && rng.bernoulli(model.p_cz)) {
            const CzFault f{k, static_cast<std::uint8_t>(1 + rng.below(15))};
            out.faults.push_back(f);
            apply_cz_fault(lat, f, out.flip);
        }
    }
    for (int q = 0; q < lat.num_qubits(); ++q) {
        if (model.p_prep > 0.0 && rng.bernoulli(model.p_prep)) {
            out.flip[q] ^= 1U;
            ++out.prep_flips;
        }
        if (model.p_meas > 0.0 && rng.bernoulli(model.p_meas)) {
            out.flip[q] ^= 1U;
            ++out.meas_flips;
        }
    }
}

inline ErrorSample sample_errors(const ClusterLattice& lat, const TopoErrorModel& model, Rng& rng) {
    model.validate();
    ErrorSample s;
    sample_errors(lat, model, rng, s);
    return s;
}

/// Mean of ErrorSample::fault_weight(): each of the 15 non-identity Paulis
/// touches a given qubit in 12 cases, so E[weight] = 24/15 per fault.
inline double expected_fault_weight(const ClusterLattice& lat, const TopoErrorModel& model) {
    return lat.num_bonds() * (1.0 - model.l_prime) * model.p_cz * (24.0 / 15.0);
}

}  // namespace qrn::topo
