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

#include <cstdint>
#include <vector>

#include "qrn/topo/errors.hpp"
#include "qrn/topo/lattice.hpp"

namespace qrn::topo {

/// Primal-cell parities after merging cells across lost faces.
///
/// Each supercell is represented by its smallest cell index. `potential[c]`
/// holds the cut-plane crossings of a path of lost faces from the
/// representative to c; `ambiguous` collects crossings of closed loops of
/// lost faces (a supercell wrapping the torus along that axis).
struct SyndromeSet {
    std::vector<int> supercell;             ///< cell -> representative cell
    std::vector<std::uint8_t> potential;    ///< cell -> crossing bits from representative
    std::vector<int> defects;               ///< odd-parity representatives, ascending
    std::vector<int> supercell_size;        ///< indexed by representative
    std::uint8_t ambiguous = 0;

    bool is_defect(int cell) const;
};

namespace detail {

class ParityUnionFind {
  public:
    void reset(int n) {
        parent_.resize(n);
        pot_.assign(n, 0);
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }

    /// Root of x; `pot` receives the XOR of edge labels from x to the root.
    int find(int x, std::uint8_t& pot) {
        std::uint8_t acc = 0;
        int r = x;
        while (parent_[r] != r) {
            acc ^= pot_[r];
            r = parent_[r];
        }
        // Path compression, recomputing each node's label to the root.
        std::uint8_t rest = acc;
        while (parent_[x] != r) {
            const int next = parent_[x];
            const std::uint8_t own = pot_[x];
            parent_[x] = r;
            pot_[x] = rest;
            rest ^= own;
            x = next;
        }
        pot = acc;
        return r;
    }

    /// Joins a and b with label(a) ^ label(b) = w. Returns the loop label if
    /// they were already joined.
    std::uint8_t unite(int a, int b, std::uint8_t w) {
        std::uint8_t pa = 0, pb = 0;
        const int ra = find(a, pa), rb = find(b, pb);
        if (ra == rb) return static_cast<std::uint8_t>(pa ^ pb ^ w);
        const int lo = ra < rb ? ra : rb, hi = ra < rb ? rb : ra;
        parent_[hi] = lo;
        pot_[hi] = static_cast<std::uint8_t>(pa ^ pb ^ w);
        return 0;
    }

  private:
    std::vector<int> parent_;
    std::vector<std::uint8_t> pot_;
};

}  // namespace detail

inline void extract_syndrome(const ClusterLattice& lat, const ErrorSample& sample, SyndromeSet& out) {
    const int cells = lat.num_cells();
    thread_local detail::ParityUnionFind uf;
    uf.reset(cells);
    out.ambiguous = 0;
    for (int f = 0; f < lat.num_faces(); ++f) {
        if (!sample.lost[f]) continue;
        const auto& c = lat.cells_of_face(f);
        out.ambiguous |= uf.unite(c[0], c[1], lat.face_crossing(f));
    }
    out.supercell.resize(cells);
    out.potential.resize(cells);
    out.supercell_size.assign(cells, 0);
    for (int c = 0; c < cells; ++c) {
        out.supercell[c] = uf.find(c, out.potential[c]);
        ++out.supercell_size[out.supercell[c]];
    }
    thread_local std::vector<std::uint8_t> parity;
    parity.assign(cells, 0);
    for (int f = 0; f < lat.num_faces(); ++f) {
        if (!sample.flip[f] || sample.lost[f]) continue;
        const auto& c = lat.cells_of_face(f);
        parity[out.supercell[c[0]]] ^= 1U;
        parity[out.supercell[c[1]]] ^= 1U;
    }
    out.defects.clear();
    for (int c = 0; c < cells; ++c) {
        if (parity[c]) out.defects.push_back(c);
    }
}

inline SyndromeSet extract_syndrome(const ClusterLattice& lat, const ErrorSample& sample) {
    SyndromeSet s;
    extract_syndrome(lat, sample, s);
    return s;
}

inline bool SyndromeSet::is_defect(int cell) const {
    const int r = supercell.at(cell);
    for (int d : defects) {
        if (d == r) return true;
    }
    return false;
}

/// Cut-plane crossings of the measured error chain, each face closed up to
/// its supercell representatives through lost faces.
inline std::uint8_t error_crossing(const ClusterLattice& lat, const ErrorSample& sample, const SyndromeSet& syn) {
    std::uint8_t bits = 0;
    for (int f = 0; f < lat.num_faces(); ++f) {
        if (!sample.flip[f] || sample.lost[f]) continue;
        const auto& c = lat.cells_of_face(f);
        bits ^= lat.face_crossing(f) ^ syn.potential[c[0]] ^ syn.potential[c[1]];
    }
    return bits;
}

}  // namespace qrn::topo
