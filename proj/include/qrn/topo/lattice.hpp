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
#include <array>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace qrn::topo {

using Coord = std::array<int, 3>;

enum class QubitKind : std::uint8_t { Face, Edge };

struct Qubit {
    Coord pos;
    QubitKind kind;
    /// Normal axis for a face (its one even coordinate); the odd axis for an
    /// edge.
    std::uint8_t axis;
};

/// One CZ of the preparation circuit, performed at time step 1..4.
struct Bond {
    int face;
    int edge;
    int step;
};

/// Cubic cell complex on the periodic box Z_{2d}^3.
///
/// Primal cells are unit cubes centered at odd^3 points. Face qubits sit at
/// points with exactly two odd coordinates, edge qubits at points with
/// exactly one. Every face qubit is CZ-coupled to the four edges on its
/// boundary, giving 6 d^3 qubits and 12 d^3 bonds. Faces are numbered before
/// edges.
class ClusterLattice {
  public:
    explicit ClusterLattice(int d) : d_(d), L_(2 * d) {
        if (d < 2) throw std::invalid_argument("lattice distance must be at least 2");
        index_.assign(static_cast<std::size_t>(L_) * L_ * L_, -1);
        for (int pass = 0; pass < 2; ++pass) {
            const int want_odd = pass == 0 ? 2 : 1;
            for (int z = 0; z < L_; ++z) {
                for (int y = 0; y < L_; ++y) {
                    for (int x = 0; x < L_; ++x) {
                        const Coord c{x, y, z};
                        const int odd = (x & 1) + (y & 1) + (z & 1);
                        if (odd != want_odd) continue;
                        std::uint8_t axis = 0;
                        for (std::uint8_t a = 0; a < 3; ++a) {
                            if (((c[a] & 1) == 1) == (pass == 1)) axis = a;
                        }
                        index_[flat(c)] = static_cast<int>(qubits_.size());
                        qubits_.push_back({c, pass == 0 ? QubitKind::Face : QubitKind::Edge, axis});
                    }
                }
            }
            if (pass == 0) num_faces_ = static_cast<int>(qubits_.size());
        }

        bonds_of_.assign(qubits_.size(), {});
        face_cells_.resize(num_faces_);
        face_cross_.resize(num_faces_);
        for (int f = 0; f < num_faces_; ++f) {
            const Qubit& q = qubits_[f];
            const int n = q.axis;
            for (int s : {+1, -1}) {
                for (int b : {(n + 1) % 3, (n + 2) % 3}) {
                    Coord e = q.pos;
                    e[b] = wrap(e[b] + s);
                    const int edge = index_[flat(e)];
                    const int bond = static_cast<int>(bonds_.size());
                    bonds_.push_back({f, edge, schedule_step(n, b, s)});
                    bonds_of_[f].push_back(bond);
                    bonds_of_[edge].push_back(bond);
                }
            }
            Coord lo = q.pos, hi = q.pos;
            lo[n] = wrap(lo[n] - 1);
            hi[n] = wrap(hi[n] + 1);
            face_cells_[f] = {cell_index(lo), cell_index(hi)};
            face_cross_[f] = q.pos[n] == 0 ? static_cast<std::uint8_t>(1U << n) : 0;
        }
        cell_faces_.assign(num_cells(), {});
        for (int f = 0; f < num_faces_; ++f) {
            for (int c : face_cells_[f]) cell_faces_[c].push_back(f);
        }
    }

    /// Step of the CZ between a face with normal n and the edge displaced by
    /// sign s along axis b. Each qubit sees four distinct steps.
    static int schedule_step(int n, int b, int s) {
        if (b == (n + 1) % 3) return s > 0 ? 1 : 4;
        return s > 0 ? 2 : 3;
    }

    int d() const noexcept { return d_; }
    int side() const noexcept { return L_; }
    int num_qubits() const noexcept { return static_cast<int>(qubits_.size()); }
    int num_faces() const noexcept { return num_faces_; }
    int num_edges() const noexcept { return num_qubits() - num_faces_; }
    int num_cells() const noexcept { return d_ * d_ * d_; }
    int num_bonds() const noexcept { return static_cast<int>(bonds_.size()); }

    const Qubit& qubit(int i) const { return qubits_.at(i); }
    const std::vector<Qubit>& qubits() const noexcept { return qubits_; }
    const std::vector<Bond>& bonds() const noexcept { return bonds_; }
    const std::vector<int>& bonds_of(int qubit) const { return bonds_of_.at(qubit); }
    int partner(int bond, int qubit) const {
        const Bond& b = bonds_[bond];
        return b.face == qubit ? b.edge : b.face;
    }

    /// Qubit at a lattice point, or -1.
    int qubit_at(const Coord& c) const { return index_[flat({wrap(c[0]), wrap(c[1]), wrap(c[2])})]; }

    /// The two primal cells bounded by face f.
    const std::array<int, 2>& cells_of_face(int f) const { return face_cells_.at(f); }
    const std::vector<int>& faces_of_cell(int c) const { return cell_faces_.at(c); }

    /// Bit a is set when face f lies on the cut plane x_a = 0, so a dual path
    /// through f crosses that plane.
    std::uint8_t face_crossing(int f) const { return face_cross_[f]; }

    int cell_index(const Coord& odd) const { return (odd[0] / 2) + d_ * ((odd[1] / 2) + d_ * (odd[2] / 2)); }
    Coord cell_coord(int c) const { return {c % d_, (c / d_) % d_, c / (d_ * d_)}; }

    /// Periodic taxicab distance between cells.
    int cell_distance(int a, int b) const {
        const Coord ca = cell_coord(a), cb = cell_coord(b);
        int sum = 0;
        for (int k = 0; k < 3; ++k) {
            const int diff = std::abs(ca[k] - cb[k]);
            sum += std::min(diff, d_ - diff);
        }
        return sum;
    }

    /// Cut-plane crossings of a shortest path from cell a to cell b: bit k
    /// is set when the shorter way around axis k wraps the boundary. Ties
    /// take the direct way.
    std::uint8_t path_crossing(int a, int b) const {
        const Coord ca = cell_coord(a), cb = cell_coord(b);
        std::uint8_t bits = 0;
        for (int k = 0; k < 3; ++k) {
            const int diff = std::abs(ca[k] - cb[k]);
            if (d_ - diff < diff) bits |= static_cast<std::uint8_t>(1U << k);
        }
        return bits;
    }

    /// Neighbouring cells of c, in axis order -x, +x, -y, +y, -z, +z.
    std::array<int, 6> cell_neighbors(int c) const {
        const Coord p = cell_coord(c);
        std::array<int, 6> out{};
        for (int k = 0; k < 3; ++k) {
            for (int s = 0; s < 2; ++s) {
                Coord q = p;
                q[k] = (q[k] + (s ? 1 : d_ - 1)) % d_;
                out[2 * k + s] = q[0] + d_ * (q[1] + d_ * q[2]);
            }
        }
        return out;
    }

  private:
    int wrap(int v) const noexcept { return ((v % L_) + L_) % L_; }
    std::size_t flat(const Coord& c) const noexcept {
        return static_cast<std::size_t>(c[0]) + static_cast<std::size_t>(L_) * (c[1] + static_cast<std::size_t>(L_) * c[2]);
    }

    int d_;
    int L_;
    int num_faces_ = 0;
    std::vector<int> index_;
    std::vector<Qubit> qubits_;
    std::vector<Bond> bonds_;
    std::vector<std::vector<int>> bonds_of_;
    std::vector<std::array<int, 2>> face_cells_;
    std::vector<std::uint8_t> face_cross_;
    std::vector<std::vector<int>> cell_faces_;
};

inline ClusterLattice build_lattice(int d) { return ClusterLattice(d); }

}  // namespace qrn::topo
