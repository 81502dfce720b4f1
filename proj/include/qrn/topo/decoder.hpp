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

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qrn/matching.hpp"
#include "qrn/topo/errors.hpp"
#include "qrn/topo/lattice.hpp"
#include "qrn/topo/syndrome.hpp"

namespace qrn::topo {

struct MatchedPair {
    int a;  ///< defect representative
    int b;
    int cell_a;  ///< member cells joined by the correction chain
    int cell_b;
    int weight;
};

struct DecodeResult {
    std::vector<MatchedPair> pairs;
    std::uint8_t correction_crossing = 0;  ///< cut-plane crossings of the correction, closed through supercells
    std::uint8_t failure_bits = 0;         ///< filled by check_logical_failure
    int total_weight = 0;

    bool logical_failure() const noexcept { return failure_bits != 0; }
};

/// Pairwise distances between defect supercells: the periodic taxicab
/// distance between their closest member cells, together with the member
/// cells realizing it.
class DefectGraph {
  public:
    void build(const ClusterLattice& lat, const SyndromeSet& syn) {
        const int n = static_cast<int>(syn.defects.size());
        const int cells = lat.num_cells();
        n_ = n;
        dist_.assign(static_cast<std::size_t>(n) * n, 0);
        ends_.assign(static_cast<std::size_t>(n) * n, {-1, -1});
        members_.assign(n, {});
        std::vector<int> slot(cells, -1);
        for (int i = 0; i < n; ++i) slot[syn.defects[i]] = i;
        for (int c = 0; c < cells; ++c) {
            const int s = slot[syn.supercell[c]];
            if (s >= 0) members_[s].push_back(c);
        }
        std::vector<int> bfs_dist, bfs_src, queue;
        for (int i = 0; i < n; ++i) {
            const bool big_i = members_[i].size() > 1;
            if (big_i) multi_source_bfs(lat, members_[i], bfs_dist, bfs_src, queue);
            for (int j = i + 1; j < n; ++j) {
                int best = std::numeric_limits<int>::max();
                std::array<int, 2> end{-1, -1};
                if (big_i) {
                    for (int m : members_[j]) {
                        if (bfs_dist[m] < best) {
                            best = bfs_dist[m];
                            end = {bfs_src[m], m};
                        }
                    }
                } else {
                    const int ci = members_[i][0];
                    for (int m : members_[j]) {
                        const int dd = lat.cell_distance(ci, m);
                        if (dd < best) {
                            best = dd;
                            end = {ci, m};
                        }
                    }
                }
                set(i, j, best, end);
            }
        }
    }

    int size() const noexcept { return n_; }
    int distance(int i, int j) const { return dist_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::array<int, 2>& ends(int i, int j) const { return ends_[static_cast<std::size_t>(i) * n_ + j]; }

  private:
    void set(int i, int j, int d, std::array<int, 2> e) {
        dist_[static_cast<std::size_t>(i) * n_ + j] = d;
        dist_[static_cast<std::size_t>(j) * n_ + i] = d;
        ends_[static_cast<std::size_t>(i) * n_ + j] = e;
        ends_[static_cast<std::size_t>(j) * n_ + i] = {e[1], e[0]};
    }

    static void multi_source_bfs(const ClusterLattice& lat, const std::vector<int>& sources, std::vector<int>& dist,
                                 std::vector<int>& src, std::vector<int>& queue) {
        dist.assign(lat.num_cells(), -1);
        src.assign(lat.num_cells(), -1);
        queue.clear();
        for (int s : sources) {
            dist[s] = 0;
            src[s] = s;
            queue.push_back(s);
        }
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const int c = queue[head];
            for (int nb : lat.cell_neighbors(c)) {
                if (dist[nb] >= 0) continue;
                dist[nb] = dist[c] + 1;
                src[nb] = src[c];
                queue.push_back(nb);
            }
        }
    }

    int n_ = 0;
    std::vector<int> dist_;
    std::vector<std::array<int, 2>> ends_;
    std::vector<std::vector<int>> members_;
};

/// Minimum-weight perfect matching of the defect supercells.
inline DecodeResult decode_mwpm(const ClusterLattice& lat, const SyndromeSet& syn) {
    const int n = static_cast<int>(syn.defects.size());
    if (n % 2 != 0) throw std::logic_error("odd number of defects");
    DecodeResult r;
    if (n == 0) return r;
    DefectGraph g;
    g.build(lat, syn);
    std::vector<std::int64_t> cost(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) cost[static_cast<std::size_t>(i) * n + j] = g.distance(i, j);
    }
    const auto mate = min_weight_perfect_matching(n, cost);
    for (int i = 0; i < n; ++i) {
        const int j = mate[i];
        if (j < i) continue;
        const auto& e = g.ends(i, j);
        const int w = g.distance(i, j);
        r.pairs.push_back({syn.defects[i], syn.defects[j], e[0], e[1], w});
        r.total_weight += w;
        r.correction_crossing ^= lat.path_crossing(e[0], e[1]) ^ syn.potential[e[0]] ^ syn.potential[e[1]];
    }
    return r;
}

/// Marks the cut planes crossed an odd number of times by error plus
/// correction, and every plane along which the lost region wraps the torus.
inline std::uint8_t check_logical_failure(const ClusterLattice& lat, const ErrorSample& sample,
                                          const SyndromeSet& syn, DecodeResult& result) {
    result.failure_bits =
        static_cast<std::uint8_t>((error_crossing(lat, sample, syn) ^ result.correction_crossing) | syn.ambiguous);
    return result.failure_bits;
}

/// Sample, extract, decode, check. Returns the failure bits.
inline std::uint8_t run_topo_trial(const ClusterLattice& lat, const TopoErrorModel& model, Rng& rng) {
    thread_local ErrorSample sample;
    thread_local SyndromeSet syn;
    sample_errors(lat, model, rng, sample);
    extract_syndrome(lat, sample, syn);
    auto result = decode_mwpm(lat, syn);
    return check_logical_failure(lat, sample, syn, result);
}

}  // namespace qrn::topo
