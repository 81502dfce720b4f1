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


#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "qrn/matching.hpp"
#include "qrn/random.hpp"

namespace {

using qrn::WeightedEdge;

// Bitmask dynamic program over subsets: cheapest perfect matching.
std::int64_t dp_min_perfect(int n, const std::vector<std::int64_t>& cost) {
    const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<std::int64_t> best(std::size_t{1} << n, inf);
    best[0] = 0;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        if (best[mask] == inf) continue;
        int i = 0;
        while (i < n && (mask >> i & 1U)) ++i;
        if (i == n) continue;
        for (int j = i + 1; j < n; ++j) {
            if (mask >> j & 1U) continue;
            const std::uint32_t next = mask | (1U << i) | (1U << j);
            best[next] = std::min(best[next], best[mask] + cost[static_cast<std::size_t>(i) * n + j]);
        }
    }
    return best[(1U << n) - 1];
}

// Exhaustive search over all matchings of a sparse graph.
void brute_max(int n, const std::vector<WeightedEdge>& edges, std::size_t k, std::vector<bool>& used,
               std::int64_t w, int card, std::int64_t& best_w, int& best_card, bool maxcard) {
    if (k == edges.size()) {
        if (maxcard ? (card > best_card || (card == best_card && w > best_w)) : w > best_w) {
            best_w = w;
            best_card = card;
        }
        return;
    }
    brute_max(n, edges, k + 1, used, w, card, best_w, best_card, maxcard);
    const auto& e = edges[k];
    if (!used[e.i] && !used[e.j]) {
        used[e.i] = used[e.j] = true;
        brute_max(n, edges, k + 1, used, w + e.w, card + 1, best_w, best_card, maxcard);
        used[e.i] = used[e.j] = false;
    }
}

std::int64_t matched_weight(const std::vector<int>& mate, const std::vector<WeightedEdge>& edges, int& card) {
    std::int64_t w = 0;
    card = 0;
    for (const auto& e : edges) {
        if (mate[e.i] == e.j) {
            w += e.w;
            ++card;
        }
    }
    return w;
}

void expect_consistent(const std::vector<int>& mate) {
    for (int v = 0; v < static_cast<int>(mate.size()); ++v) {
        if (mate[v] >= 0) {
            EXPECT_EQ(mate[mate[v]], v);
        }
    }
}

TEST(Matching, PerfectMatchingAgreesWithSubsetDp) {
    for (std::uint64_t trial = 0; trial < 300; ++trial) {
        qrn::Rng rng(99, trial);
        const int n = 2 * static_cast<int>(1 + rng.below(6));
        std::vector<std::int64_t> cost(static_cast<std::size_t>(n) * n, 0);
        const auto top = trial % 3 == 0 ? 4 : 60;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const auto c = static_cast<std::int64_t>(rng.below(top));
                cost[static_cast<std::size_t>(i) * n + j] = c;
                cost[static_cast<std::size_t>(j) * n + i] = c;
            }
        }
        const auto mate = qrn::min_weight_perfect_matching(n, cost);
        expect_consistent(mate);
        std::int64_t total = 0;
        for (int i = 0; i < n; ++i) {
            ASSERT_GE(mate[i], 0);
            if (mate[i] > i) total += cost[static_cast<std::size_t>(i) * n + mate[i]];
        }
        EXPECT_EQ(total, dp_min_perfect(n, cost)) << "trial " << trial;
    }
}

TEST(Matching, MaxWeightAgreesWithExhaustiveSearch) {
    for (std::uint64_t trial = 0; trial < 300; ++trial) {
        qrn::Rng rng(7, trial);
        const int n = static_cast<int>(2 + rng.below(8));
        std::vector<WeightedEdge> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng.bernoulli(0.45) && edges.size() < 16) {
                    edges.push_back({i, j, static_cast<std::int64_t>(1 + rng.below(20))});
                }
            }
        }
        for (bool maxcard : {false, true}) {
            const auto mate = qrn::max_weight_matching(n, edges, maxcard);
            expect_consistent(mate);
            int card = 0;
            const auto w = matched_weight(mate, edges, card);
            std::vector<bool> used(n, false);
            std::int64_t best_w = -1;
            int best_card = -1;
            brute_max(n, edges, 0, used, 0, 0, best_w, best_card, maxcard);
            EXPECT_EQ(w, best_w) << "trial " << trial << " maxcard " << maxcard;
            if (maxcard) {
                EXPECT_EQ(card, best_card);
            }
        }
    }
}

TEST(Matching, KnownSmallCases) {
    // Path 0-1-2-3 with a heavy middle edge.
    const std::vector<WeightedEdge> path{{0, 1, 5}, {1, 2, 11}, {2, 3, 5}};
    auto mate = qrn::max_weight_matching(4, path);
    EXPECT_EQ(mate[1], 2);
    EXPECT_EQ(mate[0], -1);
    mate = qrn::max_weight_matching(4, path, true);
    EXPECT_EQ(mate[0], 1);
    EXPECT_EQ(mate[2], 3);
    // A triangle needs a blossom to reach the pendant vertex.
    const std::vector<WeightedEdge> tri{{0, 1, 6}, {1, 2, 6}, {0, 2, 6}, {2, 3, 4}};
    mate = qrn::max_weight_matching(4, tri);
    int card = 0;
    EXPECT_EQ(matched_weight(mate, tri, card), 10);
}

TEST(Matching, RejectsBadInput) {
    EXPECT_THROW(qrn::min_weight_perfect_matching(3, std::vector<std::int64_t>(9, 1)), std::invalid_argument);
    EXPECT_THROW(qrn::min_weight_perfect_matching(2, std::vector<std::int64_t>(3, 1)), std::invalid_argument);
    EXPECT_THROW(qrn::min_weight_perfect_matching(2, std::vector<std::int64_t>{0, -1, -1, 0}), std::invalid_argument);
    EXPECT_TRUE(qrn::min_weight_perfect_matching(0, {}).empty());
}

}  // namespace
