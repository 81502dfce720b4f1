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
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qrn {

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

inline double binomial_stderr(std::uint64_t hits, std::uint64_t n) {
    if (n == 0) return 0.0;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

/// Wilson score interval; z = 1.96 gives 95% coverage.
inline Interval wilson_interval(std::uint64_t hits, std::uint64_t n, double z = 1.96) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Nearest-rank percentile, q in (0, 100].
template <class T>
T percentile(std::vector<T> values, double q) {
    if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
    if (!(q > 0.0 && q <= 100.0)) throw std::invalid_argument("percentile rank must lie in (0, 100]");
    std::sort(values.begin(), values.end());
    auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(values.size())));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

inline bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

inline void require_probability(double p, const char* what) {
    if (!valid_probability(p)) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

}  // namespace qrn
