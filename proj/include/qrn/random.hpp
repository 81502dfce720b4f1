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
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace qrn {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of an independent stream, a fixed function of (master seed, stream index).
///
/// Every Monte Carlo trial in the library draws from the stream whose index is
/// the trial number, so results do not depend on how trials are distributed
/// over worker threads.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    return mix64(mix64(master ^ 0x6A09E667F3BCC909ULL) + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator.
class Rng {
  public:
    using result_type = std::uint64_t;

    explicit constexpr Rng(std::uint64_t seed) noexcept : state_(seed) {}
    constexpr Rng(std::uint64_t master, std::uint64_t stream) noexcept : state_(derive_seed(master, stream)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n) noexcept {
        if (n <= 1) return 0;
        __uint128_t m = static_cast<__uint128_t>((*this)()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<__uint128_t>((*this)()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    std::uint64_t binomial(std::uint64_t trials, double p) noexcept {
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < trials; ++i) hits += bernoulli(p) ? 1 : 0;
        return hits;
    }

  private:
    std::uint64_t state_;
};

/// Worker count: QRN_THREADS if set and positive, else the hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("QRN_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs `trials` independent trials in fixed-size blocks and merges the
/// per-block accumulators in block order.
///
/// `body(acc, trial_index)` updates a block accumulator; `merge(total, acc)`
/// folds one block into the running total. The block layout is independent
/// of the worker count, so the result is too.
template <class Acc, class Body, class Merge>
Acc run_trials(std::uint64_t trials, const Acc& init, Body&& body, Merge&& merge, unsigned workers = 0) {
    constexpr std::uint64_t kBlock = 1024;
    const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
    std::vector<Acc> partial(blocks, init);
    auto run_block = [&](std::uint64_t b) {
        const std::uint64_t lo = b * kBlock;
        const std::uint64_t hi = std::min(trials, lo + kBlock);
        for (std::uint64_t t = lo; t < hi; ++t) body(partial[b], t);
    };
    if (workers == 0) workers = worker_count();
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(blocks, 1)));
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t b = w; b < blocks; b += workers) run_block(b);
            });
        }
        for (auto& th : pool) th.join();
    }
    Acc total = init;
    for (const auto& acc : partial) merge(total, acc);
    return total;
}

}  // namespace qrn
