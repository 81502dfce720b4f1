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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "qrn/random.hpp"
#include "qrn/stats.hpp"
#include "qrn/topo/decoder.hpp"
#include "qrn/topo/lattice.hpp"

namespace qrn::topo {

struct RateEstimate {
    int d = 0;
    TopoErrorModel model;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    std::uint64_t seed = 0;
    Interval ci;

    double rate() const noexcept { return trials ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0; }
    double rate_stderr() const noexcept { return binomial_stderr(failures, trials); }
};

inline constexpr std::uint64_t kMinTopoTrials = 1000;

/// Fraction of trials with a logical failure along any axis, with a 95%
/// Wilson interval. Trial t draws from derive_seed(seed, t).
inline RateEstimate estimate_logical_rate(const ClusterLattice& lat, const TopoErrorModel& model, std::uint64_t trials,
                                          std::uint64_t seed) {
    if (trials < kMinTopoTrials) throw std::invalid_argument("estimate_logical_rate needs at least 1000 trials");
    model.validate();
    const std::uint64_t failures = run_trials(
        trials, std::uint64_t{0},
        [&](std::uint64_t& acc, std::uint64_t t) {
            Rng rng(seed, t);
            acc += run_topo_trial(lat, model, rng) != 0 ? 1 : 0;
        },
        [](std::uint64_t& total, std::uint64_t part) { total += part; });
    RateEstimate r;
    r.d = lat.d();
    r.model = model;
    r.trials = trials;
    r.failures = failures;
    r.seed = seed;
    r.ci = wilson_interval(failures, trials);
    return r;
}

inline RateEstimate estimate_logical_rate(int d, const TopoErrorModel& model, std::uint64_t trials, std::uint64_t seed) {
    return estimate_logical_rate(build_lattice(d), model, trials, seed);
}

/// rate(p) ~ c[0] + c[1] p + c[2] p^2
using Quadratic = std::array<double, 3>;

inline double eval(const Quadratic& c, double p) { return c[0] + p * (c[1] + p * c[2]); }

/// Weighted least-squares quadratic through (p, rate) with binomial weights.
/// The abscissa is centered and scaled internally for conditioning.
inline Quadratic fit_quadratic(const std::vector<double>& p, const std::vector<double>& rate,
                               const std::vector<double>& trials) {
    const std::size_t m = p.size();
    if (m < 3 || rate.size() != m || trials.size() != m) throw std::invalid_argument("quadratic fit needs >= 3 points");
    double lo = *std::min_element(p.begin(), p.end()), hi = *std::max_element(p.begin(), p.end());
    const double mid = 0.5 * (lo + hi), half = std::max(0.5 * (hi - lo), 1e-300);
    double A[3][4] = {};
    for (std::size_t i = 0; i < m; ++i) {
        const double x = (p[i] - mid) / half;
        const double r = rate[i];
        const double var = std::max(r * (1.0 - r), 1.0 / trials[i]) / trials[i];
        const double w = 1.0 / var;
        const double basis[3] = {1.0, x, x * x};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) A[a][b] += w * basis[a] * basis[b];
            A[a][3] += w * basis[a] * r;
        }
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        }
        for (int k = 0; k < 4; ++k) std::swap(A[col][k], A[piv][k]);
        if (std::abs(A[col][col]) < 1e-300) throw std::runtime_error("singular quadratic fit");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = A[r][col] / A[col][col];
            for (int k = col; k < 4; ++k) A[r][k] -= f * A[col][k];
        }
    }
    const double u0 = A[0][3] / A[0][0], u1 = A[1][3] / A[1][1], u2 = A[2][3] / A[2][2];
    // Back to the raw abscissa: x = (p - mid) / half.
    const double s = 1.0 / half;
    return {u0 - u1 * mid * s + u2 * mid * mid * s * s, u1 * s - 2.0 * u2 * mid * s * s, u2 * s * s};
}

/// Smallest p in [lo, hi] where `larger` rises through `smaller`.
inline std::optional<double> curve_crossing(const Quadratic& smaller, const Quadratic& larger, double lo, double hi) {
    const double a = larger[2] - smaller[2], b = larger[1] - smaller[1], c = larger[0] - smaller[0];
    std::vector<double> roots;
    const double scale = std::abs(a) * (hi * hi) + std::abs(b) * hi;
    if (std::abs(a) * hi * hi <= 1e-12 * std::max(scale, 1e-300)) {
        if (b != 0.0) roots.push_back(-c / b);
    } else {
        const double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            const double q = -0.5 * (b + (b >= 0 ? sq : -sq));
            if (q != 0.0) roots.push_back(c / q);
            roots.push_back(q / a);
        }
    }
    std::sort(roots.begin(), roots.end());
    for (double r : roots) {
        if (r < lo || r > hi) continue;
        if (2.0 * a * r + b > 0.0) return r;
    }
    return std::nullopt;
}

struct ThresholdEstimate {
    std::vector<int> d_list;
    std::vector<double> p_grid;
    TopoErrorModel model;  ///< p_cz unused
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<RateEstimate> points;         ///< d-major, then p
    std::map<int, Quadratic> fits;
    std::vector<double> crossings;            ///< one per adjacent (d, d') pair that crosses
    std::optional<double> threshold;          ///< mean of crossings; empty when out of range
    Interval ci{0.0, 0.0};
    int bootstrap_samples = 0;
    double bootstrap_defined = 0.0;           ///< fraction of resamples with a crossing

    bool in_range() const noexcept { return threshold.has_value(); }
};

namespace detail {

struct CrossingResult {
    std::map<int, Quadratic> fits;
    std::vector<double> crossings;
    std::optional<double> threshold;
};

inline CrossingResult locate_crossing(const std::vector<int>& d_list, const std::vector<double>& p_grid,
                                      const std::vector<double>& rates, const std::vector<double>& trials) {
    CrossingResult out;
    const std::size_t np = p_grid.size();
    for (std::size_t i = 0; i < d_list.size(); ++i) {
        const std::vector<double> r(rates.begin() + i * np, rates.begin() + (i + 1) * np);
        const std::vector<double> t(trials.begin() + i * np, trials.begin() + (i + 1) * np);
        out.fits[d_list[i]] = fit_quadratic(p_grid, r, t);
    }
    const double lo = p_grid.front(), hi = p_grid.back();
    for (std::size_t i = 0; i + 1 < d_list.size(); ++i) {
        if (auto x = curve_crossing(out.fits[d_list[i]], out.fits[d_list[i + 1]], lo, hi)) out.crossings.push_back(*x);
    }
    if (!out.crossings.empty()) {
        double s = 0.0;
        for (double x : out.crossings) s += x;
        out.threshold = s / static_cast<double>(out.crossings.size());
    }
    return out;
}

}  // namespace detail

/// Threshold from logical-rate curves that are already measured. `rates` and
/// `trials` are d-major over `p_grid`. The interval comes from a parametric
/// bootstrap that redraws every point as Binomial(trials, rate).
inline ThresholdEstimate fit_threshold(const std::vector<int>& d_list, const std::vector<double>& p_grid,
                                       const std::vector<double>& rates, const std::vector<double>& trials,
                                       std::uint64_t seed, int bootstrap = 200) {
    if (d_list.size() < 2) throw std::invalid_argument("threshold needs at least two distances");
    if (p_grid.size() < 3) throw std::invalid_argument("threshold needs at least three grid points");
    if (!std::is_sorted(p_grid.begin(), p_grid.end())) throw std::invalid_argument("p grid must be ascending");
    if (rates.size() != d_list.size() * p_grid.size() || trials.size() != rates.size()) {
        throw std::invalid_argument("rate table has the wrong shape");
    }
    ThresholdEstimate est;
    est.d_list = d_list;
    est.p_grid = p_grid;
    est.seed = seed;
    auto base = detail::locate_crossing(d_list, p_grid, rates, trials);
    est.fits = base.fits;
    est.crossings = base.crossings;
    est.threshold = base.threshold;
    est.bootstrap_samples = bootstrap;
    if (!est.threshold || bootstrap <= 0) {
        if (est.threshold) est.ci = {*est.threshold, *est.threshold};
        return est;
    }
    std::vector<double> samples;
    std::vector<double> resampled(rates.size());
    for (int b = 0; b < bootstrap; ++b) {
        Rng rng(derive_seed(seed, 0xB0075ULL), static_cast<std::uint64_t>(b));
        for (std::size_t i = 0; i < rates.size(); ++i) {
            const auto n = static_cast<std::uint64_t>(trials[i]);
            resampled[i] = static_cast<double>(rng.binomial(n, rates[i])) / trials[i];
        }
        if (auto x = detail::locate_crossing(d_list, p_grid, resampled, trials).threshold) samples.push_back(*x);
    }
    est.bootstrap_defined = static_cast<double>(samples.size()) / bootstrap;
    if (samples.empty()) {
        est.ci = {*est.threshold, *est.threshold};
    } else {
        est.ci = {percentile(samples, 2.5), percentile(samples, 97.5)};
    }
    return est;
}

/// Measures every (d, p) point, then fits. Every point at distance d uses
/// the master seed derive_seed(seed, d), so the curves share random numbers
/// along p.
template <class Progress>
ThresholdEstimate estimate_threshold(const TopoErrorModel& family, const std::vector<int>& d_list,
                                     const std::vector<double>& p_grid, std::uint64_t trials, std::uint64_t seed,
                                     Progress&& progress) {
    if (d_list.size() < 2) throw std::invalid_argument("threshold needs at least two distances");
    std::vector<RateEstimate> points;
    std::vector<double> rates, counts;
    for (int d : d_list) {
        const ClusterLattice lat(d);
        for (double p : p_grid) {
            TopoErrorModel m = family;
            m.p_cz = p;
            points.push_back(estimate_logical_rate(lat, m, trials, derive_seed(seed, static_cast<std::uint64_t>(d))));
            rates.push_back(points.back().rate());
            counts.push_back(static_cast<double>(trials));
            progress(points.back());
        }
    }
    ThresholdEstimate est = fit_threshold(d_list, p_grid, rates, counts, seed);
    est.model = family;
    est.trials = trials;
    est.points = std::move(points);
    return est;
}

inline ThresholdEstimate estimate_threshold(const TopoErrorModel& family, const std::vector<int>& d_list,
                                            const std::vector<double>& p_grid, std::uint64_t trials,
                                            std::uint64_t seed) {
    return estimate_threshold(family, d_list, p_grid, trials, seed, [](const RateEstimate&) {});
}

inline void write_rate_csv_header(std::ostream& os) {
    os << "d,p_cz,p_prep,p_meas,l_prime,trials,failures,rate,ci_low,ci_high,seed\n";
}

inline void write_rate_csv_row(std::ostream& os, const RateEstimate& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%.6g,%.6g,%.6g,%.6g,", r.d, r.model.p_cz, r.model.p_prep, r.model.p_meas,
                  r.model.l_prime);
    os << buf << r.trials << ',' << r.failures << ',';
    std::snprintf(buf, sizeof buf, "%.8f,%.8f,%.8f,", r.rate(), r.ci.low, r.ci.high);
    os << buf << r.seed << '\n';
}

}  // namespace qrn::topo
