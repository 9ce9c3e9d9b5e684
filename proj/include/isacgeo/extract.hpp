// SPDX-License-Identifier: Apache-2.0
//
// isacgeo: scatterer geometry and bistatic RCS from monostatic mmWave scans
// Copyright (C) 2026 The isacgeo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Multipath component extraction and dispersion statistics.
//
// Peaks are searched on a Hann-tapered copy of the CIR, so that the sinc
// sidelobes of a strong path do not register as separate components. Each
// surviving peak is then refined on the band-limited interpolant, which
// yields a sub-tap delay and the path's power without the straddle loss of
// the raw tap grid.

#pragma once

#include "model.hpp"
#include "spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace isacgeo
{

struct PeakGateParams
{
    double p_min_db = -55.0;
    double dtau_min_s = 2.2e-9;
    double r_min_m = 0.5; // monostatic only
    std::size_t k_max = 4;

    void validate() const
    {
        if (std::isnan(p_min_db))
            throw ConfigError("p_min must not be NaN");
        if (!(dtau_min_s > 0.0))
            throw ConfigError("dtau_min must be positive");
        if (!(r_min_m >= 0.0))
            throw ConfigError("r_min must be non-negative");
        if (k_max < 1)
            throw ConfigError("k_max must be at least 1");
    }

    bool operator==(const PeakGateParams &) const = default;
};

struct Mpc
{
    double steering_deg = std::numeric_limits<double>::quiet_NaN(); // NaN for bistatic
    double excess_delay_s = 0.0;
    double power_db = kNegInf;
    double range_m = 0.0; // c*tau/2 for monostatic, path length for bistatic
};

struct DetectOptions
{
    bool taper = true;
    bool refine = true;
};

// ------------------------------------------------------------------------
// Peak search

// Indices of discrete local maxima. Neighbors wrap around, matching the
// periodic band-limited model; a plateau reports its earliest tap.
inline std::vector<std::size_t> local_maxima(std::span<const double> v)
{
    const std::size_t n = v.size();
    std::vector<std::size_t> out;
    if (n == 1)
    {
        out.push_back(0);
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        const double left = v[(i + n - 1) % n];
        if (!(v[i] > left))
            continue;
        std::size_t j = i;
        std::size_t steps = 0;
        while (steps < n && v[(j + 1) % n] == v[i])
        {
            j = (j + 1) % n;
            ++steps;
        }
        if (v[(j + 1) % n] < v[i])
            out.push_back(i);
    }
    return out;
}

struct RefinedPeak
{
    double tap = 0.0; // fractional tap position
    double power_db = kNegInf;
};

// Maximize |h(t)|^2 of the band-limited interpolant on [n-1, n+1].
inline RefinedPeak refine_peak(std::span<const spectrum::cd> big_h, std::size_t n)
{
    auto f = [&](double t) { return std::norm(spectrum::evaluate(big_h, t)); };
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = static_cast<double>(n) - 1.0;
    double b = static_cast<double>(n) + 1.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > 1e-7)
    {
        if (fc > fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    RefinedPeak best{static_cast<double>(n), f(static_cast<double>(n))};
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm > best.power_db)
        best = {mid, fm};
    best.power_db = pow2db(best.power_db);
    return best;
}

inline std::vector<spectrum::cd> tapered_spectrum(const Cir &cir, bool taper)
{
    auto big_h = spectrum::forward(cir.taps);
    if (taper)
    {
        const auto w = spectrum::hann_taper(big_h.size());
        for (std::size_t i = 0; i < big_h.size(); ++i)
            big_h[i] *= w[i];
    }
    return big_h;
}

namespace detail
{
struct Candidate
{
    double tap;
    double delay;
    double power_db;
};

inline std::vector<Candidate> candidates(const Cir &cir, const DetectOptions &opt)
{
    const auto big_h = tapered_spectrum(cir, opt.taper);
    const auto h = opt.taper ? spectrum::inverse(big_h) : cir.taps;
    std::vector<double> p(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        p[i] = std::norm(h[i]);

    std::vector<Candidate> out;
    for (std::size_t i : local_maxima(p))
    {
        if (p[i] == 0.0)
            continue;
        RefinedPeak r{static_cast<double>(i), pow2db(p[i])};
        if (opt.refine)
            r = refine_peak(big_h, i);
        out.push_back({r.tap, cir.delay_of(r.tap), r.power_db});
    }
    return out;
}

// Strongest first, greedy minimum separation, then truncation.
inline std::vector<Candidate> select(std::vector<Candidate> c, double dtau_min, std::size_t k_max)
{
    std::stable_sort(c.begin(), c.end(), [](const Candidate &x, const Candidate &y) {
        return x.power_db > y.power_db || (x.power_db == y.power_db && x.delay < y.delay);
    });
    std::vector<Candidate> kept;
    for (const auto &x : c)
    {
        if (kept.size() >= k_max)
            break;
        const bool clear = std::all_of(kept.begin(), kept.end(),
                                       [&](const Candidate &k) { return std::abs(k.delay - x.delay) >= dtau_min; });
        if (clear)
            kept.push_back(x);
    }
    return kept;
}
} // namespace detail

// Local maxima of |cir|^2 passing P_min, the monostatic range gate, the
// minimum separation and K_max. Sorted by descending power.
inline std::vector<Mpc> detect_peaks(const Cir &cir, const PeakGateParams &gates, const DetectOptions &opt = {})
{
    gates.validate();
    if (cir.taps.empty())
        throw EmptyInputError("detect_peaks: empty CIR");
    if (!(cir.tap_spacing_s > 0.0))
        throw DomainError("detect_peaks: tap spacing must be positive");

    const bool mono = cir.kind == CirKind::monostatic;
    std::vector<detail::Candidate> pass;
    for (const auto &c : detail::candidates(cir, opt))
    {
        if (!(c.power_db >= gates.p_min_db))
            continue;
        if (mono && kSpeedOfLight * std::max(c.delay, 0.0) / 2.0 < gates.r_min_m)
            continue;
        pass.push_back(c);
    }

    std::vector<Mpc> out;
    for (const auto &c : detail::select(std::move(pass), gates.dtau_min_s, gates.k_max))
    {
        Mpc m;
        m.excess_delay_s = c.delay;
        m.power_db = c.power_db;
        if (mono)
        {
            m.steering_deg = cir.steering_deg;
            m.range_m = kSpeedOfLight * std::max(c.delay, 0.0) / 2.0;
        }
        else
            m.range_m = kSpeedOfLight * c.delay;
        out.push_back(m);
    }
    return out;
}

// All MPCs of a monostatic scan, in angle-grid order then descending power.
inline std::vector<Mpc> extract_mpcs(std::span<const Cir> cirs, const PeakGateParams &gates,
                                     const DetectOptions &opt = {})
{
    std::vector<Mpc> out;
    for (const auto &c : cirs)
    {
        if (c.kind != CirKind::monostatic)
            throw DomainError("extract_mpcs: expected monostatic CIRs");
        const auto m = detect_peaks(c, gates, opt);
        out.insert(out.end(), m.begin(), m.end());
    }
    return out;
}

// Defaults for the communication link: no range gate, room for more echoes.
inline PeakGateParams default_comm_gates() { return {-55.0, 2.2e-9, 0.0, 8}; }

struct BistaticMpcs
{
    Mpc los;                 // excess delay 0, range = LoS path length
    double los_delay_s = 0;  // absolute delay of the LoS peak
    std::vector<Mpc> echoes; // excess delays relative to los_delay_s
};

// The strongest peak is taken as the LoS reference; later peaks become echoes.
inline BistaticMpcs extract_bistatic(const Cir &cir, const PeakGateParams &gates = default_comm_gates(),
                                     const DetectOptions &opt = {})
{
    if (cir.kind != CirKind::bistatic)
        throw DomainError("extract_bistatic: expected a bistatic CIR");
    const auto peaks = detect_peaks(cir, gates, opt);
    if (peaks.empty())
        throw CalibrationError("no LoS peak above P_min in the bistatic CIR");
    BistaticMpcs out;
    out.los = peaks.front();
    out.los_delay_s = out.los.excess_delay_s;
    out.los.excess_delay_s = 0.0;
    for (std::size_t i = 1; i < peaks.size(); ++i)
    {
        if (peaks[i].excess_delay_s <= out.los_delay_s)
            continue;
        Mpc m = peaks[i];
        m.excess_delay_s -= out.los_delay_s;
        out.echoes.push_back(m);
    }
    std::sort(out.echoes.begin(), out.echoes.end(),
              [](const Mpc &a, const Mpc &b) { return a.excess_delay_s < b.excess_delay_s; });
    return out;
}

// ------------------------------------------------------------------------
// Dispersion statistics

struct WeightedSample
{
    double value = 0.0;
    double power = 0.0; // linear
};

// Power-weighted standard deviation of `value` (second central moment).
inline double rms_spread(std::span<const WeightedSample> profile)
{
    double total = 0.0;
    for (const auto &s : profile)
    {
        if (!(s.power >= 0.0) || !std::isfinite(s.value))
            throw DomainError("rms_spread: powers must be non-negative and values finite");
        total += s.power;
    }
    if (!(total > 0.0) || !std::isfinite(total))
        throw DomainError("rms_spread: total power must be positive and finite");
    double mean = 0.0;
    for (const auto &s : profile)
        mean += s.power * s.value;
    mean /= total;
    double var = 0.0;
    for (const auto &s : profile)
        var += s.power * (s.value - mean) * (s.value - mean);
    return std::sqrt(var / total);
}

inline double rms_delay_spread(std::span<const WeightedSample> profile) { return rms_spread(profile); }
inline double rms_angular_spread(std::span<const WeightedSample> profile) { return rms_spread(profile); }

struct CdfPoint
{
    double value = 0.0;
    double probability = 0.0;
};

// Empirical CDF: the i-th smallest of n samples gets probability i/n.
inline std::vector<CdfPoint> empirical_cdf(std::vector<double> samples)
{
    std::sort(samples.begin(), samples.end());
    std::vector<CdfPoint> out;
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        out.push_back({samples[i], static_cast<double>(i + 1) / n});
    return out;
}

struct NormalFit
{
    double mean = 0.0;
    double std = 0.0; // n-1 denominator, 0 for a single sample
};

inline NormalFit fit_normal(std::span<const double> samples)
{
    if (samples.empty())
        throw EmptyInputError("fit_normal: no samples");
    NormalFit f;
    f.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    if (samples.size() > 1)
    {
        double ss = 0.0;
        for (double x : samples)
            ss += (x - f.mean) * (x - f.mean);
        f.std = std::sqrt(ss / static_cast<double>(samples.size() - 1));
    }
    return f;
}

struct SpreadStats
{
    std::vector<std::pair<double, double>> per_angle_delay_spread; // (angle deg, sigma_tau s)
    std::vector<std::pair<double, double>> per_bin_angle_spread;   // (delay s, sigma_theta deg)
    std::vector<CdfPoint> delay_cdf;
    std::vector<CdfPoint> angle_cdf;
    NormalFit delay_fit;
    NormalFit angle_fit;
};

// Entries more than floor_db below the matrix maximum are ignored. Rows or
// columns left empty are skipped.
inline SpreadStats spread_statistics(const Padp &padp, double floor_db = 30.0)
{
    padp.validate();
    if (!(floor_db >= 0.0))
        throw DomainError("spread_statistics: floor must be non-negative");
    double peak = kNegInf;
    for (double p : padp.power_db)
        if (!std::isnan(p))
            peak = std::max(peak, p);
    if (peak == kNegInf)
        throw DomainError("spread_statistics: no finite power entry");
    const double cut = peak - floor_db;
    auto kept = [&](double p) { return !std::isnan(p) && p >= cut; };

    SpreadStats st;
    std::vector<WeightedSample> prof;
    for (std::size_t a = 0; a < padp.rows(); ++a)
    {
        prof.clear();
        for (std::size_t d = 0; d < padp.cols(); ++d)
            if (kept(padp.at(a, d)))
                prof.push_back({padp.delays_s[d], db2pow(padp.at(a, d))});
        if (!prof.empty())
            st.per_angle_delay_spread.emplace_back(padp.angles_deg[a], rms_delay_spread(prof));
    }
    for (std::size_t d = 0; d < padp.cols(); ++d)
    {
        prof.clear();
        for (std::size_t a = 0; a < padp.rows(); ++a)
            if (kept(padp.at(a, d)))
                prof.push_back({padp.angles_deg[a], db2pow(padp.at(a, d))});
        if (!prof.empty())
            st.per_bin_angle_spread.emplace_back(padp.delays_s[d], rms_angular_spread(prof));
    }
    if (st.per_angle_delay_spread.empty() || st.per_bin_angle_spread.empty())
        throw DomainError("spread_statistics: nothing left above the floor");

    std::vector<double> ds, as;
    for (const auto &[a, s] : st.per_angle_delay_spread)
        ds.push_back(s);
    for (const auto &[d, s] : st.per_bin_angle_spread)
        as.push_back(s);
    st.delay_fit = fit_normal(ds);
    st.angle_fit = fit_normal(as);
    st.delay_cdf = empirical_cdf(std::move(ds));
    st.angle_cdf = empirical_cdf(std::move(as));
    return st;
}

} // namespace isacgeo
