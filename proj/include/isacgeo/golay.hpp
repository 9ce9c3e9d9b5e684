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

// Complementary Golay pairs and correlation-based CIR estimation.
//
// The preamble is reduced to "a, guard, b": sequence a, at least num_taps-1
// zero samples, then sequence b, one sample per tap. Correlating each
// segment with its own sequence and summing cancels every sidelobe.

#pragma once

#include "model.hpp"

#include <algorithm>
#include <complex>
#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

namespace isacgeo
{

struct GolayPair
{
    std::vector<int> a;
    std::vector<int> b;

    std::size_t size() const { return a.size(); }
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Recursive doubling: a' = a|b, b' = a|-b, starting from a = b = [+1].
inline GolayPair generate_golay_pair(std::size_t n)
{
    if (!is_power_of_two(n))
        throw DomainError("generate_golay_pair: length must be a power of two");
    GolayPair p{{1}, {1}};
    while (p.a.size() < n)
    {
        std::vector<int> a2 = p.a;
        a2.insert(a2.end(), p.b.begin(), p.b.end());
        std::vector<int> b2 = p.a;
        for (int v : p.b)
            b2.push_back(-v);
        p.a = std::move(a2);
        p.b = std::move(b2);
    }
    return p;
}

// r[k + N - 1] = sum_i seq[i] * seq[i + k] for lags k = -(N-1) ... N-1.
template <class T>
    requires std::is_arithmetic_v<T>
std::vector<T> aperiodic_autocorr(std::span<const T> seq)
{
    const std::size_t n = seq.size();
    if (n == 0)
        throw DomainError("aperiodic_autocorr: empty sequence");
    std::vector<T> r(2 * n - 1, T{0});
    for (std::size_t k = 0; k < n; ++k)
    {
        T acc{0};
        for (std::size_t i = 0; i + k < n; ++i)
            acc += seq[i] * seq[i + k];
        r[n - 1 + k] = acc;
        r[n - 1 - k] = acc;
    }
    return r;
}

// Sum of both autocorrelations, widened to 64-bit so the check stays exact.
inline std::vector<std::int64_t> complementary_autocorr(const GolayPair &p)
{
    if (p.a.size() != p.b.size())
        throw LengthError("complementary_autocorr: sequences differ in length");
    std::vector<std::int64_t> a(p.a.begin(), p.a.end());
    std::vector<std::int64_t> b(p.b.begin(), p.b.end());
    auto ra = aperiodic_autocorr<std::int64_t>(a);
    const auto rb = aperiodic_autocorr<std::int64_t>(b);
    for (std::size_t i = 0; i < ra.size(); ++i)
        ra[i] += rb[i];
    return ra;
}

struct SidelobeCheck
{
    std::int64_t peak = 0;
    std::int64_t max_sidelobe = 0; // largest |value| at nonzero lags
};

inline SidelobeCheck check_complementarity(const GolayPair &p)
{
    const auto r = complementary_autocorr(p);
    const std::size_t mid = p.size() - 1;
    SidelobeCheck out{r[mid], 0};
    for (std::size_t i = 0; i < r.size(); ++i)
        if (i != mid)
            out.max_sidelobe = std::max(out.max_sidelobe, r[i] < 0 ? -r[i] : r[i]);
    return out;
}

// ------------------------------------------------------------------------
// Sounding

using cd = std::complex<double>;

struct PreambleLayout
{
    std::size_t num_taps = 128;
    std::size_t guard = 128; // zero samples between a and b, must be >= num_taps - 1

    std::size_t b_start(std::size_t n) const { return n + guard; }
    std::size_t required_rx(std::size_t n) const { return 2 * n + guard + num_taps - 1; }
};

inline std::vector<cd> golay_preamble(const GolayPair &p, std::size_t guard)
{
    std::vector<cd> tx;
    tx.reserve(2 * p.size() + guard);
    for (int v : p.a)
        tx.emplace_back(static_cast<double>(v), 0.0);
    tx.insert(tx.end(), guard, cd{0.0, 0.0});
    for (int v : p.b)
        tx.emplace_back(static_cast<double>(v), 0.0);
    return tx;
}

// Linear convolution of a transmitted stream with a tapped-delay-line channel.
inline std::vector<cd> propagate(std::span<const cd> tx, std::span<const cd> channel)
{
    if (tx.empty() || channel.empty())
        return {};
    std::vector<cd> rx(tx.size() + channel.size() - 1, cd{0.0, 0.0});
    for (std::size_t i = 0; i < tx.size(); ++i)
    {
        if (tx[i] == cd{0.0, 0.0})
            continue;
        for (std::size_t l = 0; l < channel.size(); ++l)
            rx[i + l] += tx[i] * channel[l];
    }
    return rx;
}

inline Cir estimate_cir(std::span<const cd> rx, const GolayPair &pair, double tap_spacing_s,
                        const PreambleLayout &layout = {})
{
    const std::size_t n = pair.size();
    if (n == 0 || pair.b.size() != n)
        throw LengthError("estimate_cir: invalid Golay pair");
    if (layout.num_taps == 0)
        throw LengthError("estimate_cir: num_taps must be positive");
    if (layout.guard + 1 < layout.num_taps)
        throw LengthError("estimate_cir: guard shorter than the channel span");
    if (rx.size() < layout.required_rx(n))
        throw LengthError("estimate_cir: received stream shorter than the preamble span");
    if (!(tap_spacing_s > 0.0))
        throw DomainError("estimate_cir: tap spacing must be positive");

    Cir cir;
    cir.tap_spacing_s = tap_spacing_s;
    cir.taps.assign(layout.num_taps, cd{0.0, 0.0});
    const std::size_t b0 = layout.b_start(n);
    const double scale = 1.0 / (2.0 * static_cast<double>(n));
    for (std::size_t l = 0; l < layout.num_taps; ++l)
    {
        cd acc{0.0, 0.0};
        // Real bipolar sequences: conjugation is a no-op.
        for (std::size_t i = 0; i < n; ++i)
        {
            acc += static_cast<double>(pair.a[i]) * rx[i + l];
            acc += static_cast<double>(pair.b[i]) * rx[b0 + i + l];
        }
        cir.taps[l] = acc * scale;
    }
    return cir;
}

// Transmit the preamble through `channel` and estimate it back (noiseless).
inline Cir sound(const Cir &channel, const GolayPair &pair)
{
    const PreambleLayout layout{channel.size(), channel.size()};
    const auto tx = golay_preamble(pair, layout.guard);
    const auto rx = propagate(tx, channel.taps);
    Cir est = estimate_cir(rx, pair, channel.tap_spacing_s, layout);
    est.delay_offset_s = channel.delay_offset_s;
    est.kind = channel.kind;
    est.steering_deg = channel.steering_deg;
    return est;
}

} // namespace isacgeo
