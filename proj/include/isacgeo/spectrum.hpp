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

// Baseband spectrum helpers shared by the forward model and the extractor.
//
// A CIR of N taps is the inverse DFT of N frequency bins centered on the
// carrier: bin indices k = -floor(N/2) ... ceil(N/2)-1. Using the centered
// labeling makes the continuous-delay interpolant h(t) the physically
// band-limited one.

#pragma once

#include "model.hpp"

#include <complex>
#include <span>
#include <vector>

namespace isacgeo::spectrum
{

using cd = std::complex<double>;

inline long bin_index(std::size_t i, std::size_t n)
{
    return static_cast<long>(i) - static_cast<long>(n / 2);
}

// exp(sign * j 2 pi m / N) for m = 0 ... N-1.
inline std::vector<cd> twiddles(std::size_t n, double sign)
{
    std::vector<cd> w(n);
    for (std::size_t m = 0; m < n; ++m)
        w[m] = std::polar(1.0, sign * 2.0 * kPi * static_cast<double>(m) / static_cast<double>(n));
    return w;
}

namespace detail
{
inline std::size_t wrap(long v, std::size_t n)
{
    const long m = v % static_cast<long>(n);
    return static_cast<std::size_t>(m < 0 ? m + static_cast<long>(n) : m);
}
} // namespace detail

// H[k] = sum_n h[n] exp(-j 2 pi k n / N) over centered k (index i <-> k = i - N/2).
inline std::vector<cd> forward(std::span<const cd> h)
{
    const std::size_t n = h.size();
    const auto w = twiddles(n, -1.0);
    std::vector<cd> out(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const long k = bin_index(i, n);
        cd acc = 0.0;
        for (std::size_t t = 0; t < n; ++t)
            acc += h[t] * w[detail::wrap(k * static_cast<long>(t), n)];
        out[i] = acc;
    }
    return out;
}

// h[n] = (1/N) sum_k H[k] exp(+j 2 pi k n / N).
inline std::vector<cd> inverse(std::span<const cd> big_h)
{
    const std::size_t n = big_h.size();
    const auto w = twiddles(n, 1.0);
    std::vector<cd> out(n);
    for (std::size_t t = 0; t < n; ++t)
    {
        cd acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += big_h[i] * w[detail::wrap(bin_index(i, n) * static_cast<long>(t), n)];
        out[t] = acc / static_cast<double>(n);
    }
    return out;
}

// Band-limited interpolant at fractional tap position t.
inline cd evaluate(std::span<const cd> big_h, double t)
{
    const std::size_t n = big_h.size();
    const double w = 2.0 * kPi * t / static_cast<double>(n);
    cd acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += big_h[i] * std::polar(1.0, w * static_cast<double>(bin_index(i, n)));
    return acc / static_cast<double>(n);
}

// Hann taper over the centered bins, scaled to unit mean so that an isolated
// path keeps its peak amplitude.
inline std::vector<double> hann_taper(std::size_t n)
{
    std::vector<double> w(n, 1.0);
    if (n < 2)
        return w;
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 1.0 + std::cos(2.0 * kPi * static_cast<double>(bin_index(i, n)) / static_cast<double>(n));
    return w;
}

} // namespace isacgeo::spectrum
