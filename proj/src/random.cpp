// SPDX-License-Identifier: Apache-2.0
//
// hmimos-tts: two-timescale beamforming for holographic MIMO surfaces
// Copyright (C) 2026 The hmimos-tts authors
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

#include "hmimos/random.hpp"

#include <cmath>

namespace hmimos
{
    std::uint64_t mix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
    {
        std::uint64_t state = mix64(master);
        for (std::uint64_t p : path)
            state = mix64(state ^ mix64(p + 0x632be59bd9b4e019ULL));
        return state;
    }

    Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path)
    {
        return Rng(derive_seed(master, path));
    }

    // The standard distributions are implementation-defined across library
    // vendors, so the draws below are written out from raw 64-bit words.
    double uniform(Rng &rng, double lo, double hi)
    {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    cplx complex_gaussian(Rng &rng, double std_dev)
    {
        // Box-Muller; u1 in (0, 1] keeps the log finite.
        const double u1 = 1.0 - uniform(rng, 0.0, 1.0);
        const double u2 = uniform(rng, 0.0, 1.0);
        const double r = std::sqrt(-std::log(u1)) * std_dev; // sqrt(-2 ln u1) * std/sqrt(2)
        return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
    }
} // namespace hmimos
