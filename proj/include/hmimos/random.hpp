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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "hmimos/common.hpp"

namespace hmimos
{
    using Rng = std::mt19937_64;

    // Stream tags used to derive independent substreams from a master seed.
    enum class StreamTag : std::uint64_t
    {
        statistics = 1,
        init = 2,
        training_sample = 3,
        evaluation_slot = 4,
        random_amplitude = 5,
        baseline_init = 6,
        interval = 7,
    };

    // SplitMix64 finalizer.
    std::uint64_t mix64(std::uint64_t x);

    // Deterministic child seed of `master` for the given path of tags. The
    // result depends only on its inputs, so substreams can be created in any
    // order (or concurrently) and reproduce the serial draws.
    std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

    Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path);

    inline std::uint64_t tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

    // Circularly-symmetric complex Gaussian with E|x|^2 = std_dev^2.
    cplx complex_gaussian(Rng &rng, double std_dev);

    double uniform(Rng &rng, double lo, double hi);
} // namespace hmimos
