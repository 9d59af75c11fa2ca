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
#include <vector>

#include "hmimos/cssca.hpp"

namespace hmimos
{
    // Everything a training sample needs besides (alpha, V).
    struct BatchContext
    {
        const LongTermProblem *problem = nullptr;
        QosSpec qos;
        SocpOptions socp;
        std::uint64_t seed = 0;
        int t_h = 1;
        bool fixed_samples = false;
    };

    struct SampleOutcome
    {
        SampleValues values;
        SampleGradients grads;
        bool redrawn = false;  // first draw was infeasible
        bool fallback = false; // regularized ZF used
    };

    // Channel draw `attempt` of sample l at iteration t.
    ChannelRealization training_sample(const BatchContext &ctx, int t, int l, int attempt);

    SampleOutcome evaluate_sample(const BatchContext &ctx, const BeampatternState &state, int t, int l);

    struct BatchResult
    {
        CsscaEstimates mean; // sample averages of g0, gu and their gradients
        int infeasible = 0;
        int fallback = 0;
    };

    // Sums in sample order; the parallel kernel only distributes the
    // per-sample work and reproduces the serial result bit for bit.
    BatchResult reduce_batch(const std::vector<SampleOutcome> &outcomes);
    BatchResult evaluate_batch_serial(const BatchContext &ctx, const BeampatternState &state, int t);
    BatchResult evaluate_batch_parallel(const BatchContext &ctx, const BeampatternState &state, int t);

    // Number of OpenMP threads available to the parallel kernels (1 without OpenMP).
    int max_threads();
} // namespace hmimos
