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
#include <string>
#include <vector>

#include "hmimos/cssca.hpp"

namespace hmimos
{
    // One long interval: fixed geometry, QoS and the per-slot channels.
    struct SlotSet
    {
        MatrixXcd theta;
        VectorXcd beta;
        QosSpec qos;
        std::vector<ChannelRealization> slots;

        int num_slots() const { return static_cast<int>(slots.size()); }
    };

    struct BaselineResult
    {
        std::string name;
        double avg_power_watts = 0.0;
        VectorXd avg_se_per_user;
        double qos_violation_rate = 0.0;
        int slots = 0;
        int infeasible_slots = 0; // slots where the exact short-term problem had no solution
    };

    // Per-slot numbers behind a BaselineResult; kept so intervals can be pooled.
    struct SlotRecord
    {
        double power = 0.0;
        VectorXd se;
        bool infeasible = false;
    };

    BaselineResult summarize(const std::string &name, const std::vector<SlotRecord> &records, const VectorXd &delta);

    // Pools intervals of the same scheme, weighting every slot equally.
    BaselineResult pool_results(const std::vector<BaselineResult> &parts);

    // Settings of the per-slot alternating schemes.
    struct AlternationConfig
    {
        double eps0 = 0.01;
        double eps_u = 0.01;
        int max_alternations = 30;
        double tol = 1e-3; // relative power change
        SocpOptions socp;
        std::uint64_t seed = 0;
    };

    struct AlternationOutcome
    {
        BeampatternState state;
        Precoder precoder;
        double power = 0.0;
        int alternations = 0;
        bool infeasible = false; // final W from the regularized fallback
    };

    // Alternates the short-term W solve with one deterministic SCA step on
    // (alpha, V) built from the slot's true channel. Step j uses
    // gamma = 2 / (2 + j). Alpha stays fixed when `optimize_alpha` is false.
    AlternationOutcome alternate_slot(const AlternationConfig &config, const MatrixXcd &theta, const VectorXcd &beta,
                                      const QosSpec &qos, const ChannelRealization &channel,
                                      const BeampatternState &initial, bool optimize_alpha = true);

    // SOCP precoder at a fixed (alpha, V) in every slot.
    std::vector<SlotRecord> evaluate_fixed_state(const SlotSet &slots, const BeampatternState &state,
                                                 const SocpOptions &socp = {});
    // Frozen (alpha, V, W) evaluated on every slot.
    std::vector<SlotRecord> evaluate_frozen(const SlotSet &slots, const BeampatternState &state,
                                            const Precoder &precoder);

    struct AoRun
    {
        BaselineResult result;
        std::vector<BeampatternState> states; // per slot
    };

    // Per-slot alternating optimization with instantaneous CSI.
    AoRun run_ao(const SlotSet &slots, const AlternationConfig &config);
    // Alternation on the first slot, then everything frozen.
    BaselineResult run_ots(const SlotSet &slots, const AlternationConfig &config);
    // Random alpha per interval; V and W alternated per slot.
    BaselineResult run_random_amplitude(const SlotSet &slots, const AlternationConfig &config);
    // ZF precoding on the per-slot beampatterns produced by run_ao.
    BaselineResult run_sdma(const SlotSet &slots, const std::vector<BeampatternState> &ao_states);
    // Long-term CSSCA (fixed or resampled training set) then SOCP precoding per slot.
    BaselineResult run_two_timescale(const SlotSet &slots, const CsscaConfig &config, const LongTermProblem &problem,
                                     std::uint64_t seed, const std::string &name, LongTermResult *trained = nullptr);
} // namespace hmimos
