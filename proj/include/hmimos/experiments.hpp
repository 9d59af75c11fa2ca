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

#include "hmimos/config.hpp"

namespace hmimos
{
    // Geometry shared by every run of one configuration.
    struct Setup
    {
        ExperimentConfig config;
        std::uint64_t hash = 0;
        SurfacePanel tx;
        SurfacePanel rx;
        PhaseCoupling coupling;
    };

    Setup make_setup(const ExperimentConfig &config);

    // One long interval: statistical CSI, its sampler and the T_s evaluation
    // channels. Interval i is identical for every scheme and every delta.
    struct Interval
    {
        int index = 0;
        std::uint64_t seed = 0;
        ChannelSampler sampler;
        std::vector<ChannelRealization> slots;

        LongTermProblem problem(const Setup &setup) const;
        SlotSet slot_set(const Setup &setup, const QosSpec &qos) const;
    };

    Interval make_interval(const Setup &setup, int index);

    CsscaConfig cssca_for(const Setup &setup, const QosSpec &qos, bool fixed_samples = false);
    AlternationConfig alternation_for(const Setup &setup, std::uint64_t seed);

    struct ConvergenceRun
    {
        double delta = 0.0;
        int replication = 0;
        std::uint64_t seed = 0;
        LongTermResult result;
    };

    struct ConvergenceReport
    {
        std::vector<double> deltas;
        std::vector<ConvergenceRun> runs;     // delta-major
        std::vector<double> mean_final_power; // per delta, average of the final estimate over replications [W]
    };

    ConvergenceReport run_convergence(const Setup &setup, const std::vector<double> &deltas, int replications);

    struct ComparisonRow
    {
        double delta = 0.0;
        BaselineResult result; // pooled over intervals
    };

    struct ComparisonReport
    {
        std::vector<ComparisonRow> rows; // delta-major, schemes in scheme_names() order
        int intervals = 0;
    };

    // Proposed method and the configured baselines on shared slots. An empty
    // `deltas` compares at the configured per-user thresholds.
    ComparisonReport run_comparison(const Setup &setup, const std::vector<double> &deltas, int intervals);

    const BaselineResult *find_row(const ComparisonReport &report, double delta, const std::string &scheme);

    // Power ordering of the proposed method against each baseline at one delta.
    struct OrderingCheck
    {
        std::string name;
        double proposed_dbm = 0.0;
        double other_dbm = 0.0;
        bool passed = false;
    };

    // proposed <= ots, sdma, tts_fixed; proposed + 3 dB <= random_amplitude;
    // |proposed - ao| <= 1.5 dB. Schemes missing from the report are skipped.
    std::vector<OrderingCheck> ordering_checks(const ComparisonReport &report, double delta);

    struct QuantRow
    {
        int replication = 0;
        int bits = 0; // 0: unquantized
        double power_w = 0.0;
        double mean_se = 0.0;
        double violation_rate = 0.0;
        double power_gap_db = 0.0; // |10 log10(P_q / P)|
        double se_gap = 0.0;       // mean |SE_q - SE| over slots and users
    };

    struct QuantReport
    {
        std::vector<QuantRow> rows;
        std::vector<int> bits;
        std::vector<double> mean_power_gap_db; // per bits, over replications
        std::vector<double> mean_se_gap;
    };

    QuantReport run_quant_sweep(const Setup &setup, int replications);

    // Writers; every file carries the config hash and master seed.
    void write_convergence(const Setup &setup, const ConvergenceReport &report, const std::string &dir);
    void write_comparison(const Setup &setup, const ComparisonReport &report, const std::string &dir,
                          const std::string &stem);
    void write_quant(const Setup &setup, const QuantReport &report, const std::string &dir);

    // Shortest round-trip decimal form, locale independent.
    std::string format_number(double x);
} // namespace hmimos
