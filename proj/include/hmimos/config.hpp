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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hmimos/baselines.hpp"
#include "hmimos/quantization.hpp"

namespace hmimos
{
    nlohmann::json panel_to_json(const PanelSpec &spec);
    PanelSpec panel_from_json(const nlohmann::json &j);

    nlohmann::json scenario_to_json(const Scenario &scenario);
    Scenario scenario_from_json(const nlohmann::json &j);

    struct SeedConfig
    {
        std::uint64_t master = 1;
        int replications = 5;
    };

    struct QuantSweepConfig
    {
        double mu = 255.0;
        std::vector<int> bits{2, 3, 4, 6, 8, 16};
        ComplexQuantMode complex_mode = ComplexQuantMode::real_imag;
    };

    struct ExperimentConfig
    {
        std::string profile = "table1";
        Scenario scenario;
        PanelSpec tx;
        PanelSpec rx;
        CsscaConfig cssca; // cssca.qos is filled per run

        // One value for every user, or one per user.
        std::vector<double> delta_bits_per_hz{1.0};
        std::vector<double> convergence_deltas{0.5, 1.0, 2.0, 3.0};
        std::vector<double> sweep_deltas{0.0, 0.5, 1.0, 2.0, 3.0};

        int slots_per_interval = 10; // T_s
        int intervals = 10;          // evaluation intervals per comparison point
        SeedConfig seeds;
        QuantSweepConfig quant;
        std::vector<std::string> baselines{"ao", "ots", "tts_fixed", "random_amplitude", "sdma"};
        int ao_max_alternations = 30;
        double ao_tol = 1e-3;

        std::string output_dir = "out";
    };

    // Built-in profiles: "table1" (full size) and "ci" (reduced).
    ExperimentConfig profile_config(const std::string &name);
    std::vector<std::string> scheme_names();

    void validate_config(const ExperimentConfig &config);

    nlohmann::json config_to_json(const ExperimentConfig &config);
    // Fields missing from `j` keep the values of `base`.
    ExperimentConfig config_from_json(const nlohmann::json &j, const ExperimentConfig &base);

    // Profile defaults overlaid with the JSON file at `path`, if given.
    ExperimentConfig load_config(const std::string &profile, const std::optional<std::string> &path);

    // FNV-1a over the canonical JSON of every field except output_dir.
    std::uint64_t config_hash(const ExperimentConfig &config);
    std::string hash_hex(std::uint64_t hash);

    // QoS with the configured thresholds (or `delta` for every user).
    QosSpec make_qos(const ExperimentConfig &config);
    QosSpec make_qos(const ExperimentConfig &config, double delta);
} // namespace hmimos
