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

#include "hmimos/precoder.hpp"

namespace hmimos
{
    struct CheckResult
    {
        std::string name;
        bool passed = false;
        double worst = 0.0;     // worst observed error of the check's metric
        double tolerance = 0.0; // pass threshold for `worst`
        std::string detail;
    };

    struct ValidationOptions
    {
        std::uint64_t seed = 7;
        int gradient_points = 100;
        int identity_points = 100;
        int socp_instances = 50;
        // Negative control: scales one analytic gradient entry by (1 + 1e-3).
        bool perturb_gradient = false;
    };

    // Minimum of sum_u ||D w_u||^2 under the instance's SINR targets, from the
    // uplink-downlink duality fixed point. Sets `feasible` to false when the
    // iteration diverges.
    double duality_min_power(const ShortTermInstance &instance, bool &feasible);

    // Two users with the same effective channel and unit SINR targets.
    ShortTermInstance colinear_instance();

    CheckResult check_gradients(const ValidationOptions &options);
    CheckResult check_power_identity(const ValidationOptions &options);
    CheckResult check_sinr_forms(const ValidationOptions &options);
    CheckResult check_update_box(const ValidationOptions &options);
    CheckResult check_surrogate_consistency(const ValidationOptions &options);
    CheckResult check_socp_oracle(const ValidationOptions &options);
    CheckResult check_constraint_activeness(const ValidationOptions &options);
    CheckResult check_colinear_infeasible(const ValidationOptions &options);
    CheckResult check_quantizer(const ValidationOptions &options);

    std::vector<CheckResult> run_validation(const ValidationOptions &options);
} // namespace hmimos
