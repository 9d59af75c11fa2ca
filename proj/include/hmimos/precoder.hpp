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

#include <vector>

#include "hmimos/socp.hpp"
#include "hmimos/system_model.hpp"

namespace hmimos
{
    struct ShortTermInstance
    {
        MatrixXcd d_matrix;                // N x K, diag(alpha) Theta
        std::vector<VectorXcd> eff_channels; // h_u, length N
        VectorXd eta;                      // 2^delta - 1
        VectorXd sigma_bar;                // ||v_u|| sigma

        int num_users() const { return static_cast<int>(eff_channels.size()); }
        int num_feeds() const { return static_cast<int>(d_matrix.cols()); }

        // U x K matrix with rows h_u^H D.
        MatrixXcd gain_matrix() const;
    };

    ShortTermInstance build_instance(const BeampatternState &state, const MatrixXcd &theta, const VectorXcd &beta,
                                     const ChannelRealization &channels, const QosSpec &qos);

    enum class PrecoderStatus
    {
        optimal,
        infeasible,
        solver_failure,
    };

    const char *to_string(PrecoderStatus status);

    struct PrecoderResult
    {
        PrecoderStatus status = PrecoderStatus::solver_failure;
        Precoder precoder;
        double power = 0.0; // sum_u ||D w_u||^2
        int solver_iterations = 0;

        bool ok() const { return status == PrecoderStatus::optimal; }
    };

    // Power-minimizing precoder with SINR_u >= eta_u for every user.
    PrecoderResult solve_precoder(const ShortTermInstance &instance, const SocpOptions &options = {});

    // The conic program solved by solve_precoder, in its scaled variables.
    SocpProblem precoder_socp(const ShortTermInstance &instance);

    // Zero-forcing with per-stream power meeting eta_u exactly. Returns
    // `infeasible` when the gain matrix is rank deficient.
    PrecoderResult zf_precoder(const ShortTermInstance &instance);

    // Regularized ZF scaled so every stream gain meets eta_u; used when the
    // exact problem is infeasible. No SINR guarantee.
    PrecoderResult rzf_precoder(const ShortTermInstance &instance);

    // sum_u ||D w_u||^2
    double instance_power(const ShortTermInstance &instance, const Precoder &precoder);

    // SINR of each user under the instance's model.
    VectorXd instance_sinr(const ShortTermInstance &instance, const Precoder &precoder);
} // namespace hmimos
