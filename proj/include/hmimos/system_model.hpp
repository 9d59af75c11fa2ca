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

#include "hmimos/channel.hpp"

namespace hmimos
{
    // Long-term variables: alpha in [0,1]^N, columns of v in [0,1]^M.
    struct BeampatternState
    {
        VectorXd alpha;
        MatrixXd v; // M x U
    };

    struct Precoder
    {
        MatrixXcd w; // K x U
    };

    struct QosSpec
    {
        VectorXd delta; // per-user SE thresholds [bit/s/Hz]
        double sigma2 = 0.0; // noise power [W]
    };

    void validate_state(const BeampatternState &state);
    void validate_qos(const QosSpec &qos);

    // h_u = H_u^H B^H v_u (length N).
    VectorXcd effective_rx_channel(const VectorXd &v_u, const VectorXcd &beta, const MatrixXcd &h_u);
    VectorXcd effective_rx_channel(int u, const BeampatternState &state, const VectorXcd &beta,
                                   const ChannelRealization &channels);

    // U x K matrix whose row u is h_u^H diag(alpha) Theta. Stream amplitudes
    // are then S = G W with S(u, u') = h_u^H diag(Theta w_u') alpha.
    MatrixXcd effective_gain_matrix(const BeampatternState &state, const MatrixXcd &theta, const VectorXcd &beta,
                                    const ChannelRealization &channels);

    // SINR of every user given the stream amplitude matrix S and ||v_u||^2.
    VectorXd sinr_from_streams(const MatrixXcd &streams, const VectorXd &v_norm2, double sigma2);

    double sinr(int u, const BeampatternState &state, const Precoder &precoder, const ChannelRealization &channels,
                const MatrixXcd &theta, const VectorXcd &beta, const QosSpec &qos);

    // Same quantity evaluated as |v_u^H B H_u A Theta w|^2 terms, without the
    // diag rewriting. Kept as an independent route for identity checks.
    double sinr_matrix_form(int u, const BeampatternState &state, const Precoder &precoder,
                            const ChannelRealization &channels, const MatrixXcd &theta, const VectorXcd &beta,
                            const QosSpec &qos);

    double spectral_efficiency(int u, const BeampatternState &state, const Precoder &precoder,
                               const ChannelRealization &channels, const MatrixXcd &theta, const VectorXcd &beta,
                               const QosSpec &qos);

    // sum_u ||diag(Theta w_u) alpha||^2
    double transmit_power(const BeampatternState &state, const Precoder &precoder, const MatrixXcd &theta);
    // tr(A Theta W W^H Theta^H A^H)
    double transmit_power_trace(const BeampatternState &state, const Precoder &precoder, const MatrixXcd &theta);

    struct SlotMetrics
    {
        double power = 0.0;
        VectorXd sinr;
        VectorXd se;
    };

    SlotMetrics evaluate_slot(const BeampatternState &state, const Precoder &precoder,
                              const ChannelRealization &channels, const MatrixXcd &theta, const VectorXcd &beta,
                              const QosSpec &qos);
} // namespace hmimos
