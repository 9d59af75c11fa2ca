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

#include "hmimos/geometry.hpp"
#include "hmimos/random.hpp"

namespace hmimos
{
    struct Scenario
    {
        int num_users = 4;
        double bs_height_m = 25.0;
        double ue_height_m = 1.5;
        double max_horizontal_distance_m = 10.0;
        int num_nlos_paths = 2;
        double carrier_frequency_hz = 30e9;
        double bandwidth_hz = 100e6;
        double noise_psd_dbm_hz = -169.0;
    };

    void validate_scenario(const Scenario &scenario);

    // Departure (theta, psi) or arrival (omega, phi) angle pair in radians.
    struct AnglePair
    {
        double azimuth = 0.0;
        double elevation = 0.0;
    };

    struct NlosPath
    {
        AnglePair aod;
        AnglePair aoa;
    };

    struct UserCsi
    {
        cplx los_gain{};
        AnglePair los_aod;
        AnglePair los_aoa;
        std::vector<NlosPath> nlos;
        double nlos_std = 0.0;
        double horizontal_distance_m = 0.0;
        double d3d_m = 0.0;
    };

    using StatisticalCsi = std::vector<UserCsi>;

    // One M x N matrix per user.
    struct ChannelRealization
    {
        std::vector<MatrixXcd> h;

        int num_users() const { return static_cast<int>(h.size()); }
    };

    VectorXcd steering_vector(const SurfacePanel &panel, double azimuth, double elevation);
    inline VectorXcd steering_vector_tx(const SurfacePanel &panel, double theta, double psi)
    {
        return steering_vector(panel, theta, psi);
    }
    inline VectorXcd steering_vector_rx(const SurfacePanel &panel, double omega, double phi)
    {
        return steering_vector(panel, omega, phi);
    }

    double los_path_loss_db(double d3d_m);

    // Noise power in watts for a PSD in dBm/Hz over `bandwidth_hz`.
    double noise_power(double noise_psd_dbm_hz, double bandwidth_hz);

    StatisticalCsi draw_statistical_csi(const Scenario &scenario, Rng &rng);

    MatrixXcd sample_user_channel(const UserCsi &stat, const SurfacePanel &tx, const SurfacePanel &rx, Rng &rng);
    ChannelRealization sample_channel(const StatisticalCsi &stat, const SurfacePanel &tx, const SurfacePanel &rx,
                                      Rng &rng);

    // Caches the LoS term and the NLoS outer products of one long interval so
    // that a sample only costs L + 1 scaled matrix additions per user. Draws
    // match sample_channel() for the same stream.
    class ChannelSampler
    {
    public:
        ChannelSampler(const StatisticalCsi &stat, const SurfacePanel &tx, const SurfacePanel &rx);

        ChannelRealization sample(Rng &rng) const;
        ChannelRealization los_only() const;

        int num_users() const { return static_cast<int>(users_.size()); }
        int rx_size() const { return rx_size_; }
        int tx_size() const { return tx_size_; }

    private:
        struct UserTerms
        {
            MatrixXcd los;
            std::vector<MatrixXcd> nlos_outer;
            double nlos_std = 0.0;
        };
        std::vector<UserTerms> users_;
        int rx_size_ = 0;
        int tx_size_ = 0;
    };

    // Raw dump: one JSON header line followed by little-endian float64 pairs
    // (re, im), users stacked, each matrix column-major.
    void write_channel_dump(const std::string &path, const ChannelRealization &channels, std::uint64_t seed);
    ChannelRealization read_channel_dump(const std::string &path, std::uint64_t *seed = nullptr);
} // namespace hmimos
