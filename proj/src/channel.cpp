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

#include "hmimos/channel.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace hmimos
{
    void validate_scenario(const Scenario &s)
    {
        require(s.num_users >= 1, "scenario: num_users must be >= 1");
        require(s.num_nlos_paths >= 0, "scenario: num_nlos_paths must be >= 0");
        require(s.bs_height_m > 0.0 && s.ue_height_m > 0.0, "scenario: heights must be positive");
        require(s.max_horizontal_distance_m > 0.0, "scenario: max horizontal distance must be positive");
        require(s.carrier_frequency_hz > 0.0 && s.bandwidth_hz > 0.0, "scenario: frequencies must be positive");
    }

    VectorXcd steering_vector(const SurfacePanel &panel, double azimuth, double elevation)
    {
        const double k = panel.wavenumber();
        const double step_i = panel.spacing * std::sin(azimuth) * std::cos(elevation);
        const double step_j = panel.spacing * std::cos(elevation);
        VectorXcd a(panel.num_elements());
        for (int i = 0; i < panel.rows; ++i)
            for (int j = 0; j < panel.rows; ++j)
                a(i * panel.rows + j) = std::polar(1.0, k * (i * step_i + j * step_j));
        return a;
    }

    double los_path_loss_db(double d3d_m)
    {
        require(d3d_m > 0.0, "los_path_loss_db: distance must be positive");
        return 61.4 + 20.0 * std::log10(d3d_m);
    }

    double noise_power(double noise_psd_dbm_hz, double bandwidth_hz)
    {
        require(bandwidth_hz > 0.0, "noise_power: bandwidth must be positive");
        return std::pow(10.0, (noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) - 30.0) / 10.0);
    }

    StatisticalCsi draw_statistical_csi(const Scenario &scenario, Rng &rng)
    {
        validate_scenario(scenario);
        const double dh = scenario.bs_height_m - scenario.ue_height_m;

        StatisticalCsi out(static_cast<std::size_t>(scenario.num_users));
        for (UserCsi &user : out)
        {
            // Uniform on the disk: r = R sqrt(u).
            const double r = scenario.max_horizontal_distance_m * std::sqrt(uniform(rng, 0.0, 1.0));
            const double azimuth = uniform(rng, -kPi, kPi);
            const double gain_phase = uniform(rng, 0.0, 2.0 * kPi);

            user.horizontal_distance_m = r;
            user.d3d_m = std::hypot(r, dh);
            const double amplitude = std::pow(10.0, -los_path_loss_db(user.d3d_m) / 20.0);
            user.los_gain = std::polar(amplitude, gain_phase);
            user.nlos_std = std::sqrt(0.1) * amplitude;

            const double elevation = std::atan2(dh, r);
            user.los_aod = {azimuth, elevation};
            user.los_aoa = {std::remainder(azimuth + kPi, 2.0 * kPi), elevation};

            user.nlos.resize(static_cast<std::size_t>(scenario.num_nlos_paths));
            for (NlosPath &path : user.nlos)
            {
                path.aod.azimuth = uniform(rng, -0.5 * kPi, 0.5 * kPi);
                path.aod.elevation = uniform(rng, 0.0, kPi);
                path.aoa.azimuth = uniform(rng, -0.5 * kPi, 0.5 * kPi);
                path.aoa.elevation = uniform(rng, 0.0, kPi);
            }
        }
        return out;
    }

    namespace
    {
        MatrixXcd outer(const SurfacePanel &tx, const SurfacePanel &rx, const AnglePair &aod, const AnglePair &aoa)
        {
            return steering_vector_rx(rx, aoa.azimuth, aoa.elevation) *
                   steering_vector_tx(tx, aod.azimuth, aod.elevation).adjoint();
        }
    } // namespace

    MatrixXcd sample_user_channel(const UserCsi &stat, const SurfacePanel &tx, const SurfacePanel &rx, Rng &rng)
    {
        MatrixXcd h = stat.los_gain * outer(tx, rx, stat.los_aod, stat.los_aoa);
        for (const NlosPath &path : stat.nlos)
            h += complex_gaussian(rng, stat.nlos_std) * outer(tx, rx, path.aod, path.aoa);
        return h;
    }

    ChannelRealization sample_channel(const StatisticalCsi &stat, const SurfacePanel &tx, const SurfacePanel &rx,
                                      Rng &rng)
    {
        ChannelRealization out;
        out.h.reserve(stat.size());
        for (const UserCsi &user : stat)
            out.h.push_back(sample_user_channel(user, tx, rx, rng));
        return out;
    }

    ChannelSampler::ChannelSampler(const StatisticalCsi &stat, const SurfacePanel &tx, const SurfacePanel &rx)
        : rx_size_(rx.num_elements()), tx_size_(tx.num_elements())
    {
        users_.reserve(stat.size());
        for (const UserCsi &user : stat)
        {
            UserTerms terms;
            terms.los = user.los_gain * outer(tx, rx, user.los_aod, user.los_aoa);
            for (const NlosPath &path : user.nlos)
                terms.nlos_outer.push_back(outer(tx, rx, path.aod, path.aoa));
            terms.nlos_std = user.nlos_std;
            users_.push_back(std::move(terms));
        }
    }

    ChannelRealization ChannelSampler::sample(Rng &rng) const
    {
        ChannelRealization out;
        out.h.reserve(users_.size());
        for (const UserTerms &terms : users_)
        {
            MatrixXcd h = terms.los;
            for (const MatrixXcd &o : terms.nlos_outer)
                h += complex_gaussian(rng, terms.nlos_std) * o;
            out.h.push_back(std::move(h));
        }
        return out;
    }

    ChannelRealization ChannelSampler::los_only() const
    {
        ChannelRealization out;
        for (const UserTerms &terms : users_)
            out.h.push_back(terms.los);
        return out;
    }

    void write_channel_dump(const std::string &path, const ChannelRealization &channels, std::uint64_t seed)
    {
        require(!channels.h.empty(), "write_channel_dump: no users");
        nlohmann::json header;
        header["users"] = channels.num_users();
        header["rows"] = channels.h.front().rows();
        header["cols"] = channels.h.front().cols();
        header["dtype"] = "complex128";
        header["order"] = "column-major";
        header["seed"] = seed;

        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("write_channel_dump: cannot open " + path);
        out << header.dump() << '\n';
        for (const MatrixXcd &h : channels.h)
        {
            require(h.rows() == channels.h.front().rows() && h.cols() == channels.h.front().cols(),
                    "write_channel_dump: inconsistent shapes");
            out.write(reinterpret_cast<const char *>(h.data()),
                      static_cast<std::streamsize>(sizeof(cplx) * h.size()));
        }
    }

    ChannelRealization read_channel_dump(const std::string &path, std::uint64_t *seed)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("read_channel_dump: cannot open " + path);
        std::string line;
        std::getline(in, line);
        const auto header = nlohmann::json::parse(line);
        const int users = header.at("users").get<int>();
        const Eigen::Index rows = header.at("rows").get<Eigen::Index>();
        const Eigen::Index cols = header.at("cols").get<Eigen::Index>();
        if (seed)
            *seed = header.at("seed").get<std::uint64_t>();

        ChannelRealization out;
        for (int u = 0; u < users; ++u)
        {
            MatrixXcd h(rows, cols);
            in.read(reinterpret_cast<char *>(h.data()), static_cast<std::streamsize>(sizeof(cplx) * h.size()));
            if (!in)
                throw std::runtime_error("read_channel_dump: truncated file " + path);
            out.h.push_back(std::move(h));
        }
        return out;
    }
} // namespace hmimos
