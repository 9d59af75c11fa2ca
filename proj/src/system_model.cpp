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

#include "hmimos/system_model.hpp"

#include <cmath>

namespace hmimos
{
    void validate_state(const BeampatternState &state)
    {
        require(state.alpha.size() > 0, "state: empty alpha");
        require(state.alpha.minCoeff() >= 0.0 && state.alpha.maxCoeff() <= 1.0, "state: alpha outside [0,1]");
        require(state.v.size() > 0, "state: empty v");
        require(state.v.minCoeff() >= 0.0 && state.v.maxCoeff() <= 1.0, "state: v outside [0,1]");
    }

    void validate_qos(const QosSpec &qos)
    {
        require(qos.delta.size() > 0, "qos: empty delta");
        require(qos.delta.minCoeff() >= 0.0, "qos: delta must be non-negative");
        require(qos.sigma2 > 0.0, "qos: sigma2 must be positive");
    }

    VectorXcd effective_rx_channel(const VectorXd &v_u, const VectorXcd &beta, const MatrixXcd &h_u)
    {
        require(v_u.size() == beta.size() && h_u.rows() == beta.size(),
                "effective_rx_channel: shape mismatch");
        const VectorXcd bv = beta.conjugate().cwiseProduct(v_u.cast<cplx>());
        return h_u.adjoint() * bv;
    }

    VectorXcd effective_rx_channel(int u, const BeampatternState &state, const VectorXcd &beta,
                                   const ChannelRealization &channels)
    {
        require(u >= 0 && u < channels.num_users() && u < state.v.cols(), "effective_rx_channel: bad user index");
        return effective_rx_channel(state.v.col(u), beta, channels.h[u]);
    }

    MatrixXcd effective_gain_matrix(const BeampatternState &state, const MatrixXcd &theta, const VectorXcd &beta,
                                    const ChannelRealization &channels)
    {
        const int num_users = channels.num_users();
        require(state.v.cols() == num_users, "effective_gain_matrix: v has wrong column count");
        require(theta.rows() == state.alpha.size(), "effective_gain_matrix: theta/alpha mismatch");

        MatrixXcd g(num_users, theta.cols());
        for (int u = 0; u < num_users; ++u)
        {
            const VectorXcd h = effective_rx_channel(u, state, beta, channels);
            const VectorXcd row = h.conjugate().cwiseProduct(state.alpha.cast<cplx>());
            g.row(u) = row.transpose() * theta;
        }
        return g;
    }

    VectorXd sinr_from_streams(const MatrixXcd &streams, const VectorXd &v_norm2, double sigma2)
    {
        const Eigen::Index num_users = streams.rows();
        VectorXd out(num_users);
        for (Eigen::Index u = 0; u < num_users; ++u)
        {
            const double signal = std::norm(streams(u, u));
            double interference = 0.0;
            for (Eigen::Index up = 0; up < streams.cols(); ++up)
                if (up != u)
                    interference += std::norm(streams(u, up));
            const double denom = interference + v_norm2(u) * sigma2;
            out(u) = denom > 0.0 ? signal / denom : 0.0;
        }
        return out;
    }

    namespace
    {
        VectorXd column_norms2(const MatrixXd &v)
        {
            return v.colwise().squaredNorm().transpose();
        }
    } // namespace

    double sinr(int u, const BeampatternState &state, const Precoder &precoder, const ChannelRealization &channels,
                const MatrixXcd &theta, const VectorXcd &beta, const QosSpec &qos)
    {
        require(u >= 0 && u < precoder.w.cols(), "sinr: bad user index");
        const VectorXcd h = effective_rx_channel(u, state, beta, channels);
        const VectorXcd ha = h.conjugate().cwiseProduct(state.alpha.cast<cplx>());

        double signal = 0.0;
        double interference = 0.0;
        for (Eigen::Index up = 0; up < precoder.w.cols(); ++up)
        {
            const VectorXcd tw = theta * precoder.w.col(up);
            const double p = std::norm(ha.cwiseProduct(tw).sum());
            (up == u ? signal : interference) += p;
        }
        const double denom = interference + state.v.col(u).squaredNorm() * qos.sigma2;
        return denom > 0.0 ? signal / denom : 0.0;
    }

    double sinr_matrix_form(int u, const BeampatternState &state, const Precoder &precoder,
                            const ChannelRealization &channels, const MatrixXcd &theta, const VectorXcd &beta,
                            const QosSpec &qos)
    {
        require(u >= 0 && u < precoder.w.cols(), "sinr_matrix_form: bad user index");
        const MatrixXcd b = beta.asDiagonal();
        const MatrixXcd a = state.alpha.cast<cplx>().asDiagonal();
        const VectorXcd v = state.v.col(u).cast<cplx>();
        const Eigen::RowVectorXcd left = v.adjoint() * b * channels.h[u] * a * theta;
        const MatrixXcd amplitudes = left * precoder.w;

        double signal = 0.0;
        double interference = 0.0;
        for (Eigen::Index up = 0; up < precoder.w.cols(); ++up)
            (up == u ? signal : interference) += std::norm(amplitudes(0, up));
        const double noise = (v.adjoint() * b).squaredNorm() * qos.sigma2;
        const double denom = interference + noise;
        return denom > 0.0 ? signal / denom : 0.0;
    }

    double spectral_efficiency(int u, const BeampatternState &state, const Precoder &precoder,
                               const ChannelRealization &channels, const MatrixXcd &theta, const VectorXcd &beta,
                               const QosSpec &qos)
    {
        return std::log2(1.0 + sinr(u, state, precoder, channels, theta, beta, qos));
    }

    double transmit_power(const BeampatternState &state, const Precoder &precoder, const MatrixXcd &theta)
    {
        require(theta.rows() == state.alpha.size() && theta.cols() == precoder.w.rows(),
                "transmit_power: shape mismatch");
        double p = 0.0;
        for (Eigen::Index u = 0; u < precoder.w.cols(); ++u)
            p += (theta * precoder.w.col(u)).cwiseProduct(state.alpha.cast<cplx>()).squaredNorm();
        return p;
    }

    double transmit_power_trace(const BeampatternState &state, const Precoder &precoder, const MatrixXcd &theta)
    {
        const MatrixXcd a = state.alpha.cast<cplx>().asDiagonal();
        const MatrixXcd x = a * theta * precoder.w;
        return (x * x.adjoint()).trace().real();
    }

    SlotMetrics evaluate_slot(const BeampatternState &state, const Precoder &precoder,
                              const ChannelRealization &channels, const MatrixXcd &theta, const VectorXcd &beta,
                              const QosSpec &qos)
    {
        SlotMetrics m;
        m.power = transmit_power(state, precoder, theta);
        const MatrixXcd g = effective_gain_matrix(state, theta, beta, channels);
        m.sinr = sinr_from_streams(g * precoder.w, column_norms2(state.v), qos.sigma2);
        m.se = m.sinr.unaryExpr([](double s) { return std::log2(1.0 + s); });
        return m;
    }
} // namespace hmimos
