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

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hmimos
{
    using cplx = std::complex<double>;

    using Eigen::MatrixXcd;
    using Eigen::MatrixXd;
    using Eigen::VectorXcd;
    using Eigen::VectorXd;
    using Vec3 = Eigen::Vector3d;

    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kSpeedOfLight = 299792458.0; // [m/s]

    // Raised for violated preconditions and mismatched shapes.
    class InvalidArgument : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Raised when a numerical routine cannot produce a trustworthy result.
    class SolverError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    inline void require(bool condition, const std::string &message)
    {
        if (!condition)
            throw InvalidArgument(message);
    }

    inline double watts_to_dbm(double watts)
    {
        return 10.0 * std::log10(watts * 1000.0);
    }

    inline double dbm_to_watts(double dbm)
    {
        return std::pow(10.0, (dbm - 30.0) / 10.0);
    }
} // namespace hmimos
