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

#include "hmimos/common.hpp"

namespace hmimos
{
    enum class FeedLayoutKind
    {
        grid,   // k_side x k_side feeds spanning the central half of the aperture
        center, // one feed at the panel origin
    };

    struct FeedLayout
    {
        FeedLayoutKind kind = FeedLayoutKind::center;
        int k_side = 1;

        static FeedLayout grid(int k_side) { return {FeedLayoutKind::grid, k_side}; }
        static FeedLayout center() { return {FeedLayoutKind::center, 1}; }
    };

    // Serializable description of a panel; build_panel() turns it into geometry.
    struct PanelSpec
    {
        int rows = 1;
        double spacing = 0.0;    // [m]
        double wavelength = 0.0; // [m]
        FeedLayout feeds{};
        double refractive_index = 1.0; // reference-wave index inside the waveguide
    };

    // Square HMIMOS panel in the z = 0 plane, centred at the origin.
    // Elements are stored row-major: element (i, j) has index i * rows + j,
    // with i running along x and j along y.
    struct SurfacePanel
    {
        int rows = 0;
        double spacing = 0.0;
        double wavelength = 0.0;
        double refractive_index = 1.0;
        std::vector<Vec3> element_positions;
        std::vector<Vec3> feed_positions;

        int num_elements() const { return static_cast<int>(element_positions.size()); }
        int num_feeds() const { return static_cast<int>(feed_positions.size()); }

        // Free-space wavenumber 2*pi/lambda.
        double wavenumber() const { return 2.0 * kPi / wavelength; }

        // Wavenumber of the feed-launched reference wave.
        double reference_wavenumber() const { return refractive_index * wavenumber(); }
    };

    SurfacePanel build_panel(int rows, double spacing, double wavelength, FeedLayout feed_layout,
                             double refractive_index = 1.0);
    SurfacePanel build_panel(const PanelSpec &spec);

    // Checks the SurfacePanel invariants; throws InvalidArgument on failure.
    void validate_panel(const SurfacePanel &panel);

    // N x K matrix with entries exp(-i k_f d_{n,k}), d_{n,k} the feed-to-element distance.
    MatrixXcd feed_phase_matrix(const SurfacePanel &panel);

    // Length-M vector exp(-i k_f d_m) for a single-feed (receive) panel.
    VectorXcd rx_phase_vector(const SurfacePanel &panel);

    // Holographic amplitude pattern steering towards `object_direction`:
    // per feed (cos(k_s . r_n - k_f d_{n,k}) + 1) / 2, averaged over the feeds.
    VectorXd holographic_amplitude(const SurfacePanel &panel, const Vec3 &object_direction);

    struct PhaseCoupling
    {
        MatrixXcd theta; // N x K, transmit panel
        VectorXcd beta;  // M, receive panel
    };

    PhaseCoupling phase_coupling(const SurfacePanel &tx, const SurfacePanel &rx);
} // namespace hmimos
