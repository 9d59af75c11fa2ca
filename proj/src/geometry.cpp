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

#include "hmimos/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hmimos
{
    namespace
    {
        double grid_coordinate(int index, int count, double pitch)
        {
            return (static_cast<double>(index) - 0.5 * static_cast<double>(count - 1)) * pitch;
        }
    } // namespace

    SurfacePanel build_panel(int rows, double spacing, double wavelength, FeedLayout feed_layout,
                             double refractive_index)
    {
        require(rows >= 1, "build_panel: rows must be >= 1");
        require(spacing > 0.0, "build_panel: spacing must be positive");
        require(wavelength > 0.0, "build_panel: wavelength must be positive");
        require(refractive_index > 0.0, "build_panel: refractive index must be positive");
        require(spacing < 0.5 * wavelength,
                "build_panel: element spacing must be below half a wavelength");

        SurfacePanel panel;
        panel.rows = rows;
        panel.spacing = spacing;
        panel.wavelength = wavelength;
        panel.refractive_index = refractive_index;

        panel.element_positions.reserve(static_cast<std::size_t>(rows) * rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < rows; ++j)
                panel.element_positions.emplace_back(grid_coordinate(i, rows, spacing),
                                                     grid_coordinate(j, rows, spacing), 0.0);

        if (feed_layout.kind == FeedLayoutKind::center)
        {
            panel.feed_positions.emplace_back(0.0, 0.0, 0.0);
        }
        else
        {
            const int k_side = feed_layout.k_side;
            require(k_side >= 1, "build_panel: grid feed layout needs k_side >= 1");
            require(k_side <= rows, "build_panel: k_side^2 feeds do not fit within the aperture");
            // Uniform sub-grid over the central half of the aperture.
            const double half_extent = 0.25 * (rows - 1) * spacing;
            const double pitch = k_side > 1 ? 2.0 * half_extent / (k_side - 1) : 0.0;
            for (int i = 0; i < k_side; ++i)
                for (int j = 0; j < k_side; ++j)
                    panel.feed_positions.emplace_back(grid_coordinate(i, k_side, pitch),
                                                      grid_coordinate(j, k_side, pitch), 0.0);
        }

        validate_panel(panel);
        return panel;
    }

    SurfacePanel build_panel(const PanelSpec &spec)
    {
        return build_panel(spec.rows, spec.spacing, spec.wavelength, spec.feeds, spec.refractive_index);
    }

    void validate_panel(const SurfacePanel &panel)
    {
        require(panel.rows >= 1, "panel: rows must be >= 1");
        require(panel.num_elements() == panel.rows * panel.rows, "panel: element count must equal rows^2");
        require(panel.wavelength > 0.0 && panel.spacing > 0.0, "panel: non-positive dimensions");
        require(panel.spacing < 0.5 * panel.wavelength, "panel: spacing must be below half a wavelength");
        require(panel.num_feeds() >= 1, "panel: at least one feed is required");

        const double tol = 1e-9 * panel.spacing;
        const auto all_distinct = [tol](const std::vector<Vec3> &points) {
            for (std::size_t a = 0; a < points.size(); ++a)
                for (std::size_t b = a + 1; b < points.size(); ++b)
                    if ((points[a] - points[b]).norm() <= tol)
                        return false;
            return true;
        };
        require(all_distinct(panel.element_positions), "panel: element positions must be distinct");
        require(all_distinct(panel.feed_positions), "panel: feed positions must be distinct");
    }

    MatrixXcd feed_phase_matrix(const SurfacePanel &panel)
    {
        require(panel.num_feeds() >= 1, "feed_phase_matrix: panel has no feeds");
        const int n_el = panel.num_elements();
        const int n_feed = panel.num_feeds();
        const double k_f = panel.reference_wavenumber();

        MatrixXcd theta(n_el, n_feed);
        for (int k = 0; k < n_feed; ++k)
            for (int n = 0; n < n_el; ++n)
            {
                const double d = (panel.element_positions[n] - panel.feed_positions[k]).norm();
                theta(n, k) = std::polar(1.0, -k_f * d);
            }
        return theta;
    }

    VectorXcd rx_phase_vector(const SurfacePanel &panel)
    {
        require(panel.num_feeds() == 1, "rx_phase_vector: receive panel must have exactly one feed");
        return feed_phase_matrix(panel).col(0);
    }

    VectorXd holographic_amplitude(const SurfacePanel &panel, const Vec3 &object_direction)
    {
        require(std::abs(object_direction.norm() - 1.0) < 1e-9,
                "holographic_amplitude: object direction must have unit norm");
        const Vec3 k_s = panel.wavenumber() * object_direction;
        const double k_f = panel.reference_wavenumber();
        const int n_feed = panel.num_feeds();

        VectorXd alpha(panel.num_elements());
        for (int n = 0; n < panel.num_elements(); ++n)
        {
            const Vec3 &r = panel.element_positions[n];
            double acc = 0.0;
            for (int k = 0; k < n_feed; ++k)
            {
                const double d = (r - panel.feed_positions[k]).norm();
                const double phase = k_s.dot(r) - k_f * d;
                acc += 0.5 * (std::cos(phase) + 1.0);
            }
            alpha(n) = std::clamp(acc / n_feed, 0.0, 1.0);
        }
        return alpha;
    }

    PhaseCoupling phase_coupling(const SurfacePanel &tx, const SurfacePanel &rx)
    {
        return {feed_phase_matrix(tx), rx_phase_vector(rx)};
    }
} // namespace hmimos
