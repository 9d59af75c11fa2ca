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

#include "hmimos/system_model.hpp"

namespace hmimos
{
    enum class ComplexQuantMode
    {
        real_imag,       // Re and Im with a shared per-matrix scale
        magnitude_phase, // mu-law magnitude, uniform phase
    };

    struct QuantSpec
    {
        double mu = 255.0;
        int bits = 8;
        ComplexQuantMode complex_mode = ComplexQuantMode::real_imag;
    };

    void validate_quant_spec(const QuantSpec &spec);

    double mu_law_compress(double x, double mu);
    double mu_law_expand(double y, double mu);

    // Compress, round to the nearest of the 2^Q levels k / (2^Q - 1), expand.
    double mu_law_quantize(double x, const QuantSpec &spec);

    struct QuantizedPoint
    {
        BeampatternState state;
        Precoder precoder;
    };

    QuantizedPoint quantize_state(const BeampatternState &state, const Precoder &precoder, const QuantSpec &spec);
} // namespace hmimos
