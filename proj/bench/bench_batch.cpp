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

// Serial vs OpenMP timing of the training-batch kernel, with a bitwise
// comparison of the two results.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "hmimos/batch.hpp"
#include "hmimos/experiments.hpp"

using namespace hmimos;

namespace
{
    bool identical(const CsscaEstimates &a, const CsscaEstimates &b)
    {
        const auto same = [](const auto &x, const auto &y) {
            return x.size() == y.size() && std::memcmp(x.data(), y.data(), sizeof(double) * x.size()) == 0;
        };
        return std::memcmp(&a.f0, &b.f0, sizeof(double)) == 0 && same(a.fu, b.fu) &&
               same(a.grad_alpha_f0, b.grad_alpha_f0) && same(a.grad_alpha_fu, b.grad_alpha_fu) &&
               same(a.grad_v_fu, b.grad_v_fu);
    }

    template <typename F>
    double seconds(F f, int reps)
    {
        const auto t0 = std::chrono::steady_clock::now();
        for (int i = 0; i < reps; ++i)
            f();
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
    }
} // namespace

int main(int argc, char **argv)
{
    const std::string profile = argc > 1 ? argv[1] : "table1";
    const int reps = argc > 2 ? std::stoi(argv[2]) : 3;
    const Setup setup = make_setup(profile_config(profile));
    const Interval iv = make_interval(setup, 0);
    const LongTermProblem prob = iv.problem(setup);

    BatchContext ctx;
    ctx.problem = &prob;
    ctx.qos = make_qos(setup.config);
    ctx.seed = iv.seed;
    ctx.t_h = setup.config.cssca.t_h;
    const BeampatternState state =
        random_state(setup.tx.num_elements(), setup.rx.num_elements(), setup.config.scenario.num_users, iv.seed);

    BatchResult serial, parallel;
    const double ts = seconds([&] { serial = evaluate_batch_serial(ctx, state, 1); }, reps);
    const double tp = seconds([&] { parallel = evaluate_batch_parallel(ctx, state, 1); }, reps);
    const bool same = identical(serial.mean, parallel.mean);

    std::printf("profile %s  T_H %d  threads %d\n", profile.c_str(), ctx.t_h, max_threads());
    std::printf("serial   %.4f s/batch\n", ts);
    std::printf("parallel %.4f s/batch  speedup %.2fx\n", tp, ts / tp);
    std::printf("results bitwise identical: %s\n", same ? "yes" : "NO");
    return same ? 0 : 1;
}
