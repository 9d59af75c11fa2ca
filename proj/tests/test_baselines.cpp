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

#include <doctest.h>

#include "hmimos/baselines.hpp"
#include "hmimos/experiments.hpp"

using namespace hmimos;

namespace
{
    struct Fixture
    {
        Setup setup = make_setup(profile_config("ci"));
        Interval interval = make_interval(setup, 0);
        SlotSet slots;
        AlternationConfig alt = alternation_for(setup, 3);

        Fixture()
        {
            slots = interval.slot_set(setup, make_qos(setup.config, 1.0));
            slots.slots.resize(3);
        }
    };

    double min_se(const SlotMetrics &m) { return m.se.minCoeff(); }
} // namespace

TEST_CASE("summarize averages slots and counts violations")
{
    std::vector<SlotRecord> recs(4);
    recs[0] = {1.0, (VectorXd(2) << 1.5, 2.0).finished(), false};
    recs[1] = {3.0, (VectorXd(2) << 0.5, 2.0).finished(), true};
    recs[2] = {2.0, (VectorXd(2) << 1.0, 1.0).finished(), false};
    recs[3] = {2.0, (VectorXd(2) << 1.0, 0.9).finished(), false};
    const BaselineResult r = summarize("x", recs, VectorXd::Ones(2));
    CHECK(r.name == "x");
    CHECK(r.slots == 4);
    CHECK(r.avg_power_watts == doctest::Approx(2.0));
    CHECK(r.avg_se_per_user(0) == doctest::Approx(1.0));
    CHECK(r.avg_se_per_user(1) == doctest::Approx(1.475));
    // Two of the eight user-slot pairs fall short.
    CHECK(r.qos_violation_rate == doctest::Approx(0.25));
    CHECK(r.infeasible_slots == 1);

    const BaselineResult a = summarize("x", {recs[0]}, VectorXd::Ones(2));
    const BaselineResult b = summarize("x", {recs[1], recs[2], recs[3]}, VectorXd::Ones(2));
    const BaselineResult pooled = pool_results({a, b});
    CHECK(pooled.slots == 4);
    CHECK(pooled.avg_power_watts == doctest::Approx(r.avg_power_watts));
    CHECK(pooled.qos_violation_rate == doctest::Approx(r.qos_violation_rate));
    CHECK(pooled.avg_se_per_user(1) == doctest::Approx(r.avg_se_per_user(1)));
}

TEST_CASE("alternation meets the targets and does not raise power")
{
    Fixture f;
    const BeampatternState init = random_state(static_cast<int>(f.slots.theta.rows()),
                                               static_cast<int>(f.slots.beta.size()), 2, 11);
    const ChannelRealization &ch = f.slots.slots[0];
    const PrecoderResult first = solve_precoder(build_instance(init, f.slots.theta, f.slots.beta, ch, f.slots.qos));
    const AlternationOutcome out = alternate_slot(f.alt, f.slots.theta, f.slots.beta, f.slots.qos, ch, init);
    REQUIRE_FALSE(out.infeasible);
    CHECK(out.alternations >= 1);
    CHECK(out.alternations <= f.alt.max_alternations);
    CHECK_NOTHROW(validate_state(out.state));
    const SlotMetrics m = evaluate_slot(out.state, out.precoder, ch, f.slots.theta, f.slots.beta, f.slots.qos);
    CHECK(min_se(m) >= 1.0 - 1e-5);
    CHECK(m.power == doctest::Approx(out.power).epsilon(1e-9));
    if (first.ok())
        CHECK(out.power <= first.power * (1.0 + 1e-6));

    const AlternationOutcome frozen =
        alternate_slot(f.alt, f.slots.theta, f.slots.beta, f.slots.qos, ch, init, false);
    CHECK(frozen.state.alpha == init.alpha);
}

TEST_CASE("AO is deterministic and SOCP precoding beats ZF on the same beampatterns")
{
    Fixture f;
    const AoRun a = run_ao(f.slots, f.alt);
    const AoRun b = run_ao(f.slots, f.alt);
    REQUIRE(a.states.size() == 3);
    CHECK(a.result.avg_power_watts == b.result.avg_power_watts);
    CHECK(a.result.slots == 3);

    const BaselineResult sdma = run_sdma(f.slots, a.states);
    CHECK(sdma.name == "sdma");
    if (a.result.infeasible_slots == 0 && sdma.qos_violation_rate == 0.0)
        CHECK(a.result.avg_power_watts <= sdma.avg_power_watts * (1.0 + 1e-6));
}

TEST_CASE("OTS replays the first slot's solution")
{
    Fixture f;
    const BaselineResult ots = run_ots(f.slots, f.alt);
    CHECK(ots.slots == 3);
    const BeampatternState init = random_state(static_cast<int>(f.slots.theta.rows()),
                                               static_cast<int>(f.slots.beta.size()), 2, 1);
    const AlternationOutcome first =
        alternate_slot(f.alt, f.slots.theta, f.slots.beta, f.slots.qos, f.slots.slots[0], init);
    const std::vector<SlotRecord> recs = evaluate_frozen(f.slots, first.state, first.precoder);
    REQUIRE(recs.size() == 3);
    // Frozen W gives the same power in every slot.
    CHECK(recs[1].power == doctest::Approx(recs[0].power));
    CHECK(recs[2].power == doctest::Approx(recs[0].power));
}

TEST_CASE("random amplitude baseline is reproducible")
{
    Fixture f;
    const BaselineResult a = run_random_amplitude(f.slots, f.alt);
    const BaselineResult b = run_random_amplitude(f.slots, f.alt);
    CHECK(a.avg_power_watts == b.avg_power_watts);
    CHECK(a.avg_power_watts > 0.0);
    AlternationConfig other = f.alt;
    other.seed += 1;
    CHECK(run_random_amplitude(f.slots, other).avg_power_watts != a.avg_power_watts);
}

TEST_CASE("fixed state evaluation matches the per-slot precoder")
{
    Fixture f;
    const BeampatternState st = random_state(static_cast<int>(f.slots.theta.rows()),
                                             static_cast<int>(f.slots.beta.size()), 2, 4);
    const std::vector<SlotRecord> recs = evaluate_fixed_state(f.slots, st);
    REQUIRE(recs.size() == 3);
    for (int s = 0; s < 3; ++s)
    {
        const PrecoderResult r =
            solve_precoder(build_instance(st, f.slots.theta, f.slots.beta, f.slots.slots[s], f.slots.qos));
        CHECK(recs[s].infeasible == !r.ok());
        if (r.ok())
            CHECK(recs[s].power == doctest::Approx(r.power));
    }
}

TEST_CASE("OTS with one slot is AO on that slot")
{
    Fixture f;
    f.slots.slots.resize(1);
    const BaselineResult ots = run_ots(f.slots, f.alt);
    const AoRun ao = run_ao(f.slots, f.alt);
    CHECK(ots.avg_power_watts == doctest::Approx(ao.result.avg_power_watts).epsilon(1e-12));
}

TEST_CASE("OTS on repeated channels never violates QoS")
{
    Fixture f;
    f.slots.slots = {f.slots.slots[0], f.slots.slots[0], f.slots.slots[0]};
    const BaselineResult ots = run_ots(f.slots, f.alt);
    CHECK(ots.qos_violation_rate == 0.0);
}

TEST_CASE("OTS violates QoS on independent channels")
{
    Fixture f;
    f.slots = f.interval.slot_set(f.setup, make_qos(f.setup.config, 1.0));
    CHECK(run_ots(f.slots, f.alt).qos_violation_rate > 0.0);
}
