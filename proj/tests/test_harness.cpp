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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hmimos/experiments.hpp"

using namespace hmimos;
namespace fs = std::filesystem;

namespace
{
    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    ExperimentConfig small_ci()
    {
        ExperimentConfig c = profile_config("ci");
        c.cssca.n_iter = 6;
        c.cssca.convergence_window = 2;
        c.seeds.replications = 2;
        c.convergence_deltas = {1.0};
        return c;
    }

    fs::path fresh_dir(const std::string &name)
    {
        const fs::path d = fs::temp_directory_path() / name;
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }
} // namespace

TEST_CASE("profiles")
{
    const ExperimentConfig t = profile_config("table1");
    CHECK(t.tx.rows == 16);
    CHECK(t.tx.feeds.k_side == 3);
    CHECK(t.rx.rows == 6);
    CHECK(t.scenario.num_users == 4);
    CHECK(t.cssca.t_h == 10);
    CHECK(t.cssca.n_iter == 300);
    CHECK(t.cssca.convergence_window == 50);
    CHECK(t.tx.wavelength == doctest::Approx(kSpeedOfLight / 30e9));
    CHECK_NOTHROW(validate_config(t));

    const ExperimentConfig c = profile_config("ci");
    CHECK(c.tx.rows == 8);
    CHECK(c.scenario.num_users == 2);
    CHECK_NOTHROW(validate_config(c));
    CHECK_THROWS_AS(profile_config("huge"), InvalidArgument);
}

TEST_CASE("config round-trips through JSON")
{
    ExperimentConfig c = profile_config("ci");
    c.delta_bits_per_hz = {0.5, 2.0};
    c.quant.bits = {3, 5};
    c.quant.complex_mode = ComplexQuantMode::magnitude_phase;
    c.seeds.master = 99;
    c.baselines = {"ao", "sdma"};
    const ExperimentConfig back = config_from_json(config_to_json(c), profile_config("table1"));
    CHECK(config_to_json(back) == config_to_json(c));
    CHECK(config_hash(back) == config_hash(c));
}

TEST_CASE("overlay changes only the given keys")
{
    const ExperimentConfig base = profile_config("table1");
    const ExperimentConfig c = config_from_json(nlohmann::json::parse(R"({"cssca": {"n_iter": 10}, "delta_bits_per_hz": 2})"), base);
    CHECK(c.cssca.n_iter == 10);
    CHECK(c.cssca.t_h == base.cssca.t_h);
    REQUIRE(c.delta_bits_per_hz.size() == 1);
    CHECK(c.delta_bits_per_hz[0] == 2.0);
    CHECK(make_qos(c).delta.size() == 4);
}

TEST_CASE("bad configurations are rejected")
{
    const ExperimentConfig base = profile_config("ci");
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"bogus": 1})"), base), InvalidArgument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"cssca": {"nitr": 1}})"), base), InvalidArgument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"quant": {"complex_mode": "polar"}})"), base),
                    InvalidArgument);

    ExperimentConfig c = base;
    c.tx.wavelength *= 1.01;
    CHECK_THROWS_AS(validate_config(c), InvalidArgument);
    c = base;
    c.delta_bits_per_hz = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(make_qos(c), InvalidArgument);
    c = base;
    c.baselines = {"proposed"};
    CHECK_THROWS_AS(validate_config(c), InvalidArgument);
    CHECK_THROWS_AS(load_config("ci", std::string("/nonexistent/cfg.json")), InvalidArgument);
}

TEST_CASE("config hash ignores the output directory only")
{
    ExperimentConfig a = profile_config("ci");
    ExperimentConfig b = a;
    b.output_dir = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.seeds.master = 2;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(hash_hex(0x1f).size() == 16);
}

TEST_CASE("numbers are written in shortest round-trip form")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-2.5e-12) == "-2.5e-12");
    CHECK(format_number(3.0) == "3");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("intervals are reproducible and distinct")
{
    const Setup s = make_setup(small_ci());
    const Interval a = make_interval(s, 1);
    const Interval b = make_interval(s, 1);
    const Interval c = make_interval(s, 2);
    REQUIRE(a.slots.size() == static_cast<std::size_t>(s.config.slots_per_interval));
    CHECK(a.seed == b.seed);
    CHECK(a.slots[0].h[0] == b.slots[0].h[0]);
    CHECK(a.slots[0].h[0] != c.slots[0].h[0]);
}

TEST_CASE("convergence output is byte-identical across runs and directories")
{
    const Setup s = make_setup(small_ci());
    const fs::path d1 = fresh_dir("hmimos_harness_a");
    const fs::path d2 = fresh_dir("hmimos_harness_b");
    write_convergence(s, run_convergence(s, s.config.convergence_deltas, s.config.seeds.replications), d1.string());
    write_convergence(s, run_convergence(s, s.config.convergence_deltas, s.config.seeds.replications), d2.string());

    int files = 0;
    for (const auto &entry : fs::directory_iterator(d1))
    {
        ++files;
        CHECK_MESSAGE(slurp(entry.path()) == slurp(d2 / entry.path().filename()), entry.path().string());
    }
    CHECK(files >= 2);

    const std::string csv = slurp(d1 / "convergence.csv");
    CHECK(csv.find(hash_hex(s.hash)) != std::string::npos);
    const nlohmann::json summary = nlohmann::json::parse(slurp(d1 / "convergence_summary.json"));
    CHECK(summary.at("config_hash").get<std::string>() == hash_hex(s.hash));
    CHECK(summary.at("config").count("output_dir") == 0);
    CHECK(summary.at("config").count("execution") == 0);
    fs::remove_all(d1);
    fs::remove_all(d2);
}
