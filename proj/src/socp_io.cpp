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

#include <cmath>
#include <limits>

#include <json.hpp>

#include "hmimos/socp.hpp"

namespace hmimos
{
    namespace
    {
        using nlohmann::json;

        json vector_to_json(const VectorXd &v)
        {
            json out = json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i)
            {
                if (std::isfinite(v(i)))
                    out.push_back(v(i));
                else
                    out.push_back(nullptr);
            }
            return out;
        }

        json matrix_to_json(const MatrixXd &a)
        {
            json out = json::array();
            for (Eigen::Index r = 0; r < a.rows(); ++r)
                out.push_back(vector_to_json(a.row(r).transpose()));
            return out;
        }

        // null entries decode as `fill` (infinite bounds).
        VectorXd vector_from_json(const json &j, double fill = 0.0)
        {
            VectorXd v(static_cast<Eigen::Index>(j.size()));
            for (std::size_t i = 0; i < j.size(); ++i)
                v(static_cast<Eigen::Index>(i)) = j[i].is_null() ? fill : j[i].get<double>();
            return v;
        }

        MatrixXd matrix_from_json(const json &j, int cols)
        {
            MatrixXd a(static_cast<Eigen::Index>(j.size()), cols);
            for (std::size_t r = 0; r < j.size(); ++r)
            {
                require(static_cast<int>(j[r].size()) == cols, "socp_from_json: ragged matrix row");
                a.row(static_cast<Eigen::Index>(r)) = vector_from_json(j[r]).transpose();
            }
            return a;
        }
    } // namespace

    std::string socp_to_json(const SocpProblem &p)
    {
        json j;
        j["num_vars"] = p.num_vars;
        j["cost"] = vector_to_json(p.cost);
        j["eq_a"] = matrix_to_json(p.eq_a);
        j["eq_b"] = vector_to_json(p.eq_b);
        j["ineq_g"] = matrix_to_json(p.ineq_g);
        j["ineq_h"] = vector_to_json(p.ineq_h);
        j["lower"] = vector_to_json(p.lower);
        j["upper"] = vector_to_json(p.upper);
        json cones = json::array();
        for (const SecondOrderCone &k : p.cones)
        {
            json c;
            c["a"] = matrix_to_json(k.a);
            c["b"] = vector_to_json(k.b);
            c["c"] = vector_to_json(k.c);
            c["d"] = k.d;
            cones.push_back(c);
        }
        j["cones"] = cones;
        return j.dump(1);
    }

    SocpProblem socp_from_json(const std::string &text)
    {
        const json j = json::parse(text);
        const int n = j.at("num_vars").get<int>();
        constexpr double inf = std::numeric_limits<double>::infinity();

        SocpProblem p(n);
        p.cost = vector_from_json(j.at("cost"));
        p.eq_a = matrix_from_json(j.value("eq_a", json::array()), n);
        p.eq_b = vector_from_json(j.value("eq_b", json::array()));
        p.ineq_g = matrix_from_json(j.value("ineq_g", json::array()), n);
        p.ineq_h = vector_from_json(j.value("ineq_h", json::array()));
        p.lower = vector_from_json(j.value("lower", json::array()), -inf);
        p.upper = vector_from_json(j.value("upper", json::array()), inf);
        for (const json &c : j.value("cones", json::array()))
        {
            SecondOrderCone k;
            k.a = matrix_from_json(c.at("a"), n);
            k.b = vector_from_json(c.at("b"));
            k.c = vector_from_json(c.at("c"));
            k.d = c.at("d").get<double>();
            p.cones.push_back(std::move(k));
        }
        validate_problem(p);
        return p;
    }
} // namespace hmimos
