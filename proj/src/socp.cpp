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

#include "hmimos/socp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/SparseCore>

namespace hmimos
{
    SocpProblem::SocpProblem(int n) : num_vars(n), cost(VectorXd::Zero(n)), eq_a(0, n), ineq_g(0, n) {}

    void SocpProblem::add_equality(const Eigen::RowVectorXd &row, double rhs)
    {
        require(row.size() == num_vars, "add_equality: row length mismatch");
        eq_a.conservativeResize(eq_a.rows() + 1, num_vars);
        eq_a.row(eq_a.rows() - 1) = row;
        eq_b.conservativeResize(eq_b.size() + 1);
        eq_b(eq_b.size() - 1) = rhs;
    }

    void SocpProblem::add_inequality(const Eigen::RowVectorXd &row, double rhs)
    {
        require(row.size() == num_vars, "add_inequality: row length mismatch");
        ineq_g.conservativeResize(ineq_g.rows() + 1, num_vars);
        ineq_g.row(ineq_g.rows() - 1) = row;
        ineq_h.conservativeResize(ineq_h.size() + 1);
        ineq_h(ineq_h.size() - 1) = rhs;
    }

    void SocpProblem::add_cone(SecondOrderCone cone)
    {
        if (cone.a.rows() == 0)
            cone.a.resize(0, num_vars);
        if (cone.b.size() == 0)
            cone.b = VectorXd::Zero(cone.a.rows());
        cones.push_back(std::move(cone));
    }

    void SocpProblem::set_bounds(double lo, double hi)
    {
        lower = VectorXd::Constant(num_vars, lo);
        upper = VectorXd::Constant(num_vars, hi);
    }

    void validate_problem(const SocpProblem &p)
    {
        const int n = p.num_vars;
        require(n >= 1, "socp: num_vars must be >= 1");
        require(p.cost.size() == n, "socp: cost length mismatch");
        require(p.eq_a.rows() == p.eq_b.size() && (p.eq_a.rows() == 0 || p.eq_a.cols() == n),
                "socp: equality shape mismatch");
        require(p.ineq_g.rows() == p.ineq_h.size() && (p.ineq_g.rows() == 0 || p.ineq_g.cols() == n),
                "socp: inequality shape mismatch");
        require(p.lower.size() == 0 || p.lower.size() == n, "socp: lower bound length mismatch");
        require(p.upper.size() == 0 || p.upper.size() == n, "socp: upper bound length mismatch");
        for (const SecondOrderCone &k : p.cones)
        {
            require(k.a.cols() == n && k.b.size() == k.a.rows() && k.c.size() == n, "socp: cone shape mismatch");
        }
        bool any_bound = false;
        for (int i = 0; i < p.lower.size(); ++i)
            any_bound = any_bound || std::isfinite(p.lower(i));
        for (int i = 0; i < p.upper.size(); ++i)
            any_bound = any_bound || std::isfinite(p.upper(i));
        require(p.ineq_g.rows() > 0 || !p.cones.empty() || any_bound,
                "socp: problem has no inequality, bound or cone constraints");
    }

    const char *to_string(SocpStatus status)
    {
        switch (status)
        {
        case SocpStatus::optimal:
            return "optimal";
        case SocpStatus::infeasible:
            return "infeasible";
        case SocpStatus::unbounded:
            return "unbounded";
        case SocpStatus::max_iters:
            return "max_iters";
        case SocpStatus::numerical_error:
            return "numerical_error";
        }
        return "unknown";
    }

    double max_violation(const SocpProblem &p, const VectorXd &x)
    {
        double v = 0.0;
        if (p.eq_a.rows() > 0)
            v = std::max(v, (p.eq_a * x - p.eq_b).cwiseAbs().maxCoeff());
        if (p.ineq_g.rows() > 0)
            v = std::max(v, (p.ineq_g * x - p.ineq_h).maxCoeff());
        for (int i = 0; i < p.lower.size(); ++i)
            if (std::isfinite(p.lower(i)))
                v = std::max(v, p.lower(i) - x(i));
        for (int i = 0; i < p.upper.size(); ++i)
            if (std::isfinite(p.upper(i)))
                v = std::max(v, x(i) - p.upper(i));
        for (const SecondOrderCone &k : p.cones)
        {
            const double lhs = k.a.rows() > 0 ? (k.a * x + k.b).norm() : 0.0;
            v = std::max(v, lhs - k.c.dot(x) - k.d);
        }
        return v;
    }

    namespace
    {
        // Conic form: min c^T x  s.t.  A x = b,  G x + s = h,  s in K.
        // K = R_+^l x SOC(q_1) x ... ; the LP part holds dense rows first and
        // then the variable bounds.
        struct BoundRow
        {
            int var;
            double sign; // row of G is sign * e_var
        };

        struct ConeBlock
        {
            int offset = 0;
            int dim = 0;
            Eigen::SparseMatrix<double> g; // dim x n
            MatrixXd p;                    // g^T diag(-1, I) g
        };

        struct ConicForm
        {
            int n = 0;
            int p = 0;
            int l_dense = 0;
            int l = 0;
            int m = 0;
            VectorXd c, b, h;
            MatrixXd a;
            MatrixXd g_dense;
            std::vector<BoundRow> bounds;
            std::vector<ConeBlock> cones;

            explicit ConicForm(const SocpProblem &prob)
            {
                n = prob.num_vars;
                c = prob.cost;
                a = prob.eq_a.rows() > 0 ? prob.eq_a : MatrixXd(0, n);
                b = prob.eq_a.rows() > 0 ? prob.eq_b : VectorXd(0);
                p = static_cast<int>(a.rows());
                g_dense = prob.ineq_g.rows() > 0 ? prob.ineq_g : MatrixXd(0, n);
                l_dense = static_cast<int>(g_dense.rows());

                std::vector<double> h_lp(prob.ineq_h.data(), prob.ineq_h.data() + prob.ineq_h.size());
                for (int i = 0; i < prob.lower.size(); ++i)
                    if (std::isfinite(prob.lower(i)))
                    {
                        bounds.push_back({i, -1.0});
                        h_lp.push_back(-prob.lower(i));
                    }
                for (int i = 0; i < prob.upper.size(); ++i)
                    if (std::isfinite(prob.upper(i)))
                    {
                        bounds.push_back({i, 1.0});
                        h_lp.push_back(prob.upper(i));
                    }
                l = l_dense + static_cast<int>(bounds.size());

                int offset = l;
                std::vector<double> h_all = h_lp;
                for (const SecondOrderCone &k : prob.cones)
                {
                    ConeBlock blk;
                    blk.offset = offset;
                    blk.dim = 1 + static_cast<int>(k.a.rows());
                    MatrixXd gd(blk.dim, n);
                    gd.row(0) = -k.c.transpose();
                    if (k.a.rows() > 0)
                        gd.bottomRows(k.a.rows()) = -k.a;
                    blk.g = gd.sparseView(0.0, 0.0);
                    blk.g.makeCompressed();
                    const Eigen::SparseMatrix<double> gt = blk.g.transpose();
                    const Eigen::SparseMatrix<double> gtg = gt * blk.g;
                    const VectorXd g0 = k.c;
                    blk.p = MatrixXd(gtg);
                    blk.p.noalias() -= 2.0 * g0 * g0.transpose();
                    h_all.push_back(k.d);
                    for (int r = 0; r < k.b.size(); ++r)
                        h_all.push_back(k.b(r));
                    offset += blk.dim;
                    cones.push_back(std::move(blk));
                }
                m = offset;
                h = Eigen::Map<VectorXd>(h_all.data(), static_cast<Eigen::Index>(h_all.size()));
            }

            int degree() const { return l + static_cast<int>(cones.size()); }

            VectorXd apply_g(const VectorXd &x) const
            {
                VectorXd out(m);
                if (l_dense > 0)
                    out.head(l_dense) = g_dense * x;
                for (std::size_t i = 0; i < bounds.size(); ++i)
                    out(l_dense + static_cast<int>(i)) = bounds[i].sign * x(bounds[i].var);
                for (const ConeBlock &blk : cones)
                    out.segment(blk.offset, blk.dim) = blk.g * x;
                return out;
            }

            VectorXd apply_gt(const VectorXd &z) const
            {
                VectorXd out = VectorXd::Zero(n);
                if (l_dense > 0)
                    out += g_dense.transpose() * z.head(l_dense);
                for (std::size_t i = 0; i < bounds.size(); ++i)
                    out(bounds[i].var) += bounds[i].sign * z(l_dense + static_cast<int>(i));
                for (const ConeBlock &blk : cones)
                    out += blk.g.transpose() * z.segment(blk.offset, blk.dim);
                return out;
            }

            VectorXd apply_a(const VectorXd &x) const { return p > 0 ? VectorXd(a * x) : VectorXd(0); }
            VectorXd apply_at(const VectorXd &y) const
            {
                return p > 0 ? VectorXd(a.transpose() * y) : VectorXd(VectorXd::Zero(n));
            }

            // Identity element of the cone.
            VectorXd unit() const
            {
                VectorXd e = VectorXd::Zero(m);
                e.head(l).setOnes();
                for (const ConeBlock &blk : cones)
                    e(blk.offset) = 1.0;
                return e;
            }

            // Smallest a with u + a e in K.
            double shift_needed(const VectorXd &u) const
            {
                double out = -std::numeric_limits<double>::infinity();
                if (l > 0)
                    out = std::max(out, -u.head(l).minCoeff());
                for (const ConeBlock &blk : cones)
                {
                    const double tail = blk.dim > 1 ? u.segment(blk.offset + 1, blk.dim - 1).norm() : 0.0;
                    out = std::max(out, tail - u(blk.offset));
                }
                return out;
            }

            VectorXd jordan_product(const VectorXd &u, const VectorXd &v) const
            {
                VectorXd out(m);
                out.head(l) = u.head(l).cwiseProduct(v.head(l));
                for (const ConeBlock &blk : cones)
                {
                    const int o = blk.offset;
                    const int q = blk.dim - 1;
                    out(o) = u.segment(o, blk.dim).dot(v.segment(o, blk.dim));
                    if (q > 0)
                        out.segment(o + 1, q) = u(o) * v.segment(o + 1, q) + v(o) * u.segment(o + 1, q);
                }
                return out;
            }

            // x with lambda o x = d.
            VectorXd jordan_divide(const VectorXd &lambda, const VectorXd &d) const
            {
                VectorXd out(m);
                out.head(l) = d.head(l).cwiseQuotient(lambda.head(l));
                for (const ConeBlock &blk : cones)
                {
                    const int o = blk.offset;
                    const int q = blk.dim - 1;
                    const double l0 = lambda(o);
                    if (q == 0)
                    {
                        out(o) = d(o) / l0;
                        continue;
                    }
                    const auto l1 = lambda.segment(o + 1, q);
                    const auto d1 = d.segment(o + 1, q);
                    const double det = l0 * l0 - l1.squaredNorm();
                    const double x0 = (l0 * d(o) - l1.dot(d1)) / det;
                    out(o) = x0;
                    out.segment(o + 1, q) = (d1 - x0 * l1) / l0;
                }
                return out;
            }

            // Largest step a (capped at `cap`) keeping u + a du in K.
            double max_step(const VectorXd &u, const VectorXd &du, double cap) const
            {
                double step = cap;
                for (int i = 0; i < l; ++i)
                    if (du(i) < 0.0)
                        step = std::min(step, -u(i) / du(i));
                for (const ConeBlock &blk : cones)
                {
                    const int o = blk.offset;
                    const int q = blk.dim - 1;
                    const double s0 = u(o);
                    const double d0 = du(o);
                    if (q == 0)
                    {
                        if (d0 < 0.0)
                            step = std::min(step, -s0 / d0);
                        continue;
                    }
                    const auto s1 = u.segment(o + 1, q);
                    const auto d1 = du.segment(o + 1, q);
                    // f(a) = (s0 + a d0)^2 - ||s1 + a d1||^2 = qa a^2 + 2 qb a + qc
                    const double qa = d0 * d0 - d1.squaredNorm();
                    const double qb = s0 * d0 - s1.dot(d1);
                    const double qc = std::max(s0 * s0 - s1.squaredNorm(), 0.0);
                    double root = std::numeric_limits<double>::infinity();
                    if (std::abs(qa) <= 1e-300)
                    {
                        if (qb < 0.0)
                            root = -qc / (2.0 * qb);
                    }
                    else
                    {
                        const double disc = qb * qb - qa * qc;
                        if (disc >= 0.0)
                        {
                            const double sq = std::sqrt(disc);
                            const double t = -(qb + std::copysign(sq, qb));
                            const double r1 = t / qa;
                            const double r2 = t != 0.0 ? qc / t : std::numeric_limits<double>::infinity();
                            for (const double r : {r1, r2})
                                if (r > 0.0)
                                    root = std::min(root, r);
                        }
                    }
                    if (d0 < 0.0)
                        root = std::min(root, -s0 / d0);
                    step = std::min(step, root);
                }
                return std::max(step, 0.0);
            }
        };

        struct ConeScaling
        {
            double eta = 1.0;
            VectorXd w; // normalized scaling point, w^T J w = 1
        };

        struct Scaling
        {
            VectorXd lp_w; // sqrt(s / z)
            std::vector<ConeScaling> cones;
            VectorXd lambda; // W z
        };

        class ScalingOps
        {
        public:
            explicit ScalingOps(const ConicForm &form) : form_(form) {}

            bool update(const VectorXd &s, const VectorXd &z, Scaling &sc) const
            {
                const int l = form_.l;
                sc.lp_w = s.head(l).cwiseQuotient(z.head(l)).cwiseSqrt();
                sc.cones.resize(form_.cones.size());
                for (std::size_t k = 0; k < form_.cones.size(); ++k)
                {
                    const ConeBlock &blk = form_.cones[k];
                    const int o = blk.offset;
                    const int q = blk.dim - 1;
                    const VectorXd sk = s.segment(o, blk.dim);
                    const VectorXd zk = z.segment(o, blk.dim);
                    const double sres = sk(0) * sk(0) - (q > 0 ? sk.tail(q).squaredNorm() : 0.0);
                    const double zres = zk(0) * zk(0) - (q > 0 ? zk.tail(q).squaredNorm() : 0.0);
                    if (!(sres > 0.0) || !(zres > 0.0))
                        return false;
                    const VectorXd sb = sk / std::sqrt(sres);
                    const VectorXd zb = zk / std::sqrt(zres);
                    const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
                    VectorXd w = sb;
                    w(0) += zb(0);
                    if (q > 0)
                        w.tail(q) -= zb.tail(q);
                    w /= 2.0 * gamma;
                    sc.cones[k].w = w;
                    sc.cones[k].eta = std::pow(sres / zres, 0.25);
                }
                sc.lambda = apply_w(sc, z);
                return true;
            }

            VectorXd apply_w(const Scaling &sc, const VectorXd &v) const { return apply(sc, v, false); }
            VectorXd apply_winv(const Scaling &sc, const VectorXd &v) const { return apply(sc, v, true); }
            VectorXd apply_w2(const Scaling &sc, const VectorXd &v) const { return apply_w(sc, apply_w(sc, v)); }
            VectorXd apply_winv2(const Scaling &sc, const VectorXd &v) const
            {
                return apply_winv(sc, apply_winv(sc, v));
            }

        private:
            VectorXd apply(const Scaling &sc, const VectorXd &v, bool inverse) const
            {
                VectorXd out(v.size());
                const int l = form_.l;
                if (inverse)
                    out.head(l) = v.head(l).cwiseQuotient(sc.lp_w);
                else
                    out.head(l) = v.head(l).cwiseProduct(sc.lp_w);
                for (std::size_t k = 0; k < form_.cones.size(); ++k)
                {
                    const ConeBlock &blk = form_.cones[k];
                    const int o = blk.offset;
                    const int q = blk.dim - 1;
                    const ConeScaling &cs = sc.cones[k];
                    VectorXd x = v.segment(o, blk.dim);
                    // W^-1 = eta^-1 J Wbar J
                    if (inverse && q > 0)
                        x.tail(q) *= -1.0;
                    VectorXd y(blk.dim);
                    const double w0 = cs.w(0);
                    if (q > 0)
                    {
                        const auto w1 = cs.w.tail(q);
                        const double w1x1 = w1.dot(x.tail(q));
                        y(0) = w0 * x(0) + w1x1;
                        y.tail(q) = x.tail(q) + (x(0) + w1x1 / (1.0 + w0)) * w1;
                    }
                    else
                    {
                        y(0) = w0 * x(0);
                    }
                    if (inverse && q > 0)
                        y.tail(q) *= -1.0;
                    out.segment(o, blk.dim) = (inverse ? 1.0 / cs.eta : cs.eta) * y;
                }
                return out;
            }

            const ConicForm &form_;
        };

        class KktSolver
        {
        public:
            KktSolver(const ConicForm &form, const ScalingOps &ops) : form_(form), ops_(ops) {}

            bool factor(const Scaling &sc)
            {
                sc_ = &sc;
                const int n = form_.n;
                MatrixXd hmat = MatrixXd::Zero(n, n);
                const VectorXd lp_inv2 = sc.lp_w.cwiseProduct(sc.lp_w).cwiseInverse();
                if (form_.l_dense > 0)
                    hmat.noalias() += form_.g_dense.transpose() * lp_inv2.head(form_.l_dense).asDiagonal() *
                                      form_.g_dense;
                for (std::size_t i = 0; i < form_.bounds.size(); ++i)
                    hmat(form_.bounds[i].var, form_.bounds[i].var) += lp_inv2(form_.l_dense + static_cast<int>(i));
                for (std::size_t k = 0; k < form_.cones.size(); ++k)
                {
                    const ConeBlock &blk = form_.cones[k];
                    const ConeScaling &cs = sc.cones[k];
                    VectorXd jw = cs.w;
                    if (blk.dim > 1)
                        jw.tail(blk.dim - 1) *= -1.0;
                    const VectorXd qv = blk.g.transpose() * jw;
                    const double scale = 1.0 / (cs.eta * cs.eta);
                    hmat += scale * blk.p;
                    hmat.noalias() += (2.0 * scale) * qv * qv.transpose();
                }

                const double diag_max = std::max(1.0, hmat.diagonal().cwiseAbs().maxCoeff());
                double reg = 1e-13 * diag_max;
                for (int attempt = 0; attempt < 8; ++attempt, reg *= 100.0)
                {
                    MatrixXd hr = hmat;
                    hr.diagonal().array() += reg;
                    llt_h_.compute(hr);
                    if (llt_h_.info() != Eigen::Success)
                        continue;
                    if (form_.p == 0)
                        return true;
                    hinv_at_ = llt_h_.solve(form_.a.transpose());
                    MatrixXd schur = form_.a * hinv_at_;
                    schur.diagonal().array() += 1e-13 * std::max(1.0, schur.diagonal().maxCoeff());
                    llt_s_.compute(schur);
                    if (llt_s_.info() == Eigen::Success)
                        return true;
                }
                return false;
            }

            // Solves [0 A^T G^T; A 0 0; G 0 -W^2] [x; y; z] = [rx; ry; rz].
            void solve(const VectorXd &rx, const VectorXd &ry, const VectorXd &rz, VectorXd &x, VectorXd &y,
                       VectorXd &z) const
            {
                solve_once(rx, ry, rz, x, y, z);
                double prev = std::numeric_limits<double>::infinity();
                for (int it = 0; it < 4; ++it)
                {
                    const VectorXd ex = rx - form_.apply_at(y) - form_.apply_gt(z);
                    const VectorXd ey = ry - form_.apply_a(x);
                    const VectorXd ez = rz - form_.apply_g(x) + ops_.apply_w2(*sc_, z);
                    const double err = std::max({ex.lpNorm<Eigen::Infinity>(),
                                                 ey.size() ? ey.lpNorm<Eigen::Infinity>() : 0.0,
                                                 ez.lpNorm<Eigen::Infinity>()});
                    const double scale =
                        1.0 + std::max({rx.lpNorm<Eigen::Infinity>(), ry.size() ? ry.lpNorm<Eigen::Infinity>() : 0.0,
                                        rz.lpNorm<Eigen::Infinity>()});
                    if (err <= 1e-14 * scale || err >= 0.5 * prev)
                        break;
                    prev = err;
                    VectorXd dx, dy, dz;
                    solve_once(ex, ey, ez, dx, dy, dz);
                    x += dx;
                    y += dy;
                    z += dz;
                }
            }

        private:
            void solve_once(const VectorXd &rx, const VectorXd &ry, const VectorXd &rz, VectorXd &x, VectorXd &y,
                            VectorXd &z) const
            {
                const VectorXd r = rx + form_.apply_gt(ops_.apply_winv2(*sc_, rz));
                if (form_.p == 0)
                {
                    x = llt_h_.solve(r);
                    y.resize(0);
                }
                else
                {
                    const VectorXd hr = llt_h_.solve(r);
                    y = llt_s_.solve(form_.a * hr - ry);
                    x = hr - hinv_at_ * y;
                }
                z = ops_.apply_winv2(*sc_, form_.apply_g(x) - rz);
            }

            const ConicForm &form_;
            const ScalingOps &ops_;
            const Scaling *sc_ = nullptr;
            Eigen::LLT<MatrixXd> llt_h_;
            Eigen::LLT<MatrixXd> llt_s_;
            MatrixXd hinv_at_;
        };

        double safe_norm(const VectorXd &v) { return v.size() ? v.norm() : 0.0; }
    } // namespace

    SocpSolution solve_socp(const SocpProblem &problem, const SocpOptions &options)
    {
        validate_problem(problem);
        require(options.tol > 0.0, "solve_socp: tol must be positive");
        require(options.max_iters >= 1, "solve_socp: max_iters must be >= 1");

        const ConicForm form(problem);
        const ScalingOps ops(form);
        KktSolver kkt(form, ops);
        const int n = form.n;
        const int m = form.m;
        const double tol = options.tol;
        const VectorXd e = form.unit();

        const double norm_b = safe_norm(form.b);
        const double norm_h = safe_norm(form.h);
        const double norm_c = safe_norm(form.c);

        SocpSolution sol;
        sol.feasibility_tolerance = 2.0 * tol * (1.0 + std::max(norm_b, norm_h));

        // Initial point from two least-squares solves with W = I.
        Scaling sc;
        sc.lp_w = VectorXd::Ones(form.l);
        sc.cones.resize(form.cones.size());
        for (std::size_t k = 0; k < form.cones.size(); ++k)
        {
            sc.cones[k].eta = 1.0;
            sc.cones[k].w = VectorXd::Zero(form.cones[k].dim);
            sc.cones[k].w(0) = 1.0;
        }
        if (!kkt.factor(sc))
        {
            sol.status = SocpStatus::numerical_error;
            sol.x = VectorXd::Zero(n);
            return sol;
        }

        VectorXd x, y, z, s;
        {
            VectorXd yy, zz;
            kkt.solve(VectorXd::Zero(n), form.b, form.h, x, yy, zz);
            s = -zz;
            const double ap = form.shift_needed(s);
            if (ap >= 0.0)
                s += (1.0 + ap) * e;
        }
        {
            VectorXd xx;
            kkt.solve(-form.c, VectorXd::Zero(form.p), VectorXd::Zero(m), xx, y, z);
            const double ad = form.shift_needed(z);
            if (ad >= 0.0)
                z += (1.0 + ad) * e;
        }
        double tau = 1.0;
        double kappa = 1.0;
        const double degree = static_cast<double>(form.degree());

        auto finish = [&](SocpStatus status, int iters) {
            sol.status = status;
            sol.iterations = iters;
            if (status == SocpStatus::infeasible || status == SocpStatus::unbounded)
                sol.x = x / std::max(tau, 1e-300);
            else
                sol.x = x / tau;
            if (!sol.x.allFinite())
                sol.x = VectorXd::Zero(n);
            sol.objective_value = problem.cost.dot(sol.x);
            sol.max_constraint_violation = max_violation(problem, sol.x);
            return sol;
        };

        // Weakly infeasible programs admit no exact certificate; the
        // embedding then drives tau -> 0 while the primal residual stalls.
        double best_pres = std::numeric_limits<double>::infinity();
        int stalled = 0;
        auto looks_infeasible = [&](double pres, double certificate_dual) {
            return certificate_dual < 0.0 && pres > 1e2 * tol && kappa > 1e3 * tau;
        };

        // Last iterate meeting the relaxed tolerance, returned when the
        // iteration breaks down before reaching full accuracy.
        const double relaxed_tol = 1e3 * tol;
        struct Snapshot
        {
            VectorXd x;
            double tau = 0.0, pres = 0.0, dres = 0.0, gap = 0.0;
        };
        std::optional<Snapshot> relaxed;
        auto fail = [&](SocpStatus status, int iters) {
            if (!relaxed)
                return finish(status, iters);
            x = relaxed->x;
            tau = relaxed->tau;
            SocpSolution out = finish(SocpStatus::optimal, iters);
            out.reduced_accuracy = true;
            out.primal_residual = relaxed->pres;
            out.dual_residual = relaxed->dres;
            out.gap = relaxed->gap;
            return out;
        };

        for (int iter = 0; iter <= options.max_iters; ++iter)
        {
            const VectorXd at_y = form.apply_at(y);
            const VectorXd gt_z = form.apply_gt(z);
            const VectorXd ax = form.apply_a(x);
            const VectorXd gx = form.apply_g(x);

            const VectorXd rx = at_y + gt_z + tau * form.c;
            const VectorXd ry = ax - tau * form.b;
            const VectorXd rz = s + gx - tau * form.h;
            const double cx = form.c.dot(x);
            const double by = form.p ? form.b.dot(y) : 0.0;
            const double hz = form.h.dot(z);
            const double rt = kappa + cx + by + hz;

            const double pres = std::max(safe_norm(ry) / (1.0 + norm_b), rz.norm() / (1.0 + norm_h)) / tau;
            const double dres = rx.norm() / (1.0 + norm_c) / tau;
            const double pcost = cx / tau;
            const double dcost = -(by + hz) / tau;
            const double gap = s.dot(z) / (tau * tau);
            const double relgap = gap / std::max(1e-300, std::min(std::abs(pcost), std::abs(dcost)));
            sol.primal_residual = pres;
            sol.dual_residual = dres;
            sol.gap = gap;

            if (pres < tol && dres < tol && (gap < tol || relgap < tol))
                return finish(SocpStatus::optimal, iter);
            if (pres < relaxed_tol && dres < relaxed_tol && (gap < relaxed_tol || relgap < relaxed_tol))
                relaxed = Snapshot{x, tau, pres, dres, gap};

            const double certificate_dual = by + hz;
            if (certificate_dual < 0.0 && (at_y + gt_z).norm() / -certificate_dual < tol)
                return finish(SocpStatus::infeasible, iter);
            if (cx < 0.0 && std::max(safe_norm(ax), (gx + s).norm()) / -cx < tol)
                return finish(SocpStatus::unbounded, iter);
            if (pres < 0.5 * best_pres)
            {
                best_pres = pres;
                stalled = 0;
            }
            else if (++stalled >= 20 && looks_infeasible(best_pres, certificate_dual))
                return finish(SocpStatus::infeasible, iter);
            if (iter == options.max_iters)
                return fail(SocpStatus::max_iters, iter);

            if (!ops.update(s, z, sc) || !kkt.factor(sc))
                return looks_infeasible(best_pres, certificate_dual) ? finish(SocpStatus::infeasible, iter)
                                                                     : fail(SocpStatus::numerical_error, iter);
            const VectorXd &lambda = sc.lambda;

            VectorXd x1, y1, z1;
            kkt.solve(-form.c, form.b, form.h, x1, y1, z1);
            const double denom =
                kappa / tau - (form.c.dot(x1) + (form.p ? form.b.dot(y1) : 0.0) + form.h.dot(z1));

            const double mu = (s.dot(z) + tau * kappa) / (degree + 1.0);

            struct Direction
            {
                VectorXd dx, dy, dz, ds;
                double dtau = 0.0, dkappa = 0.0;
            };
            auto direction = [&](double sigma, const VectorXd &ds_target, double dk_target) {
                Direction d;
                const double f = 1.0 - sigma;
                const VectorXd lam_div = form.jordan_divide(lambda, ds_target);
                const VectorXd w_lam_div = ops.apply_w(sc, lam_div);
                VectorXd x2, y2, z2;
                kkt.solve(-f * rx, -f * ry, -f * rz - w_lam_div, x2, y2, z2);
                const double dt_target = f * rt;
                const double num = dt_target + dk_target / tau + form.c.dot(x2) +
                                   (form.p ? form.b.dot(y2) : 0.0) + form.h.dot(z2);
                d.dtau = num / denom;
                d.dx = x2 + d.dtau * x1;
                d.dy = form.p ? VectorXd(y2 + d.dtau * y1) : VectorXd(0);
                d.dz = z2 + d.dtau * z1;
                d.ds = w_lam_div - ops.apply_w2(sc, d.dz);
                d.dkappa = (dk_target - kappa * d.dtau) / tau;
                return d;
            };
            auto step_length = [&](const Direction &d, double cap) {
                double a = std::min(form.max_step(s, d.ds, cap), form.max_step(z, d.dz, cap));
                if (d.dtau < 0.0)
                    a = std::min(a, -tau / d.dtau);
                if (d.dkappa < 0.0)
                    a = std::min(a, -kappa / d.dkappa);
                return a;
            };

            // Predictor.
            const VectorXd ds_aff = -form.jordan_product(lambda, lambda);
            const Direction aff = direction(0.0, ds_aff, -tau * kappa);
            const double alpha_aff = step_length(aff, 1.0);
            const double sigma = std::pow(1.0 - alpha_aff, 3);

            // Corrector with second-order term.
            const VectorXd ws = ops.apply_winv(sc, aff.ds);
            const VectorXd wz = ops.apply_w(sc, aff.dz);
            const VectorXd ds_cc = ds_aff - form.jordan_product(ws, wz) + sigma * mu * e;
            const double dk_cc = -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
            const Direction dir = direction(sigma, ds_cc, dk_cc);

            double alpha = std::min(1.0, 0.99 * step_length(dir, 1.0 / 0.99));
            if (!(alpha > 1e-12) || !dir.dx.allFinite())
                return looks_infeasible(best_pres, certificate_dual) ? finish(SocpStatus::infeasible, iter)
                                                                     : fail(SocpStatus::numerical_error, iter);

            x += alpha * dir.dx;
            if (form.p)
                y += alpha * dir.dy;
            z += alpha * dir.dz;
            s += alpha * dir.ds;
            tau += alpha * dir.dtau;
            kappa += alpha * dir.dkappa;
        }
        return fail(SocpStatus::max_iters, options.max_iters);
    }
} // namespace hmimos
