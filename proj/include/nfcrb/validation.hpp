// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


// Self-check suite behind `nfcrb validate`. Each check reports the worst
// deviation it measured next to the tolerance it was held to.

#ifndef NFCRB_VALIDATION_HPP
#define NFCRB_VALIDATION_HPP

#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace nfcrb
{
    enum class CheckStatus
    {
        pass,
        fail,
        skipped
    };

    inline std::string_view to_string(CheckStatus s)
    {
        switch (s)
        {
        case CheckStatus::pass:
            return "PASS";
        case CheckStatus::fail:
            return "FAIL";
        case CheckStatus::skipped:
            return "SKIP";
        }
        return "?";
    }

    struct CheckReport
    {
        std::string module;
        std::string name;
        double deviation = 0.0;
        double tolerance = 0.0;
        CheckStatus status = CheckStatus::pass;
        std::string note;
    };

    namespace detail
    {
        // Running maximum that treats NaN as an infinite deviation
        struct Worst
        {
            double value = 0.0;
            void operator()(double x) { value = std::isnan(x) ? INFINITY : std::max(value, x); }
        };

        inline double rel_err(double a, double b)
        {
            if (a == b)
                return 0.0;
            return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
        }

        inline CheckReport verdict(std::string module, std::string name, double deviation, double tolerance,
                                   std::string note = {})
        {
            const bool ok = std::isfinite(deviation) && deviation <= tolerance;
            return {std::move(module), std::move(name), deviation, tolerance,
                    ok ? CheckStatus::pass : CheckStatus::fail, std::move(note)};
        }

        template <typename Fn>
        double fd1(Fn &&f, double x, double h)
        {
            return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
        }

        template <typename Fn>
        double fd2(Fn &&f, double x, double h)
        {
            return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) / (12.0 * h * h);
        }

        inline ArrayLayout layout_100ghz(int K, int M, int I) { return make_layout(LayoutKind::wsms, K, M, I, 1e11); }

        // Global-phase-free distance between two unit-modulus steering vectors
        inline double phase_gap(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b)
        {
            const cdouble ref = a(0) * std::conj(b(0));
            const cdouble rot = ref / std::abs(ref);
            double worst = 0.0;
            for (Eigen::Index i = 0; i < a.size(); ++i)
                worst = std::max(worst, std::abs(std::arg(a(i) * std::conj(b(i) * rot))));
            return worst;
        }

        // ---------------------------------------------------------------- geometry

        inline CheckReport check_span_round_trip()
        {
            std::mt19937_64 rng(101);
            std::uniform_real_distribution<double> T(-1.4, 1.4), X(-2.0, 2.0);
            Worst w;
            for (int i = 0; i < 1000; ++i)
            {
                const double t = T(rng), x = X(rng);
                if (x * std::sin(t) == 1.0)
                    continue;
                const double psi = psi_from_x(x, t);
                const double c = std::cos(t), ca = std::cos(t - psi);
                w(rel_err(1 - 2 * x * std::sin(t) + x * x, c * c / (ca * ca)));
            }
            return verdict("geometry", "nu1 = cos^2(theta)/cos^2(theta - psi(x))", w.value, 1e-12, "1000 random (x, theta)");
        }

        inline CheckReport check_aoa_derivatives()
        {
            Worst w;
            const double R = 50.0;
            for (int i = 0; i < 20; ++i)
                for (int j = 0; j < 20; ++j)
                {
                    const double t = -1.3 + 2.6 * i / 19.0, r = 2.0 + 40.0 * j / 19.0;
                    auto sphi = [&](double tt, double rr) { return std::sin(aoa_from_geometry({R, rr, tt, 0.0})); };
                    const SceneGeometry g{R, r, t, 0.0};
                    const double ft = fd1([&](double v) { return sphi(v, r); }, t, 1e-6);
                    const double fr = fd1([&](double v) { return sphi(t, v); }, r, 1e-6 * r);
                    const double at = dsinphi_dtheta(g), ar = dsinphi_dr(g);
                    w(std::abs(at - ft) / std::max(std::abs(at), 1e-3));
                    w(std::abs(ar - fr) / std::max(std::abs(ar), 1e-3 / R));
                }
            return verdict("geometry", "d sin(phi) / d(theta, r) vs central differences", w.value, 1e-6, "20x20 grid, R = 50 m");
        }

        inline CheckReport check_triangle_inequality()
        {
            std::mt19937_64 rng(103);
            std::uniform_real_distribution<double> P(0.1, 100.0), T(-1.5, 1.5);
            Worst w;
            for (int i = 0; i < 1000; ++i)
            {
                const SceneGeometry g{P(rng), P(rng), T(rng), 0.0};
                const double d = rx_range(g);
                w(std::max({std::abs(g.R - g.r) - d, d - (g.R + g.r), 0.0}) / (g.R + g.r));
            }
            return verdict("geometry", "|R - r| <= rx_range <= R + r", w.value, 1e-15, "1000 random geometries");
        }

        // ------------------------------------------------------------ array layouts

        inline CheckReport check_position_symmetry()
        {
            Worst w;
            for (LayoutKind k : {LayoutKind::wsms, LayoutKind::ua, LayoutKind::dua})
                for (int K : {1, 2, 3, 12})
                    for (int M : {1, 2, 7, 128})
                    {
                        const auto p = element_positions(make_layout(k, K, M, 0.0015, 0.012, 0.003));
                        for (std::size_t i = 0; i < p.size(); ++i)
                            w(std::abs(p[i] + p[p.size() - 1 - i]));
                    }
            return verdict("array_layouts", "positions = -reverse(positions)", w.value, 0.0, "exact");
        }

        inline CheckReport check_index_layout()
        {
            Worst w;
            for (int K : {1, 3, 12})
                for (int M : {1, 5, 128})
                {
                    const ArrayLayout l = layout_100ghz(K, M, 3);
                    const auto p = element_positions(l);
                    int bad = static_cast<int>(p.size()) != K * M;
                    for (std::size_t i = 1; i < p.size(); ++i)
                        bad += !(p[i] > p[i - 1]);
                    // Element k M + m sits m pitches into subarray k
                    for (int k = 0; k < K && !bad; ++k)
                        for (int m = 0; m < M; ++m)
                        {
                            const double want = 0.5 * (2 * k - K + 1) * l.D() + 0.5 * (2 * m - M + 1) * l.d;
                            bad += std::abs(p[static_cast<std::size_t>(k * M + m)] - want) > 1e-12 * l.aperture();
                        }
                    w(bad);
                }
            return verdict("array_layouts", "k M + m indexing gives N_t distinct ordered slots", w.value, 0.0,
                           "violations counted");
        }

        inline CheckReport check_bundle_derivatives()
        {
            std::mt19937_64 rng(107);
            std::uniform_int_distribution<int> Kd(1, 4), Md(1, 16), Id(0, 8);
            std::uniform_real_distribution<double> T(-1.3, 1.3), U(0.2, 3.0);
            Worst w;
            for (int i = 0; i < 30; ++i)
            {
                const ArrayLayout l = layout_100ghz(Kd(rng), Md(rng), Id(rng));
                const double r = l.aperture() * U(rng) + l.lambda, t = T(rng);
                for (WavefrontModel m : {WavefrontModel::sw, WavefrontModel::hspw, WavefrontModel::pw})
                {
                    const auto b = tx_bundle(m, l, r, t);
                    const Eigen::VectorXcd ft = central_difference([&](double v) { return tx_bundle(m, l, r, v).value; }, t, 1e-6);
                    const Eigen::VectorXcd fr =
                        central_difference([&](double v) { return tx_bundle(m, l, v, t).value; }, r, 1e-6 * r);
                    // A lone element at the origin has an identically zero angle derivative
                    const double nt = std::max(ft.norm(), 1e-9), nr = std::max(fr.norm(), 1e-9);
                    w((b.d_theta - ft).norm() / nt);
                    if (m != WavefrontModel::pw)
                        w((b.d_r - fr).norm() / nr);
                }
            }
            return verdict("array_layouts", "bundle derivatives vs central differences", w.value, 1e-6,
                           "30 random layouts x 3 models, relative l2");
        }

        inline CheckReport check_far_field_limit()
        {
            const ArrayLayout l = layout_100ghz(3, 16, 3);
            const double t = 0.4;
            std::vector<double> gaps;
            for (double f : {1e2, 1e3, 1e4})
            {
                const double r = f * l.aperture();
                gaps.push_back(phase_gap(sw_tx_bundle(l, r, t).value, pw_tx_bundle(l, t).value));
            }
            const double worst_ratio = std::max(gaps[1] / gaps[0], gaps[2] / gaps[1]);
            std::ostringstream note;
            note << "phase gaps " << gaps[0] << ", " << gaps[1] << ", " << gaps[2] << " rad";
            // Each decade should shrink the gap; ratio < 1 is the requirement
            return verdict("array_layouts", "SW -> PW as r grows (gap ratio per decade)", worst_ratio,
                           std::nextafter(1.0, 0.0), note.str());
        }

        inline CheckReport check_hspw_reductions()
        {
            Worst w;
            const ArrayLayout single = layout_100ghz(5, 1, 4);
            w((hspw_tx_bundle(single, 3.0, 0.3).value - sw_tx_bundle(single, 3.0, 0.3).value).norm());
            const ArrayLayout one = layout_100ghz(1, 16, 3);
            const double r = 1e4 * one.aperture();
            w(phase_gap(hspw_tx_bundle(one, r, 0.3).value, pw_tx_bundle(one, 0.3).value));
            return verdict("array_layouts", "HSPW = SW at M = 1, HSPW = PW at K = 1", w.value, 1e-9,
                           "l2 gap and global-phase-free phase gap");
        }

        // -------------------------------------------------------------- fisher core

        inline CheckReport check_oracle_equivalence()
        {
            std::mt19937_64 rng(109);
            Worst w;
            double ri = 0.0;
            for (int i = 0; i < 20; ++i)
            {
                const WavefrontModel m = i % 2 == 0 ? WavefrontModel::sw : WavefrontModel::hspw;
                std::uniform_int_distribution<int> Kd(m == WavefrontModel::sw ? 1 : 2, 4), Md(2, 16), Id(6, 10),
                    Nd(1, 8);
                std::uniform_real_distribution<double> T(-1.0, 1.0), U(0.3, 2.0), G(5.0, 50.0);
                const ArrayLayout l = layout_100ghz(Kd(rng), Md(rng), Id(rng));
                const double r = l.aperture() * U(rng);
                const int N_r = Nd(rng);
                const SceneGeometry g{r + G(rng), r, T(rng), 0.0};
                const Receiver rx{N_r, l.d};
                const auto s = direct_crb(m, l, g, rx, 1.0, 1.0);
                const auto o = full_fisher_oracle(m, l, g, rx, 1.0, 1.0);
                w(rel_err(o.crb.crb_theta, s.crb_theta));
                w(rel_err(o.crb.crb_r, s.crb_r));
                ri = std::max(ri, std::abs(o.h_alpha_ri));
            }
            std::ostringstream note;
            note << "20 desk scenarios, max |h_alpha_R alpha_I| = " << ri;
            if (ri >= 1e-12)
                return {"fisher_core", "4x4 oracle vs Schur complement", w.value, 1e-4, CheckStatus::fail, note.str()};
            return verdict("fisher_core", "4x4 oracle vs Schur complement", w.value, 1e-4, note.str());
        }

        inline CheckReport check_gain_scaling()
        {
            Worst w;
            const ArrayLayout l = layout_100ghz(3, 32, 4);
            const SceneGeometry g{31.0, 2.0, 0.3, 0.0};
            const auto q = direct_fisher(WavefrontModel::sw, l, g, {4, l.d});
            for (double c : {2.0, 4.0, 0.5})
            {
                const auto a = crb(q, 3.0, 1.0), b = crb(q, 3.0 * c, 1.0);
                w(std::abs(b.crb_theta - a.crb_theta / c));
                w(std::abs(b.crb_r - a.crb_r / c));
            }
            const auto x = direct_crb(WavefrontModel::sw, l, g, {4, l.d}, 1.0, 1.0);
            const auto y = direct_crb(WavefrontModel::sw, l, g, {4, l.d}, 2.0, 1.0);
            w(std::abs(x.qbar.q11 - y.qbar.q11) + std::abs(x.qbar.q12 - y.qbar.q12) + std::abs(x.qbar.q22 - y.qbar.q22));
            return verdict("fisher_core", "CRB ~ 1/|beta|^2 and normalized Fisher free of alpha", w.value, 0.0,
                           "bit-exact");
        }

        inline CheckReport check_broadside_cross_term()
        {
            Worst w;
            for (int K : {1, 2, 3, 5, 12})
                for (double r : {1.0, 10.0, 40.0})
                {
                    const ArrayLayout l = layout_100ghz(K, 64, 4);
                    const auto q = direct_fisher(WavefrontModel::sw, l, {60.0, r, 0.0, 0.0}, {1, l.d});
                    w(std::abs(q.q12) / q.q11);
                }
            return verdict("fisher_core", "|q12| / q11 at theta = 0, N_r = 1", w.value, 1e-12);
        }

        // -------------------------------------------------------------- closed form

        inline CheckReport check_sum_identities()
        {
            std::mt19937_64 rng(113);
            std::uniform_int_distribution<int> Kd(1, 12), Md(1, 128), Id(0, 12);
            std::uniform_real_distribution<double> T(-1.5, 1.5), U(0.05, 10.0);
            Worst w;
            for (int i = 0; i < 100; ++i)
            {
                const ArrayLayout l = layout_100ghz(Kd(rng), Md(rng), Id(rng));
                const double r = l.aperture() * U(rng) + l.lambda, t = T(rng), c = std::cos(t);
                const auto s = sw_sums_direct(l, r, t);
                w(std::abs(s.s_r2 - (l.K * l.M - c * c * s.s_theta2)) / (l.K * l.M));
                const auto h = hspw_sums_direct(l, r, t);
                w(std::abs(h.s_r2 - (l.K - c * c * h.s_theta2)) / l.K);
                const auto z = sw_sums_direct(l, r, 0.0), zh = hspw_sums_direct(l, r, 0.0);
                w(std::abs(z.s_theta) + std::abs(z.s_thetar) + std::abs(zh.s_theta) + std::abs(zh.s_thetar));
            }
            return verdict("closed_form", "s_r2 = N - cos^2 s_theta2 and odd sums zero at theta = 0", w.value, 1e-12,
                           "100 random direct-sum scenarios");
        }

        inline CheckReport check_riemann_convergence()
        {
            double last = INFINITY, worst = 0.0;
            std::ostringstream note;
            note << "errors";
            for (int K : {3, 6, 9, 12})
            {
                const ArrayLayout l = layout_100ghz(K, 128, 3);
                const double e = rel_err(sw_sums_riemann(l, 10.0, pi / 4).s_theta2, sw_sums_direct(l, 10.0, pi / 4).s_theta2);
                worst = std::max(worst, e - last);
                last = e;
                note << " K=" << K << ":" << e;
            }
            // Non-increasing: each step's increase must not exceed zero
            return verdict("closed_form", "Riemann s_theta2 error non-increasing in K", std::max(worst, 0.0), 0.0,
                           note.str());
        }

        inline CheckReport check_subarray_ratio()
        {
            const ArrayLayout a = layout_100ghz(3, 128, 10);
            const double D2 = a.K * a.D() / 6;
            const ArrayLayout b = make_layout(LayoutKind::wsms, 6, a.M, a.d, D2 - (a.M - 1) * a.d, a.lambda);
            Worst w;
            for (double t : {0.3, -0.8})
            {
                const auto sa = sw_sums_riemann(a, 10.0, t), sb = sw_sums_riemann(b, 10.0, t);
                for (auto [x, y] : {std::pair{sa.s_theta2, sb.s_theta2}, std::pair{sa.s_theta, sb.s_theta},
                                    std::pair{sa.s_r2, sb.s_r2}, std::pair{sa.s_r, sb.s_r}, std::pair{sa.s_thetar, sb.s_thetar}})
                    w(std::abs(x / y - 0.5));
            }
            return verdict("closed_form", "sum ratio K/K' for equal aperture", w.value, 1e-9, "K = 3 vs 6, I = 10");
        }

        inline CheckReport check_psi_representation()
        {
            std::mt19937_64 rng(127);
            std::uniform_real_distribution<double> T(-1.2, 1.2), U(0.2, 3.0);
            std::uniform_int_distribution<int> Kd(1, 12), Id(0, 10);
            Worst w;
            for (int i = 0; i < 50; ++i)
            {
                const ArrayLayout l = layout_100ghz(Kd(rng), 128, Id(rng));
                const double r = l.aperture() * U(rng), t = T(rng);
                const auto x = sw_sums_riemann(l, r, t);
                const auto p = sw_sums_riemann_psi(l, angular_spans(l, {r + 50.0, r, t, 0.0}), r);
                const double scale = std::max({std::abs(x.s_theta2), std::abs(x.s_r2), 1.0});
                for (auto [u, v] : {std::pair{p.s_theta2, x.s_theta2}, std::pair{p.s_theta, x.s_theta},
                                    std::pair{p.s_r2, x.s_r2}, std::pair{p.s_r, x.s_r}, std::pair{p.s_thetar, x.s_thetar}})
                    w(std::abs(u - v) / scale);
            }
            return verdict("closed_form", "Riemann sums in x and in span angles agree", w.value, 1e-10,
                           "50 random layouts");
        }

        using KernelFn = double (*)(double, double);

        // Second x-derivative of each double antiderivative against its integrand
        inline CheckReport check_g_functions(const KernelFn G[4])
        {
            KernelFn f[4] = {
                [](double x, double t) { return x * x / antiderivative::nu1(x, t); },
                [](double x, double t) { return x / std::sqrt(antiderivative::nu1(x, t)); },
                [](double x, double t) { return 1.0 / std::sqrt(antiderivative::nu1(x, t)); },
                [](double x, double t) { return x / antiderivative::nu1(x, t); },
            };
            std::mt19937_64 rng(131);
            std::uniform_real_distribution<double> X(-3.0, 3.0), T(-1.3, 1.3);
            Worst w;
            for (int i = 0; i < 100; ++i)
            {
                const double x = X(rng), t = T(rng);
                for (int j = 0; j < 4; ++j)
                {
                    const double want = f[j](x, t);
                    w(std::abs(fd2([&](double v) { return G[j](v, t); }, x, 1e-3) - want) / std::max(1.0, std::abs(want)));
                }
            }
            return verdict("closed_form", "G'' equals the sum integrands", w.value, 1e-6, "100 random (x, theta)");
        }

        inline CheckReport check_antiderivatives()
        {
            using namespace antiderivative;
            const std::pair<KernelFn, KernelFn> pairs[] = {
                {f_theta2, f_theta2_integrand},   {ln_nu1_int, ln_nu1_integrand},
                {arctan_nu2_int, arctan_nu2_integrand}, {x_over_sqrt_nu1, x_over_sqrt_nu1_integrand},
                {sqrt_nu1_int, sqrt_nu1_integrand}, {artanh_int, artanh_integrand},
                {ln_sqrt_term_int, ln_sqrt_term_integrand},
            };
            std::mt19937_64 rng(137);
            std::uniform_real_distribution<double> X(-3.0, 3.0), T(-1.3, 1.3);
            Worst w;
            for (int i = 0; i < 100; ++i)
            {
                const double x = X(rng), t = T(rng);
                for (const auto &[F, f] : pairs)
                {
                    const double want = f(x, t);
                    w(std::abs(fd1([&](double v) { return F(v, t); }, x, 1e-5) - want) / std::max(1.0, std::abs(want)));
                }
            }
            return verdict("closed_form", "antiderivative slopes equal their integrands", w.value, 1e-6,
                           "7 primitives x 100 random (x, theta)");
        }

        inline CheckReport check_span_slope()
        {
            Worst w;
            int non_increasing = 0;
            double last = g_theta2_psi(0.0, 0.0);
            for (int i = 1; i < 1000; ++i)
            {
                const double psi = 0.5 * pi * i / 1000.0;
                const double exact = dg_theta2_dpsi_theta0(psi);
                w(std::abs(fd1([](double p) { return g_theta2_psi(p, 0.0); }, psi, 1e-5) - exact) / std::max(1.0, exact));
                const double g = g_theta2_psi(psi, 0.0);
                non_increasing += !(g > last) || !(exact > 0.0);
                last = g;
            }
            if (non_increasing)
                return {"closed_form", "G_theta2(psi, 0) strictly increasing on (0, pi/2)", w.value, 1e-6,
                        CheckStatus::fail, std::to_string(non_increasing) + " non-increasing samples"};
            return verdict("closed_form", "G_theta2(psi, 0) strictly increasing on (0, pi/2)", w.value, 1e-6,
                           "slope sec^2(psi)(tan(psi) - psi) vs finite differences");
        }

        inline CheckReport check_riemann_theta_edge()
        {
            try
            {
                (void)sw_sums_riemann(layout_100ghz(3, 128, 3), 10.0, 1.5);
            }
            catch (const Error &e)
            {
                if (e.code() == ErrorCode::singularity_near_pi2)
                    return {"closed_form", "Riemann closed form at |theta| = 1.5", 0.0, 0.0, CheckStatus::skipped,
                            "skipped by precondition (|theta| > 1.45)"};
            }
            return {"closed_form", "Riemann closed form at |theta| = 1.5", INFINITY, 0.0, CheckStatus::fail,
                    "expected a singularity_near_pi2 refusal"};
        }

        // ------------------------------------------------------------- crb analytic

        // The raw-sum assembly subtracts (s/N)^2 from s2/N and keeps only the digits that survive
        inline double assembly_rounding(const SumFormulas &f, const NormalizedFisher &q, const ArrayLayout &l,
                                        WavefrontModel m)
        {
            const double N = m == WavefrontModel::sw ? static_cast<double>(l.K) * l.M : l.K;
            const double k11 = (f.s_theta2 / N) / (f.s_theta2 / N - f.s_theta * f.s_theta / (N * N));
            const double k22 = (f.s_r2 / N) / (f.s_r2 / N - f.s_r * f.s_r / (N * N));
            return 1e-14 * (std::abs(k11) + std::abs(k22)) * q.q11 * q.q22 / q.det();
        }

        inline CheckReport check_closed_direct_coherence()
        {
            std::mt19937_64 rng(139);
            std::uniform_int_distribution<int> Kd(2, 6), Md(2, 64), Id(0, 10), Nd(1, 12);
            std::uniform_real_distribution<double> T(-1.3, 1.3), U(0.2, 4.0);
            Worst w;
            for (int i = 0; i < 40; ++i)
            {
                const ArrayLayout l = layout_100ghz(Kd(rng), Md(rng), Id(rng));
                const double r = l.aperture() * U(rng);
                const SceneGeometry g{r + 30.0, r, T(rng), 0.0};
                const Receiver rx{Nd(rng), l.d};
                for (WavefrontModel m : {WavefrontModel::sw, WavefrontModel::hspw})
                {
                    const auto f = m == WavefrontModel::sw ? sw_sums_direct(l, r, g.theta) : hspw_sums_direct(l, r, g.theta);
                    const auto a = crb_from_sums(f, l, g, rx, 1.0, 1.0);
                    const auto b = direct_crb(m, l, g, rx, 1.0, 1.0);
                    const double allow = 1e-10 + assembly_rounding(f, a.qbar, l, m);
                    w(rel_err(a.crb_theta, b.crb_theta) / allow);
                    w(rel_err(a.crb_r, b.crb_r) / allow);
                }
            }
            return verdict("crb_analytic", "direct sums through the closed-form assembly vs fisher_core", w.value, 1.0,
                           "relative error over 1e-10 plus the rounding of s2/N - (s/N)^2; 40 scenarios, SW and HSPW");
        }

        inline CheckReport check_crb_ratio()
        {
            const ArrayLayout a = layout_100ghz(3, 128, 10);
            const double D2 = a.K * a.D() / 6;
            const ArrayLayout b = make_layout(LayoutKind::wsms, 6, a.M, a.d, D2 - (a.M - 1) * a.d, a.lambda);
            Worst w;
            for (double t : {0.0, 0.3})
                for (int N_r : {1, 8})
                {
                    const SceneGeometry g{100.0, 10.0, t, 0.0};
                    const Receiver rx{N_r, a.d};
                    const auto sa = sw_crb_closed(a, g, rx, 1.0, 1.0), sb = sw_crb_closed(b, g, rx, 1.0, 1.0);
                    const auto ha = hspw_crb_closed(a, g, rx, 1.0, 1.0), hb = hspw_crb_closed(b, g, rx, 1.0, 1.0);
                    for (double v : {sb.crb_theta / sa.crb_theta, sb.crb_r / sa.crb_r, hb.crb_theta / ha.crb_theta,
                                     hb.crb_r / ha.crb_r})
                        w(std::abs(v - 0.5));
                }
            return verdict("crb_analytic", "CRB ratio K/K' for equal aperture (SW and HSPW)", w.value, 1e-9);
        }

        inline CheckReport check_theta0_specializations()
        {
            Worst w;
            for (int K : {2, 3, 12})
                for (int N_r : {1, 18, 35})
                    for (double r : {1.0, 4.0, 10.0})
                    {
                        const ArrayLayout l = layout_100ghz(K, 128, 10);
                        const double R = 31.0;
                        const SceneGeometry g{R, r, 0.0, 0.0};
                        const Receiver rx{N_r, l.d};
                        const auto s = angular_spans(l, g);
                        const auto z = sw_crb_theta0(*s.psi0, *s.delta_psi, l, R, r, rx, 1.0, 1.0);
                        const auto c = sw_crb_closed(l, g, rx, 1.0, 1.0);
                        w(rel_err(z.crb_theta, c.crb_theta));
                        w(rel_err(z.crb_r, c.crb_r));
                        const auto hz = hspw_crb_theta0(hspw_span(l, r), K, l.M, l.d, l.lambda, R, r, rx, 1.0, 1.0);
                        const auto hc = hspw_crb_closed(l, g, rx, 1.0, 1.0);
                        w(rel_err(hz.crb_theta, hc.crb_theta));
                        w(rel_err(hz.crb_r, hc.crb_r));
                    }
            return verdict("crb_analytic", "theta = 0 span forms vs general closed forms", w.value, 1e-10,
                           "K in {2,3,12}, N_r in {1,18,35}, r in {1,4,10}, I = 10");
        }

        inline CheckReport check_asymptotic_sandwich()
        {
            const ArrayLayout l = layout_100ghz(2, 128, 0);
            const double R = 50.0, r = 10.0;
            const Receiver rx{12, l.d};
            const auto b = hspw_crb_asymptotes(2, l.M, l.d, l.lambda, R, r, rx, 1.0, 1.0);
            int outside = 0;
            for (int i = 0; i <= 290; ++i)
            {
                const double v = hspw_crb_theta0(0.1 + 0.01 * i, 2, l.M, l.d, l.lambda, R, r, rx, 1.0, 1.0).crb_theta;
                outside += !(v > b.lower.crb_theta && v < b.upper.crb_theta);
            }
            return verdict("crb_analytic", "interior psi0 angle bounds between the two asymptotes", outside, 0.0,
                           "psi0 in [0.1, 3.0], samples outside counted");
        }

        inline CheckReport check_wsms_vs_ua()
        {
            const double lambda = wavelength(1e11), d = lambda / 2;
            int wrong = 0;
            double worst_ratio = 0.0;
            for (int I = 1; I <= 13; ++I)
            {
                const auto c = compare_wsms_ua(3, 128, d, inter_subarray_gap(I, lambda), lambda, {100.0, 10.0, 0.0, 0.0},
                                               {1, d}, 1.0, 1.0);
                wrong += c.verdict != Verdict::wsms_better;
                worst_ratio = std::max(worst_ratio, c.wsms.crb_theta / c.ua.crb_theta);
            }
            std::ostringstream note;
            note << "worst CRB_wsms/CRB_ua = " << worst_ratio;
            return verdict("crb_analytic", "WSMS angle bound below the uniform array, I = 1..13", wrong, 0.0, note.str());
        }

        // --------------------------------------------------------------- experiment

        inline CheckReport check_csv_schema()
        {
            std::ostringstream os;
            write_csv(os, {run_point(ScenarioConfig{})});
            const std::string text = os.str();
            const std::string first = text.substr(0, text.find('\n'));
            const auto cols = [](const std::string &line) { return std::count(line.begin(), line.end(), ',') + 1; };
            const std::string row = text.substr(first.size() + 1, text.size() - first.size() - 2);
            const bool ok = first == csv_header() && cols(first) == 15 && cols(row) == 15;
            return verdict("experiment", "CSV header and row width", ok ? 0.0 : 1.0, 0.0, "15 columns");
        }

        inline CheckReport check_determinism()
        {
            std::ostringstream a, b;
            write_csv(a, run_figure("fig9"));
            write_csv(b, run_figure("fig9"));
            return verdict("experiment", "repeated figure runs are byte-identical", a.str() == b.str() ? 0.0 : 1.0, 0.0,
                           "fig9 twice");
        }

        inline CheckReport check_presets()
        {
            int bad = 0;
            for (const auto &name : figure_names())
                for (const auto &c : figure_points(name))
                    bad += c.frequency_hz != 1e11 || c.M != 128 || c.spacing() != c.lambda() / 2;
            for (const auto &c : figure_points("fig6"))
                bad += c.R != 31.0 || c.K != 12 || c.theta != 0.0;
            for (const auto &c : figure_points("fig7"))
                bad += c.R != 50.0 || c.K != 2 || c.N_r != 12 || c.r != 10.0 || c.I < 0 || c.I > 20;
            for (const auto &c : figure_points("fig9"))
                bad += c.K != 3 || c.r != 10.0 || c.I < 1 || c.I > 13 || c.N_r != 1;
            return verdict("experiment", "figure presets carry the published parameters", bad, 0.0,
                           "mismatching points counted");
        }
    }

    inline std::vector<std::function<CheckReport()>> validation_checks()
    {
        using namespace detail;
        static const KernelFn G[4] = {g_theta2, g_theta, g_r, g_thetar};
        return {check_span_round_trip,
                check_aoa_derivatives,
                check_triangle_inequality,
                check_position_symmetry,
                check_index_layout,
                check_bundle_derivatives,
                check_far_field_limit,
                check_hspw_reductions,
                check_oracle_equivalence,
                check_gain_scaling,
                check_broadside_cross_term,
                check_sum_identities,
                check_riemann_convergence,
                check_subarray_ratio,
                check_psi_representation,
                [] { return check_g_functions(G); },
                check_antiderivatives,
                check_span_slope,
                check_riemann_theta_edge,
                check_closed_direct_coherence,
                check_crb_ratio,
                check_theta0_specializations,
                check_asymptotic_sandwich,
                check_wsms_vs_ua,
                check_csv_schema,
                check_determinism,
                check_presets};
    }

    // A check that throws is reported as failed with the error text
    inline std::vector<CheckReport> run_validation()
    {
        std::vector<CheckReport> out;
        for (const auto &check : validation_checks())
        {
            try
            {
                out.push_back(check());
            }
            catch (const std::exception &e)
            {
                out.push_back({"?", "check raised", INFINITY, 0.0, CheckStatus::fail, e.what()});
            }
        }
        return out;
    }

    inline bool all_passed(const std::vector<CheckReport> &reports)
    {
        return std::none_of(reports.begin(), reports.end(),
                            [](const CheckReport &r) { return r.status == CheckStatus::fail; });
    }

    inline void write_report(std::ostream &os, const std::vector<CheckReport> &reports)
    {
        for (const auto &r : reports)
        {
            os << to_string(r.status) << "  " << std::left << std::setw(14) << r.module << ' ' << r.name
               << "  worst=" << std::setprecision(3) << std::scientific << r.deviation << " tol=" << r.tolerance
               << std::defaultfloat;
            if (!r.note.empty())
                os << "  (" << r.note << ')';
            os << '\n';
        }
        const auto failed = std::count_if(reports.begin(), reports.end(),
                                          [](const CheckReport &r) { return r.status == CheckStatus::fail; });
        os << reports.size() << " checks, " << failed << " failed\n";
    }
}

#endif
