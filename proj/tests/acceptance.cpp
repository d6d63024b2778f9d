// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


// Acceptance criteria A1..A12. One line per criterion:
//   A<n> PASS|FAIL  measured=<worst> limit=<tolerance>  <detail>
// With arguments only the named criteria run. Exit status is nonzero if any fails.

#include <nfcrb/nfcrb.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace nfcrb;

namespace
{
    struct Outcome
    {
        bool pass = false;
        double measured = 0.0;
        double limit = 0.0;
        std::string detail;
    };

    double rel(double a, double b) { return a == b ? 0.0 : std::abs(a - b) / std::abs(b); }

    ArrayLayout wsms(int K, int M, int I) { return make_layout(LayoutKind::wsms, K, M, I, 1e11); }

    std::vector<double> linspace(double a, double b, int n)
    {
        std::vector<double> v;
        for (int i = 0; i < n; ++i)
            v.push_back(i == n - 1 ? b : a + (b - a) * i / (n - 1));
        return v;
    }

    double worst_sum_error(const SumFormulas &a, const SumFormulas &b)
    {
        return std::max({rel(a.s_theta2, b.s_theta2), rel(a.s_theta, b.s_theta), rel(a.s_r2, b.s_r2),
                         rel(a.s_r, b.s_r), rel(a.s_thetar, b.s_thetar)});
    }

    template <typename Fn>
    double fd1(Fn &&f, double x, double h)
    {
        return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
    }

    // Riemann vs direct sums, 5% at K = 3 and 1% at K = 12
    Outcome a1()
    {
        std::ostringstream os;
        bool pass = true;
        double worst_ratio = 0.0;
        for (auto [K, tol] : {std::pair{3, 0.05}, std::pair{12, 0.01}})
        {
            const ArrayLayout l = wsms(K, 128, 3);
            const double e = worst_sum_error(sw_sums_riemann(l, 10.0, pi / 4), sw_sums_direct(l, 10.0, pi / 4));
            pass = pass && e <= tol;
            worst_ratio = std::max(worst_ratio, e / tol);
            os << "K=" << K << " worst=" << e << " (tol " << tol << ") ";
        }
        return {pass, worst_ratio, 1.0, os.str() + "measured = worst error / tolerance"};
    }

    // Closed-form vs direct root CRBs over r in [2, 50]
    Outcome a2()
    {
        std::ostringstream os;
        bool pass = true;
        double worst_ratio = 0.0;
        for (int K : {3, 6, 9, 12})
        {
            const double tol = K == 3 ? 0.10 : 0.05;
            const ArrayLayout l = wsms(K, 128, 3);
            double et = 0.0, er = 0.0;
            for (double r : linspace(2.0, 50.0, 25))
            {
                const SceneGeometry g{100.0, r, pi / 4, 0.0};
                const auto c = sw_crb_closed(l, g, {1, l.d}, 1.0, 1.0);
                const auto d = direct_crb(WavefrontModel::sw, l, g, {1, l.d}, 1.0, 1.0);
                et = std::max(et, rel(std::sqrt(c.crb_theta), std::sqrt(d.crb_theta)));
                er = std::max(er, rel(std::sqrt(c.crb_r), std::sqrt(d.crb_r)));
            }
            pass = pass && et <= tol && er <= tol;
            worst_ratio = std::max({worst_ratio, et / tol, er / tol});
            os << "K=" << K << " theta=" << et << " r=" << er << " (tol " << tol << ") ";
        }
        return {pass, worst_ratio, 1.0, os.str() + "measured = worst error / tolerance"};
    }

    // Exact identity of the direct sums
    Outcome a3()
    {
        std::mt19937_64 rng(3003);
        std::uniform_int_distribution<int> Kd(1, 12), Md(1, 128), Id(0, 12);
        std::uniform_real_distribution<double> T(-1.5, 1.5), U(0.05, 10.0);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i)
        {
            const ArrayLayout l = wsms(Kd(rng), Md(rng), Id(rng));
            const double r = l.aperture() * U(rng) + l.lambda, t = T(rng), c = std::cos(t);
            const auto s = sw_sums_direct(l, r, t);
            const auto h = hspw_sums_direct(l, r, t);
            worst = std::max(worst, std::abs(s.s_r2 - (l.K * l.M - c * c * s.s_theta2)) / (l.K * l.M));
            worst = std::max(worst, std::abs(h.s_r2 - (l.K - c * c * h.s_theta2)) / l.K);
        }
        return {worst <= 1e-12, worst, 1e-12, "100 random scenarios, SW and HSPW"};
    }

    // Odd sums vanish at theta = 0
    Outcome a4()
    {
        std::mt19937_64 rng(4004);
        std::uniform_int_distribution<int> Kd(1, 12), Md(1, 128), Id(0, 12);
        std::uniform_real_distribution<double> U(0.1, 10.0);
        double direct = 0.0, riemann = 0.0;
        for (int i = 0; i < 20; ++i)
        {
            const ArrayLayout l = wsms(Kd(rng), Md(rng), Id(rng));
            const double r = l.aperture() * U(rng) + l.lambda;
            const auto d = sw_sums_direct(l, r, 0.0);
            const auto q = sw_sums_riemann(l, r, 0.0);
            direct = std::max({direct, std::abs(d.s_theta), std::abs(d.s_thetar)});
            riemann = std::max({riemann, std::abs(q.s_theta), std::abs(q.s_thetar)});
        }
        std::ostringstream os;
        os << "direct " << direct << " (tol 1e-12), riemann " << riemann << " (tol 1e-10)";
        return {direct < 1e-12 && riemann < 1e-10, std::max(direct / 1e-12, riemann / 1e-10), 1.0, os.str()};
    }

    // K = 3 vs K' = 6 at half the pitch, closed paths
    Outcome a5()
    {
        const ArrayLayout a = wsms(3, 128, 10);
        const ArrayLayout b = make_layout(LayoutKind::wsms, 6, a.M, a.d, a.D() / 2 - (a.M - 1) * a.d, a.lambda);
        const SceneGeometry g{100.0, 10.0, 0.3, 0.0};
        const auto sa = sw_sums_riemann(a, g.r, g.theta), sb = sw_sums_riemann(b, g.r, g.theta);
        std::vector<double> ratios = {sa.s_theta2 / sb.s_theta2, sa.s_theta / sb.s_theta, sa.s_r2 / sb.s_r2,
                                      sa.s_r / sb.s_r, sa.s_thetar / sb.s_thetar};
        for (int N_r : {1, 8})
        {
            const Receiver rx{N_r, a.d};
            const auto ca = sw_crb_closed(a, g, rx, 1.0, 1.0), cb = sw_crb_closed(b, g, rx, 1.0, 1.0);
            const auto ha = hspw_crb_closed(a, g, rx, 1.0, 1.0), hb = hspw_crb_closed(b, g, rx, 1.0, 1.0);
            ratios.insert(ratios.end(), {cb.crb_theta / ca.crb_theta, cb.crb_r / ca.crb_r, hb.crb_theta / ha.crb_theta,
                                         hb.crb_r / ha.crb_r});
        }
        double worst = 0.0;
        for (double v : ratios)
            worst = std::max(worst, std::abs(v - 0.5));
        return {worst <= 1e-9, worst, 1e-9, "5 sum ratios + SW/HSPW CRB ratios at N_r = 1, 8; I = 10, theta = 0.3"};
    }

    // WSMS beats UA at theta = 0, and both bounds fall as the gap grows
    Outcome a6()
    {
        const double lambda = wavelength(1e11), d = lambda / 2;
        int wrong = 0, rising = 0;
        double worst = 0.0, prev_w = INFINITY, prev_u = INFINITY;
        for (int I = 1; I <= 13; ++I)
        {
            const auto c = compare_wsms_ua(3, 128, d, inter_subarray_gap(I, lambda), lambda, {100.0, 10.0, 0.0, 0.0},
                                           {1, d}, 1.0, 1.0);
            wrong += !(c.wsms.crb_theta < c.ua.crb_theta);
            rising += !(c.wsms.crb_theta < prev_w) + !(c.ua.crb_theta < prev_u);
            prev_w = c.wsms.crb_theta;
            prev_u = c.ua.crb_theta;
            worst = std::max(worst, c.wsms.crb_theta / c.ua.crb_theta);
        }
        std::ostringstream os;
        os << "worst CRB_wsms/CRB_ua=" << worst << ", order violations " << wrong << ", non-decreasing steps " << rising;
        return {wrong == 0 && rising == 0, static_cast<double>(wrong + rising), 0.0, os.str()};
    }

    // 4x4 finite-difference oracle vs Schur complement
    Outcome a7()
    {
        std::mt19937_64 rng(7007);
        double worst = 0.0, ri = 0.0;
        for (int i = 0; i < 20; ++i)
        {
            const WavefrontModel m = i % 2 == 0 ? WavefrontModel::sw : WavefrontModel::hspw;
            std::uniform_int_distribution<int> Kd(m == WavefrontModel::sw ? 1 : 2, 4), Md(2, 16), Id(6, 10), Nd(1, 8);
            std::uniform_real_distribution<double> T(-1.0, 1.0), U(0.3, 2.0), G(5.0, 50.0);
            const ArrayLayout l = wsms(Kd(rng), Md(rng), Id(rng));
            const double r = l.aperture() * U(rng);
            const Receiver rx{Nd(rng), l.d};
            const SceneGeometry g{r + G(rng), r, T(rng), 0.0};
            const auto s = direct_crb(m, l, g, rx, {0.8, 0.6}, 1.0);
            const auto o = full_fisher_oracle(m, l, g, rx, {0.8, 0.6}, 1.0);
            worst = std::max({worst, rel(o.crb.crb_theta, s.crb_theta), rel(o.crb.crb_r, s.crb_r)});
            ri = std::max(ri, std::abs(o.h_alpha_ri));
        }
        std::ostringstream os;
        os << "20 scenarios, max |h_alpha_R alpha_I| = " << ri << " (tol 1e-12)";
        return {worst < 1e-4 && ri < 1e-12, worst, 1e-4, os.str()};
    }

    // Antiderivatives: slopes and definite integrals
    Outcome a8()
    {
        using namespace antiderivative;
        using Fn = double (*)(double, double);
        const std::pair<Fn, Fn> pairs[] = {
            {f_theta2, f_theta2_integrand},           {ln_nu1_int, ln_nu1_integrand},
            {arctan_nu2_int, arctan_nu2_integrand},   {x_over_sqrt_nu1, x_over_sqrt_nu1_integrand},
            {sqrt_nu1_int, sqrt_nu1_integrand},       {artanh_int, artanh_integrand},
            {ln_sqrt_term_int, ln_sqrt_term_integrand},
        };
        std::mt19937_64 rng(8008);
        std::uniform_real_distribution<double> X(-3.0, 3.0), T(-1.3, 1.3);
        double slope = 0.0, integral = 0.0;
        for (int i = 0; i < 100; ++i)
        {
            const double x = X(rng), t = T(rng);
            for (const auto &[F, f] : pairs)
            {
                const double want = f(x, t);
                slope = std::max(slope, std::abs(fd1([&](double v) { return F(v, t); }, x, 1e-5) - want) /
                                            std::max(std::abs(want), 1e-3));
            }
        }
        for (int i = 0; i < 20; ++i)
        {
            double a = X(rng), b = X(rng);
            const double t = T(rng);
            if (a > b)
                std::swap(a, b);
            for (const auto &[F, f] : pairs)
            {
                const double q = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                    [&](double v) { return f(v, t); }, a, b, 15, 1e-13);
                integral = std::max(integral, std::abs(F(b, t) - F(a, t) - q) / std::max(std::abs(q), 1.0));
            }
        }
        std::ostringstream os;
        os << "slopes " << slope << " (tol 1e-6), definite integrals " << integral << " (tol 1e-9)";
        return {slope <= 1e-6 && integral <= 1e-9, std::max(slope / 1e-6, integral / 1e-9), 1.0, os.str()};
    }

    // HSPW gap sweep against the two asymptotes. Two symmetric centers at theta = 0 carry
    // no range information, q12 = 0, so the angle-only bound is the exact CRB_theta.
    Outcome a9()
    {
        const double R = 50.0, r = 10.0;
        double prev = INFINITY, last = 0.0, closed_last = 0.0;
        int non_monotone = 0, outside = 0;
        AsymptoticBounds b{};
        for (int I = 0; I <= 20; ++I)
        {
            const ArrayLayout l = wsms(2, 128, I);
            const Receiver rx{12, l.d};
            const SceneGeometry g{R, r, 0.0, 0.0};
            b = hspw_crb_asymptotes(2, l.M, l.d, l.lambda, R, r, rx, 1.0, 1.0);
            const NormalizedFisher q = direct_fisher(WavefrontModel::hspw, l, g, rx);
            const double v = crb_theta_only(q, received_gain(1.0, rx.count, l.element_count()), 1.0).crb_theta;
            non_monotone += !(v < prev);
            outside += !(v > b.lower.crb_theta && v < b.upper.crb_theta);
            prev = v;
            last = v;
            closed_last = hspw_crb_closed(l, g, rx, 1.0, 1.0).crb_theta;
        }
        const double gap = rel(last, b.lower.crb_theta);
        std::ostringstream os;
        os << "I=20 is " << gap << " above the psi0->pi bound (tol 0.01), non-monotone steps " << non_monotone
           << ", outside the bounds " << outside << "; closed form at I=20: " << rel(closed_last, b.lower.crb_theta);
        return {gap <= 0.01 && non_monotone == 0 && outside == 0, gap, 0.01, os.str()};
    }

    // Range bound grows and angle bound falls with r
    Outcome a10()
    {
        const ArrayLayout l = wsms(12, 128, 3);
        double pt = INFINITY, pr = 0.0;
        int bad = 0;
        for (double r : linspace(2.0, 50.0, 25))
        {
            const auto c = direct_crb(WavefrontModel::sw, l, {100.0, r, pi / 4, 0.0}, {1, l.d}, 1.0, 1.0);
            bad += !(c.crb_theta < pt) + !(c.crb_r > pr);
            pt = c.crb_theta;
            pr = c.crb_r;
        }
        return {bad == 0, static_cast<double>(bad), 0.0, "order violations over 25 ranges"};
    }

    // RX-aided collapse of the angle bound as the target nears the receiver
    Outcome a11()
    {
        const ArrayLayout l = wsms(12, 128, 10);
        const double R = 31.0;
        auto sweep = [&](int N_r, int &bad) {
            double prev = INFINITY, first = 0.0, last = 0.0;
            const auto grid = linspace(25.0, 30.9, 60);
            for (double r : grid)
            {
                const double v = direct_crb(WavefrontModel::sw, l, {R, r, 0.0, 0.0}, {N_r, l.d}, 1.0, 1.0).crb_theta;
                bad += !(v < prev);
                if (r == grid.front())
                    first = v;
                last = v;
                prev = v;
            }
            return last / first;
        };
        int bad35 = 0, bad1 = 0;
        const double ratio35 = sweep(35, bad35), ratio1 = sweep(1, bad1);
        std::ostringstream os;
        os << "N_r=35 CRB(30.9)/CRB(25)=" << ratio35 << " (tol 0.01), non-decreasing steps " << bad35
           << "; N_r=1 ratio=" << ratio1 << " (must exceed 0.1)";
        return {ratio35 < 0.01 && bad35 == 0 && ratio1 > 0.1, ratio35, 0.01, os.str()};
    }

    // Planar model error shrinks with range
    Outcome a12()
    {
        const ArrayLayout l = wsms(12, 128, 12);
        auto err = [&](double r) {
            const SceneGeometry g{100.0, r, pi / 4, 0.0};
            const double sw = direct_crb(WavefrontModel::sw, l, g, {1, l.d}, 1.0, 1.0).crb_theta;
            const auto q = direct_fisher(WavefrontModel::pw, l, g, {1, l.d});
            const double pw = crb_theta_only(q, received_gain(1.0, 1, l.element_count()), 1.0).crb_theta;
            return std::abs(pw - sw) / sw;
        };
        const double e2 = err(2.0), e50 = err(50.0);
        std::ostringstream os;
        os << "error at r=2: " << e2 << ", at r=50: " << e50;
        return {e2 > e50, e50 / e2, 1.0, os.str() + "; measured = ratio, must stay below 1"};
    }
}

int main(int argc, char **argv)
{
    const std::map<std::string, std::function<Outcome()>> criteria = {
        {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},   {"A5", a5},   {"A6", a6},
        {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}, {"A11", a11}, {"A12", a12},
    };
    std::vector<std::string> wanted;
    for (int i = 1; i < argc; ++i)
        wanted.emplace_back(argv[i]);
    if (wanted.empty())
        for (int i = 1; i <= 12; ++i)
            wanted.push_back("A" + std::to_string(i));

    int failures = 0;
    for (const auto &id : wanted)
    {
        const auto it = criteria.find(id);
        if (it == criteria.end())
        {
            std::fprintf(stderr, "unknown criterion %s\n", id.c_str());
            return 2;
        }
        Outcome o;
        try
        {
            o = it->second();
        }
        catch (const std::exception &e)
        {
            o = {false, INFINITY, 0.0, std::string("raised: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%-4s %s  measured=%.4g limit=%.4g  %s\n", id.c_str(), o.pass ? "PASS" : "FAIL", o.measured,
                    o.limit, o.detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}
