// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


#ifndef NFCRB_CRB_ANALYTIC_HPP
#define NFCRB_CRB_ANALYTIC_HPP

#include "array_layouts.hpp"
#include "closed_form.hpp"
#include "errors.hpp"
#include "fisher_core.hpp"
#include "geometry.hpp"
#include "layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nfcrb
{
    struct ChiFactors
    {
        double chi_Nr = 0.0;    // pi^2 d_r^2 (N_r^2 - 1) / (3 lambda^2)
        double chi_Nt = 0.0;    // 4 pi^2 r^2 cos^2(theta) / lambda^2, also used for the K-sums
        double chi_M = 0.0;     // pi^2 d^2 (M^2 - 1) / (3 lambda^2)
        double phi_theta = 0.0; // d(sin phi)/d theta, zero when N_r = 1
        double phi_r = 0.0;     // d(sin phi)/d r, zero when N_r = 1
    };

    inline ChiFactors chi_factors(const ArrayLayout &layout, const SceneGeometry &g, const Receiver &rx)
    {
        validate(g);
        detail::require_zero_vartheta(g);
        detail::require(rx.count >= 1, ErrorCode::precondition, "N_r must be at least 1");
        const ArrayLayout w = as_wsms(layout);
        const double l2 = w.lambda * w.lambda;
        const double c = std::cos(g.theta);
        ChiFactors x;
        x.chi_Nt = 4.0 * pi * pi * g.r * g.r * c * c / l2;
        x.chi_M = pi * pi * w.d * w.d * (static_cast<double>(w.M) * w.M - 1.0) / (3.0 * l2);
        if (rx.count > 1)
        {
            x.chi_Nr = pi * pi * rx.spacing * rx.spacing * (static_cast<double>(rx.count) * rx.count - 1.0) / (3.0 * l2);
            x.phi_theta = dsinphi_dtheta(g);
            x.phi_r = dsinphi_dr(g);
        }
        return x;
    }

    // Normalized Fisher matrix from the five sums. SW sums run over N = K M elements,
    // HSPW sums over the K centers plus the planar intra-subarray term.
    inline NormalizedFisher assemble_fisher(const SumFormulas &f, const ArrayLayout &layout, const SceneGeometry &g,
                                            const Receiver &rx)
    {
        detail::require(f.model != WavefrontModel::pw, ErrorCode::precondition, "sum formulas cover SW and HSPW only");
        const ChiFactors x = chi_factors(layout, g, rx);
        const ArrayLayout w = as_wsms(layout);
        const double N = f.model == WavefrontModel::sw ? static_cast<double>(w.K) * w.M : static_cast<double>(w.K);
        const double rc = g.r * std::cos(g.theta);

        NormalizedFisher q;
        q.q11 = x.chi_Nt * (f.s_theta2 / N - f.s_theta * f.s_theta / (N * N)) + x.chi_Nr * x.phi_theta * x.phi_theta;
        q.q12 = x.chi_Nt / rc * (f.s_thetar / N - f.s_theta * f.s_r / (N * N)) + x.chi_Nr * x.phi_theta * x.phi_r;
        q.q22 = x.chi_Nt / (rc * rc) * (f.s_r2 / N - f.s_r * f.s_r / (N * N)) + x.chi_Nr * x.phi_r * x.phi_r;
        if (f.model == WavefrontModel::hspw)
        {
            const double c = std::cos(g.theta);
            q.q11 += x.chi_M * c * c;
        }
        return q;
    }

    inline CrbResult crb_from_sums(const SumFormulas &f, const ArrayLayout &layout, const SceneGeometry &g,
                                   const Receiver &rx, cdouble alpha, double sigma_n_sq, const CrbOptions &opt = {})
    {
        const NormalizedFisher q = assemble_fisher(f, layout, g, rx);
        return crb(q, received_gain(alpha, rx.count, layout.element_count()), sigma_n_sq, opt);
    }

    inline CrbResult sw_crb_closed(const ArrayLayout &layout, const SceneGeometry &g, const Receiver &rx,
                                   cdouble alpha, double sigma_n_sq, const CrbOptions &opt = {})
    {
        validate(g);
        return crb_from_sums(sw_sums_riemann(layout, g.r, g.theta), layout, g, rx, alpha, sigma_n_sq, opt);
    }

    inline CrbResult hspw_crb_closed(const ArrayLayout &layout, const SceneGeometry &g, const Receiver &rx,
                                     cdouble alpha, double sigma_n_sq, const CrbOptions &opt = {})
    {
        validate(g);
        return crb_from_sums(hspw_sums_closed(layout, g.r, g.theta), layout, g, rx, alpha, sigma_n_sq, opt);
    }

    namespace detail
    {
        // RX angle information at theta = 0, where d(sin phi)/d theta = r/|R - r|
        inline double rx_term_theta0(double R, double r, const Receiver &rx)
        {
            if (rx.count == 1)
                return 0.0;
            if (r == R)
                fail(ErrorCode::degenerate_geometry, "target coincides with the RX");
            const double ratio = r / (R - r);
            return rx.spacing * rx.spacing * (static_cast<double>(rx.count) * rx.count - 1.0) / 12.0 * ratio * ratio;
        }
    }

    // SW bounds at theta = 0 written in the span angles of the layout
    inline CrbResult sw_crb_theta0(double psi0, double delta_psi, const ArrayLayout &layout, double R, double r,
                                   const Receiver &rx, cdouble alpha, double sigma_n_sq)
    {
        validate(SceneGeometry{R, r, 0.0, 0.0});
        const RiemannBounds b = riemann_bounds(layout, r);
        const ArrayLayout w = as_wsms(layout);
        const int N_t = w.K * w.M;
        const SumFormulas f = sw_sums_theta0(psi0, delta_psi, w.K, w.M, b.delta_D, b.delta_d);

        const double beta_sq = received_gain(alpha, rx.count, N_t);
        const double pre = sigma_n_sq * w.lambda * w.lambda / (8.0 * beta_sq * pi * pi);
        // Denominators divided by 4 pi^2 / lambda^2
        const double den_theta = r * r * f.s_theta2 / N_t + detail::rx_term_theta0(R, r, rx);
        const double den_r = f.s_r2 / N_t - f.s_r * f.s_r / (static_cast<double>(N_t) * N_t);
        if (!(den_theta > 0.0) || !(den_r > 0.0))
            detail::fail(ErrorCode::singular_fisher, "(theta, r) pair is not identifiable");
        const double k2 = 4.0 * pi * pi / (w.lambda * w.lambda);
        return {pre / den_theta, pre / den_r, {k2 * den_theta, 0.0, k2 * den_r}, beta_sq, sigma_n_sq};
    }

    namespace detail
    {
        // atan(t)/t - (asinh(t)/t)^2 in powers of t, where the direct form cancels to t^4/45
        inline double hspw_range_series(double t)
        {
            static constexpr double c[] = {1.0 / 45,         -1.0 / 35,        47.0 / 1575,        -61.0 / 2079,
                                           593.0 / 21021,    -173.0 / 6435,    25147.0 / 984555,   -28007.0 / 1154725,
                                           245935.0 / 10669659};
            const double t2 = t * t;
            double acc = 0.0;
            for (int i = 8; i >= 0; --i)
                acc = acc * t2 + c[i];
            return acc * t2 * t2;
        }
    }

    // HSPW bounds at theta = 0 as functions of psi0 alone
    inline CrbResult hspw_crb_theta0(double psi0, int K, int M, double d, double lambda, double R, double r,
                                     const Receiver &rx, cdouble alpha, double sigma_n_sq)
    {
        validate(SceneGeometry{R, r, 0.0, 0.0});
        if (!(psi0 > 0.0 && psi0 < pi))
            detail::fail(ErrorCode::domain_error, "psi0 must lie in (0, pi)");
        const double beta_sq = received_gain(alpha, rx.count, K * M);
        const double pre = sigma_n_sq * lambda * lambda / (8.0 * beta_sq * pi * pi);
        const double t = std::tan(0.5 * psi0), s = std::sin(0.5 * psi0);
        const double ratio = psi0 / (2.0 * t);
        const double lg = std::log1p(s) - std::log1p(-s);

        const double den_theta = r * r - r * r * ratio + d * d * (static_cast<double>(M) * M - 1.0) / 12.0 +
                                 detail::rx_term_theta0(R, r, rx);
        const double den_r = t < 0.15 ? detail::hspw_range_series(t) : ratio - lg * lg / (4.0 * t * t);
        if (!(den_theta > 0.0) || !(den_r > 0.0))
            detail::fail(ErrorCode::singular_fisher, "(theta, r) pair is not identifiable");
        const double k2 = 4.0 * pi * pi / (lambda * lambda);
        return {pre / den_theta, pre / den_r, {k2 * den_theta, 0.0, k2 * den_r}, beta_sq, sigma_n_sq};
    }

    // Angle bounds of the HSPW at theta = 0 in the limits psi0 -> pi and psi0 -> 0.
    // Both range bounds diverge. Named by numeric order.
    struct AsymptoticBounds
    {
        CrbResult lower; // psi0 -> pi
        CrbResult upper; // psi0 -> 0
    };

    inline AsymptoticBounds hspw_crb_asymptotes(int K, int M, double d, double lambda, double R, double r,
                                                const Receiver &rx, cdouble alpha, double sigma_n_sq)
    {
        validate(SceneGeometry{R, r, 0.0, 0.0});
        const double beta_sq = received_gain(alpha, rx.count, K * M);
        const double pre = sigma_n_sq * lambda * lambda / (8.0 * beta_sq * pi * pi);
        const double base = d * d * (static_cast<double>(M) * M - 1.0) / 12.0 + detail::rx_term_theta0(R, r, rx);
        const double inf = std::numeric_limits<double>::infinity();
        const double k2 = 4.0 * pi * pi / (lambda * lambda);
        AsymptoticBounds b;
        b.lower = {pre / (r * r + base), inf, {k2 * (r * r + base), 0.0, 0.0}, beta_sq, sigma_n_sq};
        b.upper = {pre / base, inf, {k2 * base, 0.0, 0.0}, beta_sq, sigma_n_sq};
        return b;
    }

    enum class Verdict
    {
        wsms_better,
        equal,
        ua_better,
        unverdicted // theta != 0, no ordering is claimed
    };

    struct LayoutComparison
    {
        CrbResult wsms;
        CrbResult ua;
        Verdict verdict = Verdict::unverdicted;
    };

    // WSMS against the uniform array of equal aperture and antenna count, SW model
    inline LayoutComparison compare_wsms_ua(int K, int M, double d, double D0, double lambda, const SceneGeometry &g,
                                            const Receiver &rx, cdouble alpha, double sigma_n_sq)
    {
        const ArrayLayout wsms = make_layout(LayoutKind::wsms, K, M, d, D0, lambda);
        const ArrayLayout ua = make_layout(LayoutKind::ua, K, M, d, D0, lambda);
        LayoutComparison out;
        out.wsms = direct_crb(WavefrontModel::sw, wsms, g, rx, alpha, sigma_n_sq);
        out.ua = direct_crb(WavefrontModel::sw, ua, g, rx, alpha, sigma_n_sq);
        if (g.theta == 0.0)
        {
            // Identical positions may still differ in the last bits of their coordinates
            const double a = out.wsms.crb_theta, b = out.ua.crb_theta;
            if (std::abs(a - b) <= 1e-12 * std::max(a, b))
                out.verdict = Verdict::equal;
            else if (a < b)
                out.verdict = Verdict::wsms_better;
            else
                out.verdict = Verdict::ua_better;
        }
        return out;
    }
}

#endif
