// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


#ifndef NFCRB_CLOSED_FORM_HPP
#define NFCRB_CLOSED_FORM_HPP

#include "array_layouts.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "layout.hpp"

#include <cmath>
#include <vector>

namespace nfcrb
{
    enum class SumMethod
    {
        direct,
        riemann
    };

    // The five normalized sums, with x = n/r over the TX coordinates n:
    //   s_theta2 = sum x^2/nu1,  s_theta = sum x/sqrt(nu1),  s_r2 = sum (1 - x sin)^2/nu1,
    //   s_r = sum (x sin - 1)/sqrt(nu1),  s_thetar = sum x (x sin - 1)/nu1,
    // nu1 = 1 - 2x sin(theta) + x^2. HSPW sums run over subarray centers only.
    struct SumFormulas
    {
        double s_theta2 = 0.0;
        double s_theta = 0.0;
        double s_r2 = 0.0;
        double s_r = 0.0;
        double s_thetar = 0.0;
        SumMethod method = SumMethod::direct;
        WavefrontModel model = WavefrontModel::sw;
    };

    namespace detail
    {
        inline void require_strip(double theta)
        {
            if (!(std::isfinite(theta) && std::abs(theta) < pi / 2))
                fail(ErrorCode::domain_error, "cos(theta) must be positive");
        }

        // Paired summation over +-x keeps odd sums exactly zero at theta = 0
        inline SumFormulas direct_sums(const std::vector<double> &n, double r, double theta)
        {
            require(std::isfinite(r) && r > 0.0, ErrorCode::precondition, "r must be positive");
            require(std::isfinite(theta) && std::abs(theta) < pi / 2, ErrorCode::precondition,
                    "|theta| must be below pi/2");
            const double s = std::sin(theta), c = std::cos(theta);
            SumFormulas out;
            auto term = [&](double ni, double w[5]) {
                const double x = ni / r;
                const double nu1 = (1.0 - x * s) * (1.0 - x * s) + (x * c) * (x * c);
                if (nu1 == 0.0)
                    fail(ErrorCode::element_coincidence, "target sits on an element");
                const double sq = std::sqrt(nu1);
                w[0] = x * x / nu1;
                w[1] = x / sq;
                w[2] = (1.0 - x * s) * (1.0 - x * s) / nu1;
                w[3] = (x * s - 1.0) / sq;
                w[4] = x * (x * s - 1.0) / nu1;
            };
            double acc[5] = {0, 0, 0, 0, 0};
            double a[5], b[5];
            const std::size_t N = n.size();
            for (std::size_t i = 0; i < N / 2; ++i)
            {
                term(n[i], a);
                term(n[N - 1 - i], b);
                for (int j = 0; j < 5; ++j)
                    acc[j] += a[j] + b[j];
            }
            if (N % 2 == 1)
            {
                term(n[N / 2], a);
                for (int j = 0; j < 5; ++j)
                    acc[j] += a[j];
            }
            out.s_theta2 = acc[0];
            out.s_theta = acc[1];
            out.s_r2 = acc[2];
            out.s_r = acc[3];
            out.s_thetar = acc[4];
            return out;
        }
    }

    inline SumFormulas sw_sums_direct(const ArrayLayout &layout, double r, double theta)
    {
        SumFormulas f = detail::direct_sums(element_positions(layout), r, theta);
        f.model = WavefrontModel::sw;
        return f;
    }

    inline SumFormulas hspw_sums_direct(const ArrayLayout &layout, double r, double theta)
    {
        SumFormulas f = detail::direct_sums(subarray_centers(layout), r, theta);
        f.model = WavefrontModel::hspw;
        return f;
    }

    // ------------------------------------------------------------------------
    // Antiderivatives in the aperture coordinate x, with nu2 = x/cos(theta) - tan(theta).
    // Constants of integration are zero.

    namespace detail
    {
        // ln cos from whichever of sin, cos carries the precision
        template <typename T>
        T ln_cos(T s, T c)
        {
            return std::abs(s) < T(0.5) ? T(0.5) * std::log1p(-s * s) : std::log(c);
        }

        // Shared sub-expressions. Built either from x or from the span angle psi,
        // in which case alpha = psi - theta gives x = sin(psi)/cos(alpha),
        // sqrt(nu1) = cos(theta)/cos(alpha) and nu2 = tan(alpha).
        // The Riemann forms difference these at nearby points, so they run in long double.
        template <typename T>
        struct BasicKernel
        {
            T x, s, c, cos2;
            T u;        // x - sin(theta)
            T sq;       // sqrt(nu1)
            T ln_nu1;   // ln nu1
            T nu2;      // (x - sin)/cos
            T atan_nu2; // atan(nu2)
            T ln_nu2;   // ln(nu2^2 + 1)
            T ln_root;  // ln(sqrt(nu1) + x - sin)
            T artanh;   // artanh((x - sin)/sqrt(nu1))

            static BasicKernel from_x(T x, double theta)
            {
                require_strip(theta);
                BasicKernel k;
                k.x = x;
                k.s = std::sin(T(theta));
                k.c = std::cos(T(theta));
                k.cos2 = std::cos(T(2) * T(theta));
                k.u = x - k.s;
                const T nu1 = k.u * k.u + k.c * k.c;
                k.sq = std::sqrt(nu1);
                // nu1 - 1 = x (x - 2 sin) keeps ln nu1 accurate for small apertures
                k.ln_nu1 = nu1 < T(0.5) ? std::log(nu1) : std::log1p(x * (x - T(2) * k.s));
                k.nu2 = k.u / k.c;
                k.atan_nu2 = std::atan(k.nu2);
                k.ln_nu2 = std::log1p(k.nu2 * k.nu2);
                // (sqrt(nu1) + u)(sqrt(nu1) - u) = cos^2, pick the side free of cancellation
                const T ln_c = ln_cos(k.s, k.c);
                k.ln_root = k.u >= T(0) ? std::log(k.sq + k.u) : T(2) * ln_c - std::log(k.sq - k.u);
                k.artanh = k.ln_root - ln_c;
                return k;
            }

            static BasicKernel from_psi(T psi, double theta)
            {
                require_strip(theta);
                const T alpha = psi - T(theta);
                const T ca = std::cos(alpha), sa = std::sin(alpha);
                if (!(ca > T(0)))
                    fail(ErrorCode::domain_error, "|psi - theta| must be below pi/2");
                BasicKernel k;
                k.s = std::sin(T(theta));
                k.c = std::cos(T(theta));
                k.cos2 = std::cos(T(2) * T(theta));
                k.x = std::sin(psi) / ca;
                k.u = k.c * sa / ca;
                k.sq = k.c / ca;
                const T ln_c = ln_cos(k.s, k.c), ln_ca = ln_cos(sa, ca);
                k.ln_nu1 = T(2) * (ln_c - ln_ca);
                k.nu2 = sa / ca;
                k.atan_nu2 = alpha;
                k.ln_nu2 = T(-2) * ln_ca;
                k.artanh = std::log1p(sa) - ln_ca;
                k.ln_root = ln_c + k.artanh;
                return k;
            }
        };

        using Kernel = BasicKernel<double>;
        using WideKernel = BasicKernel<long double>;

        template <typename T>
        T g_theta2(const BasicKernel<T> &k)
        {
            return k.x * k.x / 2 + k.x * k.s * k.ln_nu1 - 2 * k.x * k.s - k.s * k.s * k.ln_nu1 +
                   2 * k.c * k.s * k.atan_nu2 - k.cos2 * k.nu2 * k.atan_nu2 + k.cos2 / 2 * k.ln_nu2;
        }

        template <typename T>
        T g_theta(const BasicKernel<T> &k)
        {
            return k.u / 2 * k.sq + k.c * k.c / 2 * k.ln_root + k.s * k.u * k.artanh - k.s * k.sq;
        }

        template <typename T>
        T g_r(const BasicKernel<T> &k)
        {
            return k.u * k.ln_root - k.sq;
        }

        template <typename T>
        T g_thetar(const BasicKernel<T> &k)
        {
            return k.s * (k.nu2 * k.atan_nu2 - T(0.5) * k.ln_nu2) + k.x / 2 * k.ln_nu1 - k.x - k.s / 2 * k.ln_nu1 +
                   k.c * k.atan_nu2;
        }
    }

    // Primitive antiderivatives. Each returns an antiderivative of the integrand named
    // in its comment; the *_integrand companions evaluate that integrand directly.
    namespace antiderivative
    {
        // int x^2/nu1 dx
        inline double f_theta2(double x, double theta)
        {
            const auto k = detail::Kernel::from_x(x, theta);
            return x + k.s * k.ln_nu1 - k.cos2 / k.c * k.atan_nu2;
        }

        // int ln nu1 dx
        inline double ln_nu1_int(double x, double theta)
        {
            const auto k = detail::Kernel::from_x(x, theta);
            return x * k.ln_nu1 - 2 * x - k.s * k.ln_nu1 + 2 * k.c * k.atan_nu2;
        }

        // int atan(nu2) dx
        inline double arctan_nu2_int(double x, double theta)
        {
            const auto k = detail::Kernel::from_x(x, theta);
            return k.c * (k.nu2 * k.atan_nu2 - 0.5 * k.ln_nu2);
        }

        // int x/sqrt(nu1) dx
        inline double x_over_sqrt_nu1(double x, double theta)
        {
            const auto k = detail::Kernel::from_x(x, theta);
            return k.sq + k.s * k.artanh;
        }

        // int sqrt(nu1) dx
        inline double sqrt_nu1_int(double x, double theta)
        {
            const auto k = detail::Kernel::from_x(x, theta);
            return k.u / 2 * k.sq + k.c * k.c / 2 * k.ln_root;
        }

        // int artanh((x - sin)/sqrt(nu1)) dx
        inline double artanh_int(double x, double theta)
        {
            const auto k = detail::Kernel::from_x(x, theta);
            return k.u * k.artanh - k.sq;
        }

        // int ln|sqrt(nu1) + x - sin| dx
        inline double ln_sqrt_term_int(double x, double theta)
        {
            const auto k = detail::Kernel::from_x(x, theta);
            return k.u * k.ln_root - k.sq;
        }

        inline double nu1(double x, double theta)
        {
            detail::require_strip(theta);
            const double u = x - std::sin(theta), c = std::cos(theta);
            return u * u + c * c;
        }

        inline double f_theta2_integrand(double x, double theta) { return x * x / nu1(x, theta); }
        inline double ln_nu1_integrand(double x, double theta) { return std::log(nu1(x, theta)); }
        inline double arctan_nu2_integrand(double x, double theta)
        {
            detail::require_strip(theta);
            return std::atan((x - std::sin(theta)) / std::cos(theta));
        }
        inline double x_over_sqrt_nu1_integrand(double x, double theta) { return x / std::sqrt(nu1(x, theta)); }
        inline double sqrt_nu1_integrand(double x, double theta) { return std::sqrt(nu1(x, theta)); }
        inline double artanh_integrand(double x, double theta)
        {
            const double z = (x - std::sin(theta)) / std::sqrt(nu1(x, theta));
            if (!(std::abs(z) < 1.0))
                detail::fail(ErrorCode::domain_error, "artanh argument outside (-1, 1)");
            return std::atanh(z);
        }
        inline double ln_sqrt_term_integrand(double x, double theta)
        {
            const double v = std::sqrt(nu1(x, theta)) + x - std::sin(theta);
            if (!(v > 0.0))
                detail::fail(ErrorCode::domain_error, "logarithm argument vanishes");
            return std::log(v);
        }
    }

    // Double antiderivatives consumed by the midpoint Riemann closed form.
    // g_theta2'' = x^2/nu1, g_theta'' = x/sqrt(nu1), g_r'' = 1/sqrt(nu1), g_thetar'' = x/nu1.
    inline double g_theta2(double x, double theta) { return detail::g_theta2(detail::Kernel::from_x(x, theta)); }
    inline double g_theta(double x, double theta) { return detail::g_theta(detail::Kernel::from_x(x, theta)); }
    inline double g_r(double x, double theta) { return detail::g_r(detail::Kernel::from_x(x, theta)); }
    inline double g_thetar(double x, double theta) { return detail::g_thetar(detail::Kernel::from_x(x, theta)); }

    // Same functions evaluated through the span angle psi(x)
    inline double g_theta2_psi(double psi, double theta) { return detail::g_theta2(detail::Kernel::from_psi(psi, theta)); }
    inline double g_theta_psi(double psi, double theta) { return detail::g_theta(detail::Kernel::from_psi(psi, theta)); }
    inline double g_r_psi(double psi, double theta) { return detail::g_r(detail::Kernel::from_psi(psi, theta)); }
    inline double g_thetar_psi(double psi, double theta) { return detail::g_thetar(detail::Kernel::from_psi(psi, theta)); }

    // d/dpsi of g_theta2_psi at theta = 0, equal to sec^2(psi) (tan(psi) - psi)
    inline double dg_theta2_dpsi_theta0(double psi)
    {
        const double c = std::cos(psi);
        return (std::tan(psi) - psi) / (c * c);
    }

    // ------------------------------------------------------------------------
    // Midpoint Riemann closed forms

    inline constexpr double riemann_theta_limit = 1.45;

    namespace detail
    {
        // G(x4) - G(x3) - G(x2) + G(x1), grouped so odd G cancel exactly at theta = 0
        inline long double four_point(const WideKernel k[4], long double (*G)(const WideKernel &))
        {
            return (G(k[3]) + G(k[0])) - (G(k[2]) + G(k[1]));
        }

        inline SumFormulas riemann_from_kernels(const WideKernel k[4], int N, double theta, long double delta_D,
                                                long double delta_d)
        {
            using L = long double;
            const L s = std::sin(L(theta)), c = std::cos(L(theta));
            const L scale = 1.0L / (delta_D * delta_d);
            const L t2 = four_point(k, g_theta2<L>) * scale;
            const L t1 = four_point(k, g_theta<L>) * scale;
            SumFormulas f;
            f.s_theta2 = static_cast<double>(t2);
            f.s_theta = static_cast<double>(t1);
            f.s_r = static_cast<double>(s * t1 - four_point(k, g_r<L>) * scale);
            f.s_thetar = static_cast<double>(s * t2 - four_point(k, g_thetar<L>) * scale);
            f.s_r2 = static_cast<double>(N - c * c * t2);
            f.method = SumMethod::riemann;
            f.model = WavefrontModel::sw;
            return f;
        }

        // Bounds in long double so x4 - x3 and x3 - x2 match the cell widths of the scale
        struct WideBounds
        {
            long double x[4];
            long double delta_D, delta_d;
        };

        inline WideBounds wide_bounds(const ArrayLayout &layout, double r)
        {
            riemann_bounds(layout, r); // argument checks
            const ArrayLayout w = as_wsms(layout);
            WideBounds wb;
            wb.delta_d = static_cast<long double>(w.d) / r;
            wb.delta_D = static_cast<long double>(w.K == 1 ? w.M * w.d : w.D()) / r;
            const long double hi = 0.5L * (w.K * wb.delta_D + w.M * wb.delta_d);
            const long double lo = 0.5L * (w.K * wb.delta_D - w.M * wb.delta_d);
            wb.x[0] = -hi;
            wb.x[1] = -lo;
            wb.x[2] = lo;
            wb.x[3] = hi;
            return wb;
        }

        inline void require_riemann_theta(double theta)
        {
            if (!(std::abs(theta) <= riemann_theta_limit))
                fail(ErrorCode::singularity_near_pi2, "|theta| above the closed-form limit of 1.45 rad");
        }
    }

    inline SumFormulas sw_sums_riemann(const ArrayLayout &layout, double r, double theta)
    {
        detail::require_riemann_theta(theta);
        const detail::WideBounds b = detail::wide_bounds(layout, r);
        detail::WideKernel k[4];
        for (int i = 0; i < 4; ++i)
            k[i] = detail::WideKernel::from_x(b.x[i], theta);
        return detail::riemann_from_kernels(k, layout.element_count(), theta, b.delta_D, b.delta_d);
    }

    // Riemann sums written in the span angles psi(x1..x4) instead of x1..x4
    inline SumFormulas sw_sums_riemann_psi(const ArrayLayout &layout, const AngularSpans &spans, double r)
    {
        detail::require_riemann_theta(spans.theta);
        const detail::WideBounds b = detail::wide_bounds(layout, r);
        detail::WideKernel k[4];
        for (int i = 0; i < 4; ++i)
            k[i] = detail::WideKernel::from_psi(spans.psi[static_cast<std::size_t>(i)], spans.theta);
        return detail::riemann_from_kernels(k, layout.element_count(), spans.theta, b.delta_D, b.delta_d);
    }

    // Integral of the subarray-center sums over [-K D/(2r), K D/(2r)]
    inline SumFormulas hspw_sums_closed(const ArrayLayout &layout, double r, double theta)
    {
        detail::require(std::isfinite(r) && r > 0.0, ErrorCode::precondition, "r must be positive");
        detail::require_strip(theta);
        const ArrayLayout w = as_wsms(layout);
        const int K = w.K;
        SumFormulas f;
        f.method = SumMethod::riemann;
        f.model = WavefrontModel::hspw;
        if (K == 1)
        {
            // Single center at n = 0, the sums are exact and carry no range curvature
            f.s_r2 = 1.0;
            f.s_r = -1.0;
            return f;
        }
        const double s = std::sin(theta), c = std::cos(theta);
        const double dD = w.D() / r;
        const double t = 0.5 * K * dD;
        const auto hi = detail::Kernel::from_x(t, theta);
        const auto lo = detail::Kernel::from_x(-t, theta);

        const double ln_kappa = hi.ln_nu1 - lo.ln_nu1; // ln(kappa1/kappa2)
        const double atan_span = hi.atan_nu2 - lo.atan_nu2;
        const double root_span = hi.ln_root - lo.ln_root;
        // sqrt(kappa1) - sqrt(kappa2) without cancellation
        const double sq_span = -4.0 * t * s / (hi.sq + lo.sq);

        f.s_theta2 = K + s / dD * ln_kappa - std::cos(2.0 * theta) / (dD * c) * atan_span;
        f.s_theta = s / dD * (hi.artanh - lo.artanh) + sq_span / dD;
        f.s_r2 = K - c * c * f.s_theta2;
        f.s_r = s * f.s_theta - root_span / dD;
        f.s_thetar = s * f.s_theta2 - std::tan(theta) / dD * atan_span - 0.5 / dD * ln_kappa;
        return f;
    }

    // theta = 0 forms in the span angles. psi0 = psi(x4) + psi(x3), delta_psi = psi(x4) - psi(x3).
    inline SumFormulas sw_sums_theta0(double psi0, double delta_psi, int K, int M, double delta_D, double delta_d)
    {
        if (!(psi0 > 0.0 && psi0 < pi && delta_psi >= 0.0 && delta_psi <= psi0))
            detail::fail(ErrorCode::domain_error, "need 0 <= delta_psi <= psi0 < pi");
        using L = long double;
        const auto hi = detail::WideKernel::from_psi(0.5L * (L(psi0) + delta_psi), 0.0);
        const auto lo = detail::WideKernel::from_psi(0.5L * (L(psi0) - delta_psi), 0.0);
        const L scale = 2.0L / (L(delta_D) * delta_d);
        const L t2 = scale * (detail::g_theta2(hi) - detail::g_theta2(lo));
        SumFormulas f;
        f.s_theta2 = static_cast<double>(t2);
        f.s_r = static_cast<double>(-scale * (detail::g_r(hi) - detail::g_r(lo)));
        f.s_r2 = static_cast<double>(K * M - t2);
        f.method = SumMethod::riemann;
        f.model = WavefrontModel::sw;
        return f;
    }

    // HSPW at theta = 0 depends on psi0 = 2 atan(K D/(2r)) alone
    inline SumFormulas hspw_sums_theta0(double psi0, int K)
    {
        if (!(psi0 > 0.0 && psi0 < pi))
            detail::fail(ErrorCode::domain_error, "psi0 must lie in (0, pi)");
        const double tan_half = std::tan(0.5 * psi0), sin_half = std::sin(0.5 * psi0);
        SumFormulas f;
        f.s_r2 = K * psi0 / (2.0 * tan_half);
        f.s_theta2 = K - f.s_r2;
        f.s_r = -K / (2.0 * tan_half) * (std::log1p(sin_half) - std::log1p(-sin_half));
        f.method = SumMethod::riemann;
        f.model = WavefrontModel::hspw;
        return f;
    }
}

#endif
