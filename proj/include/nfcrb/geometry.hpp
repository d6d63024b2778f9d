// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


#ifndef NFCRB_GEOMETRY_HPP
#define NFCRB_GEOMETRY_HPP

#include "errors.hpp"
#include "layout.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

namespace nfcrb
{
    // Bi-static scene. TX at the origin, RX at distance R, target at range r and
    // AoD theta from the TX broadside; vartheta is the relative angle of the RX.
    struct SceneGeometry
    {
        double R = 0.0;
        double r = 0.0;
        double theta = 0.0;
        double vartheta = 0.0;
    };

    inline void validate(const SceneGeometry &g)
    {
        detail::require(std::isfinite(g.R) && g.R > 0.0, ErrorCode::precondition, "R must be positive");
        detail::require(std::isfinite(g.r) && g.r > 0.0, ErrorCode::precondition, "r must be positive");
        detail::require(std::isfinite(g.theta) && std::abs(g.theta) < pi / 2, ErrorCode::precondition,
                        "|theta| must be below pi/2");
        detail::require(std::isfinite(g.vartheta), ErrorCode::precondition, "vartheta must be finite");
    }

    namespace detail
    {
        inline void require_zero_vartheta(const SceneGeometry &g)
        {
            require(g.vartheta == 0.0, ErrorCode::precondition, "derivative terms are defined for vartheta = 0 only");
        }
    }

    // Target-to-RX distance; hypot form keeps r = R, theta = 0 exactly zero
    inline double rx_range(const SceneGeometry &g)
    {
        validate(g);
        const double a = g.theta + g.vartheta;
        return std::hypot(g.R - g.r * std::cos(a), g.r * std::sin(a));
    }

    // AoA at the RX via the sine rule
    inline double aoa_from_geometry(const SceneGeometry &g)
    {
        const double rbar = rx_range(g);
        if (rbar == 0.0)
            detail::fail(ErrorCode::degenerate_geometry, "target coincides with the RX");
        const double s = std::clamp(g.r * std::sin(g.theta + g.vartheta) / rbar, -1.0, 1.0);
        return std::asin(s) + g.vartheta;
    }

    // d(sin phi)/d theta
    inline double dsinphi_dtheta(const SceneGeometry &g)
    {
        detail::require_zero_vartheta(g);
        const double rbar = rx_range(g);
        if (rbar == 0.0)
            detail::fail(ErrorCode::degenerate_geometry, "target coincides with the RX");
        const double s = std::sin(g.theta), c = std::cos(g.theta);
        const double den = rbar * rbar;
        return (g.r * c * den - g.R * g.r * g.r * s * s) / (den * rbar);
    }

    // d(sin phi)/d r
    inline double dsinphi_dr(const SceneGeometry &g)
    {
        detail::require_zero_vartheta(g);
        const double rbar = rx_range(g);
        if (rbar == 0.0)
            detail::fail(ErrorCode::degenerate_geometry, "target coincides with the RX");
        const double s = std::sin(g.theta), c = std::cos(g.theta);
        return g.R * s * (g.R - g.r * c) / (rbar * rbar * rbar);
    }

    // Span angle of aperture coordinate x = n/r: tan(psi) = x cos(theta) / (1 - x sin(theta)).
    // The branch keeps psi in (theta - pi/2, theta + pi/2).
    inline double psi_from_x(double x, double theta)
    {
        const double den = 1.0 - x * std::sin(theta);
        if (den == 0.0)
            detail::fail(ErrorCode::span_singularity, "1 - x sin(theta) vanishes");
        return std::atan2(x * std::cos(theta), den);
    }

    // Normalized integration bounds of the midpoint Riemann approximation
    struct RiemannBounds
    {
        double x1 = 0.0, x2 = 0.0, x3 = 0.0, x4 = 0.0;
        double delta_d = 0.0; // d / r
        double delta_D = 0.0; // D / r
    };

    inline RiemannBounds riemann_bounds(const ArrayLayout &layout, double r)
    {
        detail::require(std::isfinite(r) && r > 0.0, ErrorCode::precondition, "r must be positive");
        const ArrayLayout w = as_wsms(layout);
        // A single subarray has no gap; its cell is the M-element aperture itself
        const double D = w.K == 1 ? w.M * w.d : w.D();
        RiemannBounds b;
        b.delta_d = w.d / r;
        b.delta_D = D / r;
        b.x4 = 0.5 * (w.K * b.delta_D + w.M * b.delta_d);
        b.x3 = 0.5 * (w.K * b.delta_D - w.M * b.delta_d);
        b.x2 = -b.x3;
        b.x1 = -b.x4;
        return b;
    }

    struct AngularSpans
    {
        double theta = 0.0;
        std::array<double, 4> psi{}; // psi(x1) .. psi(x4)
        // Symmetric decomposition, defined at theta = 0 only
        std::optional<double> psi0;
        std::optional<double> delta_psi;

        double psi_at(double x) const { return psi_from_x(x, theta); }
    };

    inline AngularSpans angular_spans(const ArrayLayout &layout, const SceneGeometry &g)
    {
        validate(g);
        detail::require_zero_vartheta(g);
        const RiemannBounds b = riemann_bounds(layout, g.r);
        AngularSpans s;
        s.theta = g.theta;
        s.psi = {psi_from_x(b.x1, g.theta), psi_from_x(b.x2, g.theta), psi_from_x(b.x3, g.theta),
                 psi_from_x(b.x4, g.theta)};
        if (g.theta == 0.0)
        {
            s.psi0 = s.psi[3] + s.psi[2];
            s.delta_psi = s.psi[3] - s.psi[2];
        }
        return s;
    }

    // Full span of the subarray centers seen from the target, tan(psi0/2) = K D / (2r)
    inline double hspw_span(const ArrayLayout &layout, double r)
    {
        detail::require(std::isfinite(r) && r > 0.0, ErrorCode::precondition, "r must be positive");
        const ArrayLayout w = as_wsms(layout);
        return 2.0 * std::atan(0.5 * w.K * w.D() / r);
    }
}

#endif
