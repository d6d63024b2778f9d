// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


#ifndef NFCRB_LAYOUT_HPP
#define NFCRB_LAYOUT_HPP

#include "errors.hpp"

#include <cmath>
#include <vector>

namespace nfcrb
{
    inline constexpr double speed_of_light = 299792458.0;
    inline constexpr double pi = 3.14159265358979323846;

    inline double wavelength(double frequency_hz)
    {
        detail::require(frequency_hz > 0.0 && std::isfinite(frequency_hz), ErrorCode::precondition,
                        "frequency must be positive");
        return speed_of_light / frequency_hz;
    }

    // D0 = 2^I * lambda / 2
    inline double inter_subarray_gap(int I, double lambda)
    {
        detail::require(I >= 0, ErrorCode::precondition, "gap exponent I must be non-negative");
        return std::ldexp(lambda / 2.0, I);
    }

    enum class LayoutKind
    {
        wsms, // K subarrays of M elements, inter-subarray pitch D = (M-1)d + D0
        ua,   // K*M elements, uniform, same aperture as the WSMS
        dua   // K*M elements, uniform at spacing d
    };

    struct ArrayLayout
    {
        LayoutKind kind = LayoutKind::wsms;
        int K = 1;
        int M = 1;
        double d = 0.0;      // intra-subarray spacing [m]
        double D0 = 0.0;     // inter-subarray gap parameter [m]
        double lambda = 0.0; // wavelength [m]

        double D() const { return (M - 1) * d + D0; }
        int element_count() const { return K * M; }

        // Spacing of the uniform array with the WSMS aperture and antenna count
        double ua_spacing() const
        {
            const int N = K * M;
            if (N == 1)
                return d;
            return (D() * (K - 1) + d * (M - 1)) / (N - 1);
        }

        // End-to-end aperture, max(n) - min(n)
        double aperture() const
        {
            switch (kind)
            {
            case LayoutKind::wsms:
                return (K - 1) * D() + (M - 1) * d;
            case LayoutKind::ua:
                return (K * M - 1) * ua_spacing();
            case LayoutKind::dua:
                return (K * M - 1) * d;
            }
            return 0.0;
        }
    };

    inline void validate(const ArrayLayout &layout)
    {
        detail::require(layout.K >= 1 && layout.M >= 1, ErrorCode::invalid_layout, "K and M must be at least 1");
        detail::require(layout.d > 0.0 && std::isfinite(layout.d), ErrorCode::invalid_layout, "spacing d must be positive");
        detail::require(layout.D0 > 0.0 && std::isfinite(layout.D0), ErrorCode::invalid_layout, "gap D0 must be positive");
        detail::require(layout.lambda > 0.0 && std::isfinite(layout.lambda), ErrorCode::invalid_layout,
                        "wavelength must be positive");
    }

    inline ArrayLayout make_layout(LayoutKind kind, int K, int M, double d, double D0, double lambda)
    {
        ArrayLayout layout{kind, K, M, d, D0, lambda};
        validate(layout);
        return layout;
    }

    // Defaults of the simulation setup: d = lambda/2 and D0 = 2^I * lambda/2
    inline ArrayLayout make_layout(LayoutKind kind, int K, int M, int I, double frequency_hz)
    {
        const double lambda = wavelength(frequency_hz);
        return make_layout(kind, K, M, lambda / 2.0, inter_subarray_gap(I, lambda), lambda);
    }

    // WSMS parameters that generate exactly the same element positions.
    // A uniform array is a WSMS whose gap equals its spacing.
    inline ArrayLayout as_wsms(const ArrayLayout &layout)
    {
        validate(layout);
        switch (layout.kind)
        {
        case LayoutKind::wsms:
            return layout;
        case LayoutKind::ua:
        {
            const double s = layout.ua_spacing();
            return {LayoutKind::wsms, layout.K, layout.M, s, s, layout.lambda};
        }
        case LayoutKind::dua:
            return {LayoutKind::wsms, layout.K, layout.M, layout.d, layout.d, layout.lambda};
        }
        return layout;
    }

    // Signed axial coordinates, k-major / m-minor (index kM + m)
    inline std::vector<double> element_positions(const ArrayLayout &layout)
    {
        validate(layout);
        const int K = layout.K, M = layout.M, N = K * M;
        std::vector<double> n(static_cast<std::size_t>(N));
        if (layout.kind == LayoutKind::wsms)
        {
            const double D = layout.D();
            for (int k = 0; k < K; ++k)
                for (int m = 0; m < M; ++m)
                    n[static_cast<std::size_t>(k * M + m)] = 0.5 * (2 * k - K + 1) * D + 0.5 * (2 * m - M + 1) * layout.d;
        }
        else
        {
            const double s = layout.kind == LayoutKind::ua ? layout.ua_spacing() : layout.d;
            for (int i = 0; i < N; ++i)
                n[static_cast<std::size_t>(i)] = 0.5 * (2 * i - N + 1) * s;
        }
        return n;
    }

    // Subarray centers n_k = ((2k-K+1)/2) D of the equivalent WSMS
    inline std::vector<double> subarray_centers(const ArrayLayout &layout)
    {
        const ArrayLayout w = as_wsms(layout);
        std::vector<double> c(static_cast<std::size_t>(w.K));
        for (int k = 0; k < w.K; ++k)
            c[static_cast<std::size_t>(k)] = 0.5 * (2 * k - w.K + 1) * w.D();
        return c;
    }
}

#endif
