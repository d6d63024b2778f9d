// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


#ifndef NFCRB_ARRAY_LAYOUTS_HPP
#define NFCRB_ARRAY_LAYOUTS_HPP

#include "errors.hpp"
#include "geometry.hpp"
#include "layout.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace nfcrb
{
    using cdouble = std::complex<double>;

    enum class WavefrontModel
    {
        sw,   // spherical wavefront over every element
        hspw, // planar within a subarray, spherical across subarrays
        pw    // planar over the full aperture
    };

    // Uniform receive array
    struct Receiver
    {
        int count = 1;
        double spacing = 0.0; // [m]
    };

    // Steering vector with its partial derivatives in theta and r
    struct SteeringBundle
    {
        Eigen::VectorXcd value;
        Eigen::VectorXcd d_theta;
        Eigen::VectorXcd d_r;
        WavefrontModel model = WavefrontModel::sw;
    };

    namespace detail
    {
        inline Eigen::VectorXcd kron(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b)
        {
            Eigen::VectorXcd out(a.size() * b.size());
            for (Eigen::Index i = 0; i < a.size(); ++i)
                out.segment(i * b.size(), b.size()) = a[i] * b;
            return out;
        }

        // Spherical-wavefront vector over arbitrary coordinates, phase -k sqrt(r^2 - 2nr sin(theta) + n^2)
        inline SteeringBundle spherical(const std::vector<double> &n, double lambda, double r, double theta)
        {
            require(std::isfinite(r) && r > 0.0, ErrorCode::precondition, "r must be positive");
            require(std::isfinite(theta) && std::abs(theta) < pi / 2, ErrorCode::precondition,
                    "|theta| must be below pi/2");
            const double k = 2.0 * pi / lambda;
            const double s = std::sin(theta), c = std::cos(theta);
            const double scale = 1.0 / std::sqrt(static_cast<double>(n.size()));
            const cdouble jk(0.0, k);
            const auto N = static_cast<Eigen::Index>(n.size());

            SteeringBundle b;
            b.value.resize(N);
            b.d_theta.resize(N);
            b.d_r.resize(N);
            for (Eigen::Index i = 0; i < N; ++i)
            {
                const double ni = n[static_cast<std::size_t>(i)];
                const double dist = std::hypot(r - ni * s, ni * c);
                if (dist == 0.0)
                    fail(ErrorCode::element_coincidence, "target sits on an element");
                const cdouble v = scale * std::polar(1.0, -k * dist);
                b.value[i] = v;
                b.d_theta[i] = jk * (ni * r * c / dist) * v;
                b.d_r[i] = jk * ((ni * s - r) / dist) * v;
            }
            return b;
        }
    }

    inline SteeringBundle sw_tx_bundle(const ArrayLayout &layout, double r, double theta)
    {
        SteeringBundle b = detail::spherical(element_positions(layout), layout.lambda, r, theta);
        b.model = WavefrontModel::sw;
        return b;
    }

    // g_t = w (over subarray centers) kron a_t (planar within each subarray)
    inline SteeringBundle hspw_tx_bundle(const ArrayLayout &layout, double r, double theta)
    {
        const ArrayLayout l = as_wsms(layout);
        const SteeringBundle w = detail::spherical(subarray_centers(l), l.lambda, r, theta);

        const double s = std::sin(theta), c = std::cos(theta);
        const double scale = 1.0 / std::sqrt(static_cast<double>(l.M));
        Eigen::VectorXcd a(l.M), da(l.M);
        for (int m = 0; m < l.M; ++m)
        {
            const double coef = pi / l.lambda * (2 * m - l.M + 1) * l.d;
            a[m] = scale * std::polar(1.0, coef * s);
            da[m] = cdouble(0.0, coef * c) * a[m];
        }

        SteeringBundle b;
        b.value = detail::kron(w.value, a);
        b.d_theta = detail::kron(w.value, da) + detail::kron(w.d_theta, a);
        b.d_r = detail::kron(w.d_r, a);
        b.model = WavefrontModel::hspw;
        return b;
    }

    inline SteeringBundle pw_tx_bundle(const ArrayLayout &layout, double theta)
    {
        detail::require(std::isfinite(theta) && std::abs(theta) < pi / 2, ErrorCode::precondition,
                        "|theta| must be below pi/2");
        const std::vector<double> n = element_positions(layout);
        const auto N = static_cast<Eigen::Index>(n.size());
        const double k = 2.0 * pi / layout.lambda;
        const double s = std::sin(theta), c = std::cos(theta);
        const double scale = 1.0 / std::sqrt(static_cast<double>(N));

        SteeringBundle b;
        b.value.resize(N);
        b.d_theta.resize(N);
        b.d_r = Eigen::VectorXcd::Zero(N);
        for (Eigen::Index i = 0; i < N; ++i)
        {
            const double ni = n[static_cast<std::size_t>(i)];
            b.value[i] = scale * std::polar(1.0, k * ni * s);
            b.d_theta[i] = cdouble(0.0, k * ni * c) * b.value[i];
        }
        b.model = WavefrontModel::pw;
        return b;
    }

    inline SteeringBundle tx_bundle(WavefrontModel model, const ArrayLayout &layout, double r, double theta)
    {
        switch (model)
        {
        case WavefrontModel::sw:
            return sw_tx_bundle(layout, r, theta);
        case WavefrontModel::hspw:
            return hspw_tx_bundle(layout, r, theta);
        case WavefrontModel::pw:
            return pw_tx_bundle(layout, theta);
        }
        detail::fail(ErrorCode::precondition, "unknown wavefront model");
    }

    // Uniform RX array, entry n_r has phase (pi/lambda)(2n_r - N_r + 1) d sin(phi)
    inline SteeringBundle rx_bundle(const Receiver &rx, double lambda, const SceneGeometry &g)
    {
        detail::require(rx.count >= 1, ErrorCode::precondition, "N_r must be at least 1");
        validate(g);
        detail::require_zero_vartheta(g);
        const Eigen::Index N = rx.count;

        SteeringBundle b;
        b.model = WavefrontModel::sw;
        if (N == 1)
        {
            // Zero phase coefficient; the RX geometry never enters
            b.value = Eigen::VectorXcd::Ones(1);
            b.d_theta = Eigen::VectorXcd::Zero(1);
            b.d_r = Eigen::VectorXcd::Zero(1);
            return b;
        }
        detail::require(rx.spacing > 0.0 && lambda > 0.0, ErrorCode::precondition,
                        "RX spacing and wavelength must be positive");

        const double sin_phi = std::sin(aoa_from_geometry(g));
        const double phi_theta = dsinphi_dtheta(g);
        const double phi_r = dsinphi_dr(g);
        const double scale = 1.0 / std::sqrt(static_cast<double>(N));

        b.value.resize(N);
        b.d_theta.resize(N);
        b.d_r.resize(N);
        for (Eigen::Index i = 0; i < N; ++i)
        {
            const double coef = pi / lambda * static_cast<double>(2 * i - N + 1) * rx.spacing;
            b.value[i] = scale * std::polar(1.0, coef * sin_phi);
            b.d_theta[i] = cdouble(0.0, coef * phi_theta) * b.value[i];
            b.d_r[i] = cdouble(0.0, coef * phi_r) * b.value[i];
        }
        return b;
    }
}

#endif
