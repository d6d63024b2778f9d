// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


#ifndef NFCRB_FISHER_CORE_HPP
#define NFCRB_FISHER_CORE_HPP

#include "array_layouts.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "layout.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace nfcrb
{
    // Inner products of the composite channel and its derivatives
    struct AmfSet
    {
        double htheta_sq = 0.0;  // |h_theta|^2
        double hr_sq = 0.0;      // |h_r|^2
        cdouble htheta_h;        // h_theta^H h
        cdouble hr_h;            // h_r^H h
        cdouble htheta_hr;       // h_theta^H h_r
        double h_sq = 0.0;       // |h|^2
    };

    // Normalized 2x2 Fisher matrix of (theta, r); the received gain is factored out
    struct NormalizedFisher
    {
        double q11 = 0.0, q12 = 0.0, q22 = 0.0;

        double det() const { return q11 * q22 - q12 * q12; }
    };

    struct CrbResult
    {
        double crb_theta = 0.0; // [rad^2]
        double crb_r = 0.0;     // [m^2]
        NormalizedFisher qbar;
        double beta_sq = 0.0;
        double sigma_n_sq = 0.0;
    };

    struct CrbOptions
    {
        double det_epsilon = 1e-18;
    };

    // |beta|^2 with beta = alpha sqrt(N_r N_t)
    inline double received_gain(cdouble alpha, int N_r, int N_t)
    {
        return std::norm(alpha) * static_cast<double>(N_r) * static_cast<double>(N_t);
    }

    // h = conj(g_t) kron g_r under ideal orthogonal training
    inline SteeringBundle composite_bundle(const SteeringBundle &tx, const SteeringBundle &rx)
    {
        const Eigen::VectorXcd t = tx.value.conjugate();
        SteeringBundle h;
        h.value = detail::kron(t, rx.value);
        h.d_theta = detail::kron(tx.d_theta.conjugate(), rx.value) + detail::kron(t, rx.d_theta);
        h.d_r = detail::kron(tx.d_r.conjugate(), rx.value) + detail::kron(t, rx.d_r);
        h.model = tx.model;
        return h;
    }

    inline AmfSet amfs(const SteeringBundle &h)
    {
        AmfSet a;
        // Eigen's dot conjugates its left operand
        a.htheta_sq = h.d_theta.squaredNorm();
        a.hr_sq = h.d_r.squaredNorm();
        a.htheta_h = h.d_theta.dot(h.value);
        a.hr_h = h.d_r.dot(h.value);
        a.htheta_hr = h.d_theta.dot(h.d_r);
        a.h_sq = h.value.squaredNorm();
        return a;
    }

    // Subtractions that cancel to within a few ulps of the raw norm are
    // reported as exact zeros (e.g. a range derivative parallel to h).
    inline NormalizedFisher normalized_fisher(const AmfSet &a)
    {
        detail::require(a.h_sq > 0.0, ErrorCode::precondition, "|h|^2 must be positive");
        constexpr double floor = 1e-13;
        NormalizedFisher q;
        q.q11 = a.htheta_sq - std::norm(a.htheta_h) / a.h_sq;
        q.q22 = a.hr_sq - std::norm(a.hr_h) / a.h_sq;
        q.q12 = a.htheta_hr.real() - (std::conj(a.htheta_h) * a.hr_h).real() / a.h_sq;
        if (q.q11 <= floor * a.htheta_sq)
            q.q11 = 0.0;
        if (q.q22 <= floor * a.hr_sq)
            q.q22 = 0.0;
        if (q.q11 == 0.0 || q.q22 == 0.0)
            q.q12 = 0.0;
        return q;
    }

    // Same matrix from the derivatives projected off h. The residual norms avoid the
    // cancellation of the AMF differences when a derivative is nearly parallel to h.
    inline NormalizedFisher normalized_fisher(const SteeringBundle &h)
    {
        const double h_sq = h.value.squaredNorm();
        detail::require(h_sq > 0.0, ErrorCode::precondition, "|h|^2 must be positive");
        const Eigen::VectorXcd pt = h.d_theta - h.value * (h.value.dot(h.d_theta) / h_sq);
        const Eigen::VectorXcd pr = h.d_r - h.value * (h.value.dot(h.d_r) / h_sq);
        // Rounding leaves about eps^2 of a parallel derivative
        constexpr double floor = 1e-24;
        NormalizedFisher q;
        q.q11 = pt.squaredNorm();
        q.q22 = pr.squaredNorm();
        q.q12 = pt.dot(pr).real();
        if (q.q11 <= floor * h.d_theta.squaredNorm())
            q.q11 = 0.0;
        if (q.q22 <= floor * h.d_r.squaredNorm())
            q.q22 = 0.0;
        if (q.q11 == 0.0 || q.q22 == 0.0)
            q.q12 = 0.0;
        return q;
    }

    inline CrbResult crb(const NormalizedFisher &q, double beta_sq, double sigma_n_sq, const CrbOptions &opt = {})
    {
        detail::require(beta_sq > 0.0 && sigma_n_sq > 0.0, ErrorCode::precondition,
                        "gain and noise power must be positive");
        const double det = q.det();
        if (!(det > opt.det_epsilon) || !(q.q11 > 0.0) || !(q.q22 > 0.0))
            detail::fail(ErrorCode::singular_fisher, "(theta, r) pair is not identifiable");
        const double f = sigma_n_sq / (2.0 * beta_sq);
        return {f * (q.q22 / det), f * (q.q11 / det), q, beta_sq, sigma_n_sq};
    }

    // Angle bound with the range treated as known. Equals the joint bound when q12 = 0.
    inline CrbResult crb_theta_only(const NormalizedFisher &q, double beta_sq, double sigma_n_sq)
    {
        detail::require(beta_sq > 0.0 && sigma_n_sq > 0.0, ErrorCode::precondition,
                        "gain and noise power must be positive");
        if (!(q.q11 > 0.0))
            detail::fail(ErrorCode::singular_fisher, "no angle information");
        return {sigma_n_sq / (2.0 * beta_sq) / q.q11, std::numeric_limits<double>::infinity(), q, beta_sq, sigma_n_sq};
    }

    // Normalized Fisher matrix of one TX model at one scene
    inline NormalizedFisher direct_fisher(WavefrontModel model, const ArrayLayout &layout, const SceneGeometry &g,
                                          const Receiver &rx)
    {
        validate(g);
        const SteeringBundle t = tx_bundle(model, layout, g.r, g.theta);
        const SteeringBundle r = rx_bundle(rx, layout.lambda, g);
        return normalized_fisher(composite_bundle(t, r));
    }

    inline CrbResult direct_crb(WavefrontModel model, const ArrayLayout &layout, const SceneGeometry &g,
                                const Receiver &rx, cdouble alpha, double sigma_n_sq, const CrbOptions &opt = {})
    {
        const NormalizedFisher q = direct_fisher(model, layout, g, rx);
        return crb(q, received_gain(alpha, rx.count, layout.element_count()), sigma_n_sq, opt);
    }

    // ------------------------------------------------------------------------
    // Full 4x4 Fisher oracle over (theta, r, alpha_R, alpha_I)

    enum class Training
    {
        ideal,    // Gram identity, F^T omitted
        identity, // explicit identity matrix
        dft       // explicit unitary DFT matrix
    };

    struct OracleOptions
    {
        double fd_step = 1e-6; // relative step of the central differences
        Training training = Training::ideal;
    };

    struct OracleResult
    {
        CrbResult crb;
        Eigen::Matrix4d fisher;
        double h_alpha_rr = 0.0; // |dh/d alpha_R|^2 / (N_r N_t)
        double h_alpha_ii = 0.0;
        double h_alpha_ri = 0.0; // Re{(dh/d alpha_R)^H dh/d alpha_I} / (N_r N_t)
        double inversion_residual = 0.0;
    };

    namespace detail
    {
        // Builds the noiseless receive vector from point coordinates: TX array on the
        // y-axis, RX at (R, 0) with its array parallel to the TX array.
        struct OracleChannel
        {
            const ArrayLayout &layout;
            WavefrontModel model;
            Receiver rx;
            double R;
            cdouble alpha;
            Training training;
            std::vector<double> n;
            Eigen::MatrixXcd F; // training matrix for explicit paths

            Eigen::VectorXcd tx(double r, double theta) const
            {
                const double k = 2.0 * pi / layout.lambda;
                const double tx_x = r * std::cos(theta), tx_y = r * std::sin(theta);
                const auto N = static_cast<Eigen::Index>(n.size());
                Eigen::VectorXcd g(N);
                for (Eigen::Index i = 0; i < N; ++i)
                {
                    const double ni = n[static_cast<std::size_t>(i)];
                    double phase = 0.0;
                    switch (model)
                    {
                    case WavefrontModel::sw:
                        phase = -k * std::hypot(tx_x, tx_y - ni);
                        break;
                    case WavefrontModel::hspw:
                    {
                        const ArrayLayout w = as_wsms(layout);
                        const int m = static_cast<int>(i) % w.M;
                        const double offset = 0.5 * (2 * m - w.M + 1) * w.d;
                        phase = -k * std::hypot(tx_x, tx_y - (ni - offset)) + k * offset * std::sin(theta);
                        break;
                    }
                    case WavefrontModel::pw:
                        phase = k * ni * std::sin(theta);
                        break;
                    }
                    g[i] = std::polar(1.0 / std::sqrt(static_cast<double>(N)), phase);
                }
                return g;
            }

            Eigen::VectorXcd rxv(double r, double theta) const
            {
                Eigen::VectorXcd g(rx.count);
                if (rx.count == 1)
                {
                    g[0] = 1.0;
                    return g;
                }
                const double vx = r * std::cos(theta) - R, vy = r * std::sin(theta);
                const double sin_phi = vy / std::hypot(vx, vy);
                for (int i = 0; i < rx.count; ++i)
                {
                    const double phase = pi / layout.lambda * (2 * i - rx.count + 1) * rx.spacing * sin_phi;
                    g[i] = std::polar(1.0 / std::sqrt(static_cast<double>(rx.count)), phase);
                }
                return g;
            }

            // Unit-gain channel, h = (F^T conj(g_t)) kron g_r
            Eigen::VectorXcd unit(double r, double theta) const
            {
                Eigen::VectorXcd t = tx(r, theta).conjugate();
                if (training != Training::ideal)
                    t = F.transpose() * t;
                return kron(t, rxv(r, theta));
            }
        };

        inline Eigen::MatrixXcd training_matrix(Training t, Eigen::Index N)
        {
            if (t == Training::dft)
            {
                Eigen::MatrixXcd F(N, N);
                for (Eigen::Index a = 0; a < N; ++a)
                    for (Eigen::Index b = 0; b < N; ++b)
                        F(a, b) = std::polar(1.0 / std::sqrt(static_cast<double>(N)),
                                             -2.0 * pi * static_cast<double>((a * b) % N) / static_cast<double>(N));
                return F;
            }
            return Eigen::MatrixXcd::Identity(N, N);
        }

        template <typename Fn>
        Eigen::VectorXcd central_difference(Fn &&f, double x, double h)
        {
            return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
        }
    }

    inline OracleResult full_fisher_oracle(WavefrontModel model, const ArrayLayout &layout, const SceneGeometry &g,
                                           const Receiver &rx, cdouble alpha, double sigma_n_sq,
                                           const OracleOptions &opt = {})
    {
        validate(layout);
        validate(g);
        detail::require_zero_vartheta(g);
        detail::require(layout.element_count() <= 1024, ErrorCode::precondition, "oracle is limited to N_t <= 1024");
        detail::require(opt.fd_step >= 1e-8 && opt.fd_step <= 1e-4, ErrorCode::precondition,
                        "fd_step must lie in [1e-8, 1e-4]");
        detail::require(sigma_n_sq > 0.0 && std::abs(alpha) > 0.0, ErrorCode::precondition,
                        "gain and noise power must be positive");
        detail::require(rx.count >= 1, ErrorCode::precondition, "N_r must be at least 1");

        const int N_t = layout.element_count();
        detail::OracleChannel ch{layout, model, rx, g.R, alpha, opt.training, element_positions(layout), {}};
        if (opt.training != Training::ideal)
            ch.F = detail::training_matrix(opt.training, N_t);

        const double c0 = std::sqrt(static_cast<double>(rx.count) * N_t);
        const Eigen::VectorXcd h0 = ch.unit(g.r, g.theta);
        const double ht = opt.fd_step * std::max(1.0, std::abs(g.theta));
        const double hr = opt.fd_step * g.r;

        Eigen::MatrixXcd J(h0.size(), 4);
        J.col(0) = alpha * c0 * detail::central_difference([&](double t) { return ch.unit(g.r, t); }, g.theta, ht);
        J.col(1) = alpha * c0 * detail::central_difference([&](double r) { return ch.unit(r, g.theta); }, g.r, hr);
        J.col(2) = c0 * h0;
        J.col(3) = cdouble(0.0, 1.0) * c0 * h0;

        OracleResult out;
        out.fisher = (2.0 / sigma_n_sq) * (J.adjoint() * J).real();
        const double norm = static_cast<double>(rx.count) * N_t;
        out.h_alpha_rr = J.col(2).squaredNorm() / norm;
        out.h_alpha_ii = J.col(3).squaredNorm() / norm;
        out.h_alpha_ri = J.col(2).dot(J.col(3)).real() / norm;

        const Eigen::Vector4d diag = out.fisher.diagonal();
        if ((diag.array() <= 0.0).any())
            detail::fail(ErrorCode::singular_fisher, "a parameter carries no information");
        const Eigen::Vector4d s = diag.cwiseSqrt().cwiseInverse();
        const Eigen::Matrix4d G = s.asDiagonal() * out.fisher * s.asDiagonal();
        const Eigen::Matrix4d Ginv = G.fullPivLu().inverse();
        out.inversion_residual = (G * Ginv - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
        if (!(out.inversion_residual <= 1e-6))
            detail::fail(ErrorCode::ill_conditioned, "4x4 Fisher inversion residual above 1e-6");
        const Eigen::Matrix4d Finv = s.asDiagonal() * Ginv * s.asDiagonal();

        const double beta_sq = received_gain(alpha, rx.count, N_t);
        const Eigen::Matrix2d Qinv = Finv.topLeftCorner<2, 2>() * (2.0 * beta_sq / sigma_n_sq);
        const Eigen::Matrix2d Q = Qinv.inverse();
        out.crb = {Finv(0, 0), Finv(1, 1), {Q(0, 0), 0.5 * (Q(0, 1) + Q(1, 0)), Q(1, 1)}, beta_sq, sigma_n_sq};
        return out;
    }
}

#endif
