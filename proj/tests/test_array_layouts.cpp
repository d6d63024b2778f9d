// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


#include "fd_oracle.hpp"

#include <nfcrb/array_layouts.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace nfcrb;

namespace
{
    constexpr double f100 = 1e11;

    ArrayLayout wsms(int K, int M, int I) { return make_layout(LayoutKind::wsms, K, M, I, f100); }

    double wrap(double a) { return std::remainder(a, 2 * pi); }
}

TEST(ArrayLayouts, PositionExamples)
{
    const auto a = element_positions(make_layout(LayoutKind::wsms, 1, 2, 1.0, 1.0, 1.0));
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[0], -0.5);
    EXPECT_EQ(a[1], 0.5);

    const auto b = element_positions(make_layout(LayoutKind::wsms, 2, 1, 1.0, 4.0, 1.0));
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[0], -2.0);
    EXPECT_EQ(b[1], 2.0);
}

TEST(ArrayLayouts, ApertureOfLargeLayout)
{
    const ArrayLayout l = wsms(3, 128, 3);
    const auto n = element_positions(l);
    ASSERT_EQ(n.size(), 384u);
    const double aperture = n.back() - n.front();
    EXPECT_NEAR(aperture, (l.K - 1) * l.D() + (l.M - 1) * l.d, 1e-15);
    EXPECT_NEAR(aperture, l.aperture(), 1e-15);
    // The Riemann cells extend half a pitch beyond the outer elements
    const double r = 10.0;
    const RiemannBounds b = riemann_bounds(l, r);
    EXPECT_NEAR(2 * b.x4 * r, aperture + l.D() + l.d, 1e-14);
}

TEST(ArrayLayouts, PositionsAreSymmetricAndOrdered)
{
    for (LayoutKind kind : {LayoutKind::wsms, LayoutKind::ua, LayoutKind::dua})
        for (int K : {1, 2, 3, 7})
            for (int M : {1, 2, 5, 128})
                for (int I : {0, 1, 6})
                {
                    const auto n = element_positions(make_layout(kind, K, M, I, f100));
                    ASSERT_EQ(n.size(), static_cast<std::size_t>(K * M));
                    for (std::size_t i = 0; i < n.size(); ++i)
                        EXPECT_EQ(n[i], -n[n.size() - 1 - i]);
                    EXPECT_TRUE(std::is_sorted(n.begin(), n.end()));
                    EXPECT_TRUE(std::adjacent_find(n.begin(), n.end()) == n.end());
                }
}

TEST(ArrayLayouts, UniformArraysMirrorTheWsms)
{
    const ArrayLayout w = wsms(3, 16, 5);
    const ArrayLayout ua = make_layout(LayoutKind::ua, 3, 16, 5, f100);
    const ArrayLayout dua = make_layout(LayoutKind::dua, 3, 16, 5, f100);
    const auto nw = element_positions(w), nu = element_positions(ua), nd = element_positions(dua);
    EXPECT_EQ(nu.size(), nw.size());
    EXPECT_EQ(nd.size(), nw.size());
    EXPECT_NEAR(nu.back() - nu.front(), nw.back() - nw.front(), 1e-15);
    const double dprime = (w.D() * (w.K - 1) + w.d * (w.M - 1)) / (w.K * w.M - 1);
    for (std::size_t i = 1; i < nu.size(); ++i)
    {
        EXPECT_NEAR(nu[i] - nu[i - 1], dprime, 1e-15);
        EXPECT_NEAR(nd[i] - nd[i - 1], w.d, 1e-15);
    }
}

TEST(ArrayLayouts, GapEqualSpacingCollapsesLayouts)
{
    const double lambda = wavelength(f100);
    const ArrayLayout w = make_layout(LayoutKind::wsms, 3, 8, lambda / 2, lambda / 2, lambda);
    const auto nw = element_positions(w);
    const auto nu = element_positions(make_layout(LayoutKind::ua, 3, 8, lambda / 2, lambda / 2, lambda));
    const auto nd = element_positions(make_layout(LayoutKind::dua, 3, 8, lambda / 2, lambda / 2, lambda));
    for (std::size_t i = 0; i < nw.size(); ++i)
    {
        EXPECT_NEAR(nw[i], nu[i], 1e-17);
        EXPECT_NEAR(nw[i], nd[i], 1e-17);
    }
}

TEST(ArrayLayouts, InvalidLayouts)
{
    for (auto bad : {ArrayLayout{LayoutKind::wsms, 0, 4, 1.0, 1.0, 1.0}, ArrayLayout{LayoutKind::wsms, 2, 4, 0.0, 1.0, 1.0},
                     ArrayLayout{LayoutKind::ua, 2, 4, 1.0, -1.0, 1.0}, ArrayLayout{LayoutKind::dua, 2, 0, 1.0, 1.0, 1.0}})
    {
        try
        {
            element_positions(bad);
            FAIL();
        }
        catch (const Error &e)
        {
            EXPECT_EQ(e.code(), ErrorCode::invalid_layout);
        }
    }
}

TEST(ArrayLayouts, BundlesHaveUnitNorm)
{
    const ArrayLayout l = wsms(4, 32, 4);
    const SceneGeometry g{31.0, 3.0, 0.4, 0.0};
    EXPECT_NEAR(sw_tx_bundle(l, g.r, g.theta).value.norm(), 1.0, 1e-14);
    EXPECT_NEAR(hspw_tx_bundle(l, g.r, g.theta).value.norm(), 1.0, 1e-14);
    EXPECT_NEAR(pw_tx_bundle(l, g.theta).value.norm(), 1.0, 1e-14);
    EXPECT_NEAR(rx_bundle({8, l.d}, l.lambda, g).value.norm(), 1.0, 1e-14);
    const auto b = sw_tx_bundle(l, g.r, g.theta);
    for (Eigen::Index i = 0; i < b.value.size(); ++i)
        EXPECT_NEAR(std::abs(b.value[i]), 1.0 / std::sqrt(128.0), 1e-15);
}

TEST(ArrayLayouts, SwRangeDerivativeAtBroadside)
{
    const ArrayLayout l = wsms(3, 8, 3);
    const double r = 2.0;
    const auto b = sw_tx_bundle(l, r, 0.0);
    const auto n = element_positions(l);
    const double k = 2 * pi / l.lambda;
    for (std::size_t i = 0; i < n.size(); ++i)
    {
        const cdouble expected = cdouble(0, k) * (-r / std::sqrt(r * r + n[i] * n[i])) * b.value[static_cast<Eigen::Index>(i)];
        EXPECT_NEAR(std::abs(b.d_r[static_cast<Eigen::Index>(i)] - expected), 0.0, 1e-9 * std::abs(expected));
    }
}

TEST(ArrayLayouts, TxDerivativesMatchFiniteDifferences)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> Kd(1, 4), Md(1, 16), Id(0, 8);
    std::uniform_real_distribution<double> T(-1.3, 1.3), U(0.2, 3.0);
    int checked = 0;
    for (int trial = 0; trial < 30; ++trial)
    {
        const ArrayLayout l = wsms(Kd(rng), Md(rng), Id(rng));
        const double r = std::max(l.aperture() * U(rng), 0.05);
        const double theta = T(rng);
        for (WavefrontModel m : {WavefrontModel::sw, WavefrontModel::hspw, WavefrontModel::pw})
        {
            const auto b = tx_bundle(m, l, r, theta);
            const auto ft = fd::derivative([&](double t) { return tx_bundle(m, l, r, t).value; }, theta, 1e-6);
            const auto fr = fd::derivative([&](double x) { return tx_bundle(m, l, x, theta).value; }, r, 1e-6 * r);
            EXPECT_LT(fd::rel_l2(b.d_theta, ft), 1e-6) << "trial " << trial;
            if (m == WavefrontModel::pw)
            {
                EXPECT_EQ(b.d_r.norm(), 0.0);
            }
            else
            {
                EXPECT_LT(fd::rel_l2(b.d_r, fr), 1e-6) << "trial " << trial;
            }
            ++checked;
        }
    }
    EXPECT_EQ(checked, 90);
}

TEST(ArrayLayouts, FiniteDifferenceExampleK3M8)
{
    const ArrayLayout l = wsms(3, 8, 3);
    const double r = 5.0, theta = 0.4;
    for (WavefrontModel m : {WavefrontModel::sw, WavefrontModel::hspw})
    {
        const auto b = tx_bundle(m, l, r, theta);
        const auto ft = fd::derivative([&](double t) { return tx_bundle(m, l, r, t).value; }, theta, 1e-7);
        EXPECT_LT(fd::rel_l2(b.d_theta, ft), 1e-6);
    }
}

TEST(ArrayLayouts, RxBundle)
{
    const double lambda = wavelength(f100);
    const auto one = rx_bundle({1, lambda / 2}, lambda, {31.0, 10.0, 0.3, 0.0});
    ASSERT_EQ(one.value.size(), 1);
    EXPECT_EQ(one.value[0], cdouble(1.0));
    EXPECT_EQ(one.d_theta[0], cdouble(0.0));
    EXPECT_EQ(one.d_r[0], cdouble(0.0));

    const auto flat = rx_bundle({6, lambda / 2}, lambda, {31.0, 10.0, 0.0, 0.0});
    EXPECT_EQ(flat.d_r.norm(), 0.0);

    const Receiver rx{4, lambda / 2};
    const double R = 31.0, r = 10.0, theta = 0.3;
    const auto b = rx_bundle(rx, lambda, {R, r, theta, 0.0});
    const auto ft = fd::derivative([&](double t) { return rx_bundle(rx, lambda, {R, r, t, 0.0}).value; }, theta, 1e-6);
    const auto fr = fd::derivative([&](double x) { return rx_bundle(rx, lambda, {R, x, theta, 0.0}).value; }, r, 1e-6 * r);
    EXPECT_LT(fd::rel_l2(b.d_theta, ft), 1e-6);
    EXPECT_LT(fd::rel_l2(b.d_r, fr), 1e-6);
}

TEST(ArrayLayouts, SphericalApproachesPlanar)
{
    const ArrayLayout l = wsms(3, 8, 3);
    const double theta = 0.5;
    double last = 1e300;
    for (double scale : {1e2, 1e3, 1e4})
    {
        const double r = scale * l.aperture();
        const auto sw = sw_tx_bundle(l, r, theta).value;
        const auto pw = pw_tx_bundle(l, theta).value;
        const double ref = std::arg(sw[0] * std::conj(pw[0]));
        double dev = 0.0;
        for (Eigen::Index i = 0; i < sw.size(); ++i)
            dev = std::max(dev, std::abs(wrap(std::arg(sw[i] * std::conj(pw[i])) - ref)));
        EXPECT_LT(dev, last);
        last = dev;
    }
    EXPECT_LT(last, 1e-2);
}

TEST(ArrayLayouts, PlanarPhaseSteps)
{
    const ArrayLayout l = make_layout(LayoutKind::ua, 2, 8, 4, f100);
    const double theta = -0.35;
    const auto b = pw_tx_bundle(l, theta);
    const auto n = element_positions(l);
    const double k = 2 * pi / l.lambda;
    for (std::size_t i = 1; i < n.size(); ++i)
    {
        const auto I = static_cast<Eigen::Index>(i);
        const double step = std::arg(b.value[I] * std::conj(b.value[I - 1]));
        EXPECT_NEAR(step, wrap(k * (n[i] - n[i - 1]) * std::sin(theta)), 1e-12);
    }
    const auto flat = pw_tx_bundle(l, 0.0);
    for (Eigen::Index i = 0; i < flat.value.size(); ++i)
        EXPECT_EQ(flat.value[i], cdouble(1.0 / 4.0));
}

TEST(ArrayLayouts, HybridReductions)
{
    // M = 1: spherical over the subarray centers
    const ArrayLayout a = wsms(5, 1, 7);
    const auto h = hspw_tx_bundle(a, 0.4, 0.2), s = sw_tx_bundle(a, 0.4, 0.2);
    EXPECT_LT((h.value - s.value).norm(), 1e-15);
    EXPECT_LT((h.d_theta - s.d_theta).norm(), 1e-12 * s.d_theta.norm());
    EXPECT_LT((h.d_r - s.d_r).norm(), 1e-12 * s.d_r.norm());

    // K = 1: planar up to the phase of the single center
    const ArrayLayout b = wsms(1, 16, 2);
    const auto hb = hspw_tx_bundle(b, 0.3, -0.6), pb = pw_tx_bundle(b, -0.6);
    const cdouble g = hb.value[0] / pb.value[0];
    EXPECT_NEAR(std::abs(g), 1.0, 1e-14);
    EXPECT_LT((hb.value - g * pb.value).norm(), 1e-12);
}
