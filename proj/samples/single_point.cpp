// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


// Angle and range bounds of a 3 x 128 WSMS at 100 GHz, computed three ways.

#include <nfcrb/nfcrb.hpp>

#include <cmath>
#include <cstdio>

int main()
{
    using namespace nfcrb;

    const ArrayLayout layout = make_layout(LayoutKind::wsms, 3, 128, /*I=*/6, /*frequency_hz=*/1e11);
    const SceneGeometry scene{/*R=*/31.0, /*r=*/10.0, /*theta=*/0.3};
    const Receiver rx{4, layout.d};
    const cdouble alpha{1.0, 0.0};
    const double sigma_n_sq = 1.0;

    const CrbResult direct = direct_crb(WavefrontModel::sw, layout, scene, rx, alpha, sigma_n_sq);
    const CrbResult closed = sw_crb_closed(layout, scene, rx, alpha, sigma_n_sq);
    const CrbResult hspw = hspw_crb_closed(layout, scene, rx, alpha, sigma_n_sq);

    std::printf("%-10s %14s %14s\n", "path", "root CRB_theta", "root CRB_r");
    std::printf("%-10s %14.6e %14.6e\n", "direct", std::sqrt(direct.crb_theta), std::sqrt(direct.crb_r));
    std::printf("%-10s %14.6e %14.6e\n", "riemann", std::sqrt(closed.crb_theta), std::sqrt(closed.crb_r));
    std::printf("%-10s %14.6e %14.6e\n", "hspw", std::sqrt(hspw.crb_theta), std::sqrt(hspw.crb_r));
    return 0;
}
