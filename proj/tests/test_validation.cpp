// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


#include <nfcrb/validation.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace nfcrb;

TEST(Validation, FreshBuildPasses)
{
    const auto reports = run_validation();
    EXPECT_TRUE(all_passed(reports));
    for (const auto &r : reports)
        EXPECT_NE(r.status, CheckStatus::fail) << r.module << ": " << r.name << " " << r.note;
    std::ostringstream os;
    write_report(os, reports);
    EXPECT_NE(os.str().find("0 failed"), std::string::npos);
}

TEST(Validation, SteepThetaIsSkippedNotFailed)
{
    const auto r = detail::check_riemann_theta_edge();
    EXPECT_EQ(r.status, CheckStatus::skipped);
}

TEST(Validation, FlippedKernelSignIsCaught)
{
    static const detail::KernelFn good[4] = {g_theta2, g_theta, g_r, g_thetar};
    EXPECT_EQ(detail::check_g_functions(good).status, CheckStatus::pass);
    static const detail::KernelFn bad[4] = {g_theta2, g_theta, [](double x, double t) { return -g_r(x, t); }, g_thetar};
    EXPECT_EQ(detail::check_g_functions(bad).status, CheckStatus::fail);
}

TEST(Validation, NanCountsAsFailure)
{
    EXPECT_EQ(detail::verdict("m", "n", NAN, 1.0).status, CheckStatus::fail);
    EXPECT_EQ(detail::verdict("m", "n", 1.0, 1.0).status, CheckStatus::pass);
}
