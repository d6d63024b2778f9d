// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
// ------------------------------------------------------------------------

// Test-side finite-difference helpers, independent of the library's own oracle.

#ifndef NFCRB_TESTS_FD_ORACLE_HPP
#define NFCRB_TESTS_FD_ORACLE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <type_traits>

namespace fd
{
    // Fourth-order central difference
    template <typename Fn>
    auto derivative(Fn &&f, double x, double h)
    {
        // Evaluate before the temporaries of f die (Eigen expressions are lazy)
        using Value = std::decay_t<decltype(f(x))>;
        Value out = (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
        return out;
    }

    // Second derivative by a five-point stencil
    template <typename Fn>
    double second_derivative(Fn &&f, double x, double h)
    {
        return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) / (12.0 * h * h);
    }

    inline double rel_l2(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b)
    {
        const double n = b.norm();
        return n == 0.0 ? a.norm() : (a - b).norm() / n;
    }
}

#endif
