// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#ifndef NFCRB_ERRORS_HPP
#define NFCRB_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace nfcrb
{
    enum class ErrorCode
    {
        precondition,
        invalid_layout,
        degenerate_geometry,
        span_singularity,
        element_coincidence,
        singular_fisher,
        ill_conditioned,
        domain_error,
        singularity_near_pi2
    };

    // Machine-readable name, also used as the CSV error_code column
    inline std::string_view to_string(ErrorCode code) noexcept
    {
        switch (code)
        {
        case ErrorCode::precondition:
            return "precondition";
        case ErrorCode::invalid_layout:
            return "invalid_layout";
        case ErrorCode::degenerate_geometry:
            return "degenerate_geometry";
        case ErrorCode::span_singularity:
            return "span_singularity";
        case ErrorCode::element_coincidence:
            return "element_coincidence";
        case ErrorCode::singular_fisher:
            return "singular_fisher";
        case ErrorCode::ill_conditioned:
            return "ill_conditioned";
        case ErrorCode::domain_error:
            return "domain_error";
        case ErrorCode::singularity_near_pi2:
            return "singularity_near_pi2";
        }
        return "unknown";
    }

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string &what)
            : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

        ErrorCode code() const noexcept { return code_; }

    private:
        ErrorCode code_;
    };

    namespace detail
    {
        [[noreturn]] inline void fail(ErrorCode code, const std::string &what)
        {
            throw Error(code, what);
        }

        inline void require(bool condition, ErrorCode code, const char *what)
        {
            if (!condition)
                throw Error(code, what);
        }
    }
}

#endif
