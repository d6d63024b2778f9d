// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


#ifndef NFCRB_NFCRB_HPP
#define NFCRB_NFCRB_HPP

#include "errors.hpp"
#include "layout.hpp"
#include "geometry.hpp"
#include "array_layouts.hpp"
#include "fisher_core.hpp"
#include "closed_form.hpp"
#include "crb_analytic.hpp"
#include "experiment.hpp"
#include "validation.hpp"

#endif
