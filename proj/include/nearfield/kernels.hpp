// SPDX-License-Identifier: Apache-2.0
//
// nearfield - near-field / far-field transition distances for uniform linear arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Element-loop kernels shared by every mismatch metric.
//
// For a source at (r, theta) each element n contributes
//
//     x      = n d
//     R      = sqrt((r - x cos)^2 + (x sin)^2)
//     dphi   = k [(R - r) + x cos]                  (near/far phase difference)
//     m      = (1/R) exp(-j dphi) - 1/r             (per-element mismatch)
//
// and all three metrics only need reductions over n:
//     E_linf = max |m|,  E_l2 = sqrt(sum |m|^2 / sum 1/R^2),
//     eta    = |sum exp(j dphi) / R|^2 / (N sum 1/R^2).
//
// The phase is evaluated as k x (x + cos (R - r)) / (R + r) with R - r = (x^2 - 2 r x cos) / (R + r),
// so no large k R term is ever formed. The mismatch uses the half-angle form
//     Re m = -(2 sin^2(dphi/2) + (R - r)/r) / R,   Im m = -sin(dphi) / R
// which stays accurate when the models agree to many digits.
//
// element_sums_scalar is the reference; SIMD variants must agree with it to rounding.

#ifndef NEARFIELD_KERNELS_HPP
#define NEARFIELD_KERNELS_HPP

#include <cstddef>
#include <string_view>
#include <vector>

namespace nearfield::kernels
{
    struct Geometry
    {
        double range;      // r [m]
        double cos_theta;  // cos(theta)
        double sin_theta;  // |sin(theta)|
        double spacing;    // d [m]
        double wavenumber; // k [rad/m]
        std::size_t n_elements;
    };

    struct ElementSums
    {
        double max_mismatch_sq = 0.0; // max_n |m_n|^2
        double sum_mismatch_sq = 0.0; // sum_n |m_n|^2
        double sum_inv_dist_sq = 0.0; // sum_n 1 / R_n^2
        double corr_re = 0.0;         // Re sum_n exp(j dphi_n) / R_n
        double corr_im = 0.0;         // Im sum_n exp(j dphi_n) / R_n
        double min_distance = 0.0;    // min_n R_n
    };

    enum class Isa
    {
        scalar,
        avx2
    };

    std::string_view isa_name(Isa isa);

    ElementSums element_sums_scalar(const Geometry &g);

#ifdef NEARFIELD_HAVE_AVX2
    // Compiled with -mavx2 -mfma; call only when isa_supported(Isa::avx2)
    ElementSums element_sums_avx2(const Geometry &g);
#endif

    // True if the variant was compiled in and the running CPU can execute it
    bool isa_supported(Isa isa);

    // All supported variants, scalar first
    std::vector<Isa> supported_isas();

    // Currently selected variant. Initialised on first use from NEARFIELD_KERNEL
    // (scalar | avx2 | auto, default auto = best supported).
    Isa active_isa();

    // Throws ValidationError if the variant is not supported
    void select_isa(Isa isa);

    // Dispatches to the active variant
    ElementSums element_sums(const Geometry &g);

    // Explicit dispatch, used by equivalence tests
    ElementSums element_sums(const Geometry &g, Isa isa);
}

#endif
