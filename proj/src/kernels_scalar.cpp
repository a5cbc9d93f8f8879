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

#include "nearfield/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nearfield::kernels
{
    ElementSums element_sums_scalar(const Geometry &g)
    {
        const double r = g.range;
        const double inv_r = 1.0 / r;
        ElementSums s;
        s.min_distance = std::numeric_limits<double>::infinity();

        for (std::size_t n = 0; n < g.n_elements; ++n)
        {
            const double x = double(n) * g.spacing;
            const double along = r - x * g.cos_theta;
            const double across = x * g.sin_theta;
            const double R = std::sqrt(along * along + across * across);
            const double dR = x * (x - 2.0 * r * g.cos_theta) / (R + r);              // R - r
            const double half = 0.5 * g.wavenumber * x * (x + g.cos_theta * dR) / (R + r); // dphi / 2

            const double sh = std::sin(half);
            const double ch = std::cos(half);
            const double inv_R = 1.0 / R;
            const double sin_phi = 2.0 * sh * ch;
            const double one_minus_cos = 2.0 * sh * sh;

            const double re = -(one_minus_cos + dR * inv_r) * inv_R;
            const double im = -sin_phi * inv_R;
            const double m2 = re * re + im * im;

            s.max_mismatch_sq = std::max(s.max_mismatch_sq, m2);
            s.sum_mismatch_sq += m2;
            s.sum_inv_dist_sq += inv_R * inv_R;
            s.corr_re += (1.0 - one_minus_cos) * inv_R;
            s.corr_im += sin_phi * inv_R;
            s.min_distance = std::min(s.min_distance, R);
        }
        return s;
    }
}
