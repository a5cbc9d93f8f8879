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

// AVX2 + FMA variant of element_sums. This translation unit is the only one compiled with
// -mavx2 -mfma; the dispatcher calls into it only after a CPUID check.

#include "nearfield/kernels.hpp"

#if defined(NEARFIELD_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nearfield::kernels
{
    namespace
    {
        // Cephes sin/cos minimax coefficients on [-pi/4, pi/4]
        constexpr double kSinCoef[6] = {1.58962301576546568060E-10, -2.50507477628578072866E-8,
                                        2.75573136213857245213E-6, -1.98412698295895385996E-4,
                                        8.33333333332211858878E-3, -1.66666666666666307295E-1};
        constexpr double kCosCoef[6] = {-1.13585365213876817300E-11, 2.08757008419747316778E-9,
                                        -2.75573141792967388112E-7, 2.48015872888517045348E-5,
                                        -1.38888888888730564116E-3, 4.16666666666665929218E-2};

        // pi/4 split into three parts for Cody-Waite reduction
        constexpr double kDP1 = 7.85398125648498535156E-1;
        constexpr double kDP2 = 3.77489470793079817668E-8;
        constexpr double kDP3 = 2.69515142907905952645E-15;
        constexpr double kFourOverPi = 1.27323954473516268615;

        inline __m256d poly6(__m256d z, const double (&c)[6])
        {
            __m256d p = _mm256_set1_pd(c[0]);
            for (int i = 1; i < 6; ++i)
                p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c[i]));
            return p;
        }

        // Nonzero int32 lanes become 64-bit all-ones masks
        inline __m256d lane_mask(__m128i v)
        {
            const __m128i nz = _mm_cmpeq_epi32(v, _mm_setzero_si128());
            return _mm256_castsi256_pd(_mm256_cvtepi32_epi64(_mm_xor_si128(nz, _mm_set1_epi32(-1))));
        }

        // sin(x) and cos(x) for |x| < 2^30, accuracy comparable to libm
        inline void sincos4(__m256d x, __m256d &s, __m256d &c)
        {
            const __m256d sign_bit = _mm256_set1_pd(-0.0);
            const __m256d ax = _mm256_andnot_pd(sign_bit, x);
            const __m256d x_sign = _mm256_and_pd(sign_bit, x);

            __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(kFourOverPi)));
            __m128i j = _mm256_cvttpd_epi32(y);
            // round octant up to even
            j = _mm_and_si128(_mm_add_epi32(j, _mm_set1_epi32(1)), _mm_set1_epi32(~1));
            y = _mm256_cvtepi32_pd(j);

            __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP1), ax);
            z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP2), z);
            z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP3), z);
            const __m256d zz = _mm256_mul_pd(z, z);

            const __m256d ps = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), poly6(zz, kSinCoef), z);
            const __m256d zz2 = _mm256_mul_pd(zz, zz);
            const __m256d pc = _mm256_fmadd_pd(zz2, poly6(zz, kCosCoef),
                                               _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0)));

            // octant j in {0, 2, 4, 6}: bit 2 swaps the polynomials, bit 4 flips the sine sign,
            // (j + 2) bit 4 flips the cosine sign
            const __m256d swap = lane_mask(_mm_and_si128(j, _mm_set1_epi32(2)));
            const __m256d flip_s = _mm256_and_pd(lane_mask(_mm_and_si128(j, _mm_set1_epi32(4))), sign_bit);
            const __m256d flip_c = _mm256_and_pd(
                lane_mask(_mm_and_si128(_mm_add_epi32(j, _mm_set1_epi32(2)), _mm_set1_epi32(4))), sign_bit);

            s = _mm256_blendv_pd(ps, pc, swap);
            c = _mm256_blendv_pd(pc, ps, swap);
            s = _mm256_xor_pd(s, _mm256_xor_pd(flip_s, x_sign));
            c = _mm256_xor_pd(c, flip_c);
        }

        inline double hsum(__m256d v)
        {
            alignas(32) double t[4];
            _mm256_store_pd(t, v);
            return (t[0] + t[1]) + (t[2] + t[3]);
        }

        inline double hmax(__m256d v)
        {
            alignas(32) double t[4];
            _mm256_store_pd(t, v);
            return std::max(std::max(t[0], t[1]), std::max(t[2], t[3]));
        }

        inline double hmin(__m256d v)
        {
            alignas(32) double t[4];
            _mm256_store_pd(t, v);
            return std::min(std::min(t[0], t[1]), std::min(t[2], t[3]));
        }
    }

    ElementSums element_sums_avx2(const Geometry &g)
    {
        const __m256d r = _mm256_set1_pd(g.range);
        const __m256d inv_r = _mm256_set1_pd(1.0 / g.range);
        const __m256d cth = _mm256_set1_pd(g.cos_theta);
        const __m256d sth = _mm256_set1_pd(g.sin_theta);
        const __m256d d = _mm256_set1_pd(g.spacing);
        const __m256d half_k = _mm256_set1_pd(0.5 * g.wavenumber);
        const __m256d one = _mm256_set1_pd(1.0);
        const __m256d two = _mm256_set1_pd(2.0);
        const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());

        __m256d acc_max = _mm256_setzero_pd();
        __m256d acc_m2 = _mm256_setzero_pd();
        __m256d acc_inv2 = _mm256_setzero_pd();
        __m256d acc_re = _mm256_setzero_pd();
        __m256d acc_im = _mm256_setzero_pd();
        __m256d acc_min = inf;

        __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
        const __m256d step = _mm256_set1_pd(4.0);
        const double n_total = double(g.n_elements);

        for (std::size_t n0 = 0; n0 < g.n_elements; n0 += 4)
        {
            // Lanes past the end are evaluated at x = 0 (exact zero mismatch) and masked out below
            const __m256d valid = _mm256_cmp_pd(idx, _mm256_set1_pd(n_total), _CMP_LT_OQ);
            const __m256d x = _mm256_and_pd(_mm256_mul_pd(idx, d), valid);

            const __m256d along = _mm256_fnmadd_pd(x, cth, r);
            const __m256d across = _mm256_mul_pd(x, sth);
            const __m256d R = _mm256_sqrt_pd(_mm256_fmadd_pd(along, along, _mm256_mul_pd(across, across)));
            const __m256d R_plus_r = _mm256_add_pd(R, r);
            const __m256d dR = _mm256_div_pd(_mm256_mul_pd(x, _mm256_fnmadd_pd(_mm256_mul_pd(two, r), cth, x)), R_plus_r);
            const __m256d half = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(half_k, x), _mm256_fmadd_pd(cth, dR, x)), R_plus_r);

            __m256d sh, ch;
            sincos4(half, sh, ch);

            const __m256d inv_R = _mm256_div_pd(one, R);
            const __m256d sin_phi = _mm256_mul_pd(two, _mm256_mul_pd(sh, ch));
            const __m256d one_minus_cos = _mm256_mul_pd(two, _mm256_mul_pd(sh, sh));

            const __m256d re = _mm256_mul_pd(_mm256_fmadd_pd(dR, inv_r, one_minus_cos), inv_R);
            const __m256d im = _mm256_mul_pd(sin_phi, inv_R);
            const __m256d m2 = _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im));

            acc_max = _mm256_max_pd(acc_max, m2);
            acc_m2 = _mm256_add_pd(acc_m2, m2);
            acc_inv2 = _mm256_add_pd(acc_inv2, _mm256_and_pd(_mm256_mul_pd(inv_R, inv_R), valid));
            acc_re = _mm256_add_pd(acc_re, _mm256_and_pd(_mm256_mul_pd(_mm256_sub_pd(one, one_minus_cos), inv_R), valid));
            acc_im = _mm256_add_pd(acc_im, _mm256_and_pd(_mm256_mul_pd(sin_phi, inv_R), valid));
            acc_min = _mm256_min_pd(acc_min, _mm256_blendv_pd(inf, R, valid));

            idx = _mm256_add_pd(idx, step);
        }

        ElementSums s;
        s.max_mismatch_sq = hmax(acc_max);
        s.sum_mismatch_sq = hsum(acc_m2);
        s.sum_inv_dist_sq = hsum(acc_inv2);
        s.corr_re = hsum(acc_re);
        s.corr_im = hsum(acc_im);
        s.min_distance = hmin(acc_min);
        return s;
    }
}

#endif
