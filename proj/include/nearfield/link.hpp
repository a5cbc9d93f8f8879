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

#ifndef NEARFIELD_LINK_HPP
#define NEARFIELD_LINK_HPP

#include "nearfield/array_model.hpp"
#include "nearfield/mismatch.hpp"

#include <cmath>
#include <cstddef>

namespace nearfield
{
    // Pilot / data budget. All SNRs are linear ratios.
    struct LinkBudget
    {
        double pilot_snr = 1e10;    // rho_p
        double data_snr = 1e10;     // rho_d
        std::size_t pilot_len = 64; // L

        void validate() const; // throws ValidationError
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

    struct SEReport
    {
        double se_opt = 0.0;   // log2(1 + rho_d G) [bit/s/Hz]
        double se_mis = 0.0;   // log2(1 + SNR_mis)
        double delta_se = 0.0; // se_opt - se_mis, >= 0
        double eta = 1.0;
        double gain = 0.0; // G = |h_NF|^2
    };

    // G = sum_n (lambda / (4 pi R_n))^2
    double channel_gain(const ArrayConfig &cfg, const PolarPosition &pos);

    double se_optimal(double gain, const LinkBudget &budget);

    // Post-combiner SNR when the combiner is the far-field LS estimate.
    // Throws DomainError unless gain > 0 and eta in [0, 1].
    double snr_mismatched(double gain, double eta, const LinkBudget &budget);

    SEReport se_loss(const ArrayConfig &cfg, const PolarPosition &pos, const LinkBudget &budget);

    // Worst-case SE loss over the look angle [bit/s/Hz]
    MetricSample se_loss_worst(const ArrayConfig &cfg, double range, const LinkBudget &budget,
                               const AngleSearchPolicy &policy = {});

    // (1 - eta) + 1 / (L rho_p G)
    double nmse_lower_bound(const ArrayConfig &cfg, const PolarPosition &pos, const LinkBudget &budget);

    // 1 - (1 - x^2/2)^2; throws DomainError for x < 0
    double nmse_bias_approx(double e_l2_value);
}

#endif
