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

#include "nearfield/link.hpp"
#include "nearfield/errors.hpp"

#include <cmath>
#include <numbers>

namespace nearfield
{
    void LinkBudget::validate() const
    {
        if (!(pilot_snr > 0.0) || !std::isfinite(pilot_snr))
            throw ValidationError("pilot SNR must be positive");
        if (!(data_snr >= 0.0) || !std::isfinite(data_snr))
            throw ValidationError("data SNR must be non-negative");
        if (pilot_len == 0)
            throw ValidationError("pilot length must be at least 1");
    }

    namespace
    {
        double gain_from_sums(const ArrayConfig &cfg, const kernels::ElementSums &s)
        {
            const double a = cfg.wavelength() / (4.0 * kPi);
            return a * a * s.sum_inv_dist_sq;
        }

        SEReport report(double gain, double eta, const LinkBudget &budget)
        {
            SEReport rep;
            rep.gain = gain;
            rep.eta = eta;
            const double snr_opt = budget.data_snr * gain;
            const double snr_mis = snr_mismatched(gain, eta, budget);
            rep.se_opt = std::log1p(snr_opt) / std::numbers::ln2;
            rep.se_mis = std::log1p(snr_mis) / std::numbers::ln2;
            // log2((1 + a) / (1 + b)) without cancellation; snr_mis <= snr_opt by construction
            rep.delta_se = std::log1p((snr_opt - snr_mis) / (1.0 + snr_mis)) / std::numbers::ln2;
            return rep;
        }
    }

    double channel_gain(const ArrayConfig &cfg, const PolarPosition &pos)
    {
        return gain_from_sums(cfg, element_sums(cfg, pos));
    }

    double se_optimal(double gain, const LinkBudget &budget)
    {
        if (!(gain >= 0.0))
            throw DomainError("channel gain must be non-negative");
        budget.validate();
        return std::log1p(budget.data_snr * gain) / std::numbers::ln2;
    }

    double snr_mismatched(double gain, double eta, const LinkBudget &budget)
    {
        if (!(gain > 0.0) || !std::isfinite(gain))
            throw DomainError("channel gain must be positive");
        if (!(eta >= 0.0 && eta <= 1.0))
            throw DomainError("array-gain efficiency must lie in [0, 1]");
        budget.validate();
        const double inv_pilot = 1.0 / (double(budget.pilot_len) * budget.pilot_snr);
        const double eg = eta * gain;
        // eta^2 G^2 rho_d / (G eta rho_d / (L rho_p) + eta G + 1 / (L rho_p)), written as
        // (eta G rho_d) * (eta G / den) so that the result never exceeds eta G rho_d
        const double den = eg * budget.data_snr * inv_pilot + eg + inv_pilot;
        return (eg * budget.data_snr) * (eg / den);
    }

    SEReport se_loss(const ArrayConfig &cfg, const PolarPosition &pos, const LinkBudget &budget)
    {
        const auto s = element_sums(cfg, pos);
        return report(gain_from_sums(cfg, s), eta_from_sums(s, cfg.n_elements()), budget);
    }

    MetricSample se_loss_worst(const ArrayConfig &cfg, double range, const LinkBudget &budget, const AngleSearchPolicy &policy)
    {
        budget.validate();
        const PolarPosition probe(0.5 * kPi, range);
        if (cfg.n_elements() == 1)
            return {probe.range, 0.0, 0.0};
        return maximize_over_angle([&](double theta)
                                   { return se_loss(cfg, PolarPosition(theta, range), budget).delta_se; },
                                   range, policy);
    }

    double nmse_lower_bound(const ArrayConfig &cfg, const PolarPosition &pos, const LinkBudget &budget)
    {
        budget.validate();
        const auto s = element_sums(cfg, pos);
        const double eta = eta_from_sums(s, cfg.n_elements());
        const double gain = gain_from_sums(cfg, s);
        return (1.0 - eta) + 1.0 / (double(budget.pilot_len) * budget.pilot_snr * gain);
    }

    double nmse_bias_approx(double e_l2_value)
    {
        if (!(e_l2_value >= 0.0))
            throw DomainError("l2 mismatch must be non-negative");
        const double t = 1.0 - 0.5 * e_l2_value * e_l2_value;
        return 1.0 - t * t;
    }
}
