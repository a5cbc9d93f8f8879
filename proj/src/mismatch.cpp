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

#include "nearfield/mismatch.hpp"
#include "nearfield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace nearfield
{
    void AngleSearchPolicy::validate() const
    {
        if (coarse_grid_points < 3)
            throw ValidationError("angle grid needs at least 3 points");
        if (!(refine_tolerance > 0.0) || !std::isfinite(refine_tolerance))
            throw ValidationError("angle refine tolerance must be positive");
        if (refine_max_iter == 0)
            throw ValidationError("angle refine iteration limit must be positive");
    }

    kernels::ElementSums element_sums(const ArrayConfig &cfg, const PolarPosition &pos)
    {
        const kernels::Geometry g{pos.range, std::cos(pos.theta), std::abs(std::sin(pos.theta)),
                                  cfg.spacing(), cfg.wavenumber(), cfg.n_elements()};
        const auto s = kernels::element_sums(g);
        if (!(s.min_distance > 0.0))
            throw DegenerateGeometry("source coincides with an array element (r = " + std::to_string(pos.range) +
                                     " m, theta = " + std::to_string(pos.theta) + " rad)");
        return s;
    }

    double linf_from_sums(const kernels::ElementSums &s) { return std::sqrt(s.max_mismatch_sq); }

    double l2_from_sums(const kernels::ElementSums &s) { return std::sqrt(s.sum_mismatch_sq / s.sum_inv_dist_sq); }

    double eta_from_sums(const kernels::ElementSums &s, std::size_t n_elements)
    {
        if (n_elements == 1)
            return 1.0;
        const double num = s.corr_re * s.corr_re + s.corr_im * s.corr_im;
        const double eta = num / (double(n_elements) * s.sum_inv_dist_sq);
        return std::clamp(eta, 0.0, 1.0);
    }

    double e_linf_at(const ArrayConfig &cfg, const PolarPosition &pos) { return linf_from_sums(element_sums(cfg, pos)); }

    double e_l2_at(const ArrayConfig &cfg, const PolarPosition &pos) { return l2_from_sums(element_sums(cfg, pos)); }

    double array_gain_efficiency(const ArrayConfig &cfg, const PolarPosition &pos)
    {
        return eta_from_sums(element_sums(cfg, pos), cfg.n_elements());
    }

    MetricSample maximize_over_angle(const std::function<double(double)> &f, double range, const AngleSearchPolicy &policy)
    {
        policy.validate();
        const double lo = kAngleInset;
        const double hi = kPi - kAngleInset;
        const std::size_t m = policy.coarse_grid_points;

        std::vector<double> grid(m);
        for (std::size_t i = 0; i < m; ++i)
            grid[i] = lo + (hi - lo) * double(i) / double(m - 1);
        grid.back() = hi;
        if (m % 2 == 0)
            grid.insert(grid.begin() + std::ptrdiff_t(m / 2), 0.5 * kPi);
        else
            grid[m / 2] = 0.5 * kPi;

        // Strict comparison in increasing theta keeps the smallest angle on ties
        std::size_t best = 0;
        double best_val = f(grid[0]);
        for (std::size_t i = 1; i < grid.size(); ++i)
        {
            const double v = f(grid[i]);
            if (v > best_val)
            {
                best_val = v;
                best = i;
            }
        }

        MetricSample out{range, best_val, grid[best]};
        auto consider = [&](double theta, double v)
        {
            if (v > out.value || (v == out.value && theta < out.theta_star))
            {
                out.value = v;
                out.theta_star = theta;
            }
        };

        // Golden-section maximisation inside the neighbouring cells
        constexpr double inv_phi = 0.6180339887498948482;
        double a = grid[best == 0 ? 0 : best - 1];
        double b = grid[std::min(best + 1, grid.size() - 1)];
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = f(c);
        double fd = f(d);
        consider(c, fc);
        consider(d, fd);
        for (std::size_t it = 0; it < policy.refine_max_iter && (b - a) > policy.refine_tolerance; ++it)
        {
            if (fc >= fd)
            {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = f(c);
                consider(c, fc);
            }
            else
            {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = f(d);
                consider(d, fd);
            }
        }
        return out;
    }

    namespace
    {
        template <typename Reduce>
        MetricSample worst_from_sums(const ArrayConfig &cfg, double range, const AngleSearchPolicy &policy, Reduce reduce)
        {
            const PolarPosition probe(0.5 * kPi, range); // validates range
            if (cfg.n_elements() == 1)
                return {probe.range, 0.0, 0.0};
            return maximize_over_angle([&](double theta)
                                       { return reduce(element_sums(cfg, PolarPosition(theta, range))); },
                                       range, policy);
        }
    }

    MetricSample e_linf_worst(const ArrayConfig &cfg, double range, const AngleSearchPolicy &policy)
    {
        return worst_from_sums(cfg, range, policy, linf_from_sums);
    }

    MetricSample e_l2_worst(const ArrayConfig &cfg, double range, const AngleSearchPolicy &policy)
    {
        return worst_from_sums(cfg, range, policy, l2_from_sums);
    }
}
