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

#ifndef NEARFIELD_MISMATCH_HPP
#define NEARFIELD_MISMATCH_HPP

#include "nearfield/array_model.hpp"
#include "nearfield/kernels.hpp"

#include <cstddef>
#include <functional>

namespace nearfield
{
    // Maximisation over the look angle. The coarse grid covers [inset, pi - inset] and always
    // contains both ends and pi/2; the best cell is then refined by golden-section search.
    struct AngleSearchPolicy
    {
        std::size_t coarse_grid_points = 721;
        double refine_tolerance = 1e-6; // [rad]
        std::size_t refine_max_iter = 200;

        void validate() const; // throws ValidationError
    };

    // Angles are kept this far away from 0 and pi (the maximisation runs over an open interval)
    inline constexpr double kAngleInset = 1e-9;

    struct MetricSample
    {
        double range = 0.0;      // [m]
        double value = 0.0;      // metric units
        double theta_star = 0.0; // maximising angle in [0, pi]
    };

    // Reductions over all elements at one position; throws DegenerateGeometry if some R_n == 0
    kernels::ElementSums element_sums(const ArrayConfig &cfg, const PolarPosition &pos);

    // Worst single-element mismatch max_n |e^{-jkR_n}/R_n - e^{-jk(r - nd cos)}/r|, units 1/m
    double e_linf_at(const ArrayConfig &cfg, const PolarPosition &pos);

    // Normalised l2 mismatch, dimensionless
    double e_l2_at(const ArrayConfig &cfg, const PolarPosition &pos);

    // eta = |h_NF^H h_FF|^2 / (|h_NF|^2 |h_FF|^2), in [0, 1]
    double array_gain_efficiency(const ArrayConfig &cfg, const PolarPosition &pos);

    // Derived quantities from one kernel evaluation
    double linf_from_sums(const kernels::ElementSums &s);
    double l2_from_sums(const kernels::ElementSums &s);
    double eta_from_sums(const kernels::ElementSums &s, std::size_t n_elements);

    // Generic maximiser of f(theta) over (0, pi). A single-element array short-cuts to
    // {value 0, theta_star 0} in the callers, not here.
    MetricSample maximize_over_angle(const std::function<double(double)> &f, double range, const AngleSearchPolicy &policy);

    MetricSample e_linf_worst(const ArrayConfig &cfg, double range, const AngleSearchPolicy &policy = {});
    MetricSample e_l2_worst(const ArrayConfig &cfg, double range, const AngleSearchPolicy &policy = {});
}

#endif
