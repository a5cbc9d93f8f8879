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

// Transition distances.
//
// Analytic radii (delta = delta_inf, D aperture, k wavenumber):
//   Rayleigh  2 D^2 / lambda
//   SSPF      sqrt((k D^2 + D) / (2 delta))
//   SPF       largest root of (2 delta / D^2) r^3 - k r - 1 = 0, i.e. where
//             g_SPF(r) = D^2 / (2 r^3) + k D^2 / (2 r^2) equals delta
//   EPF       last r with g_EPF(r) = D^2 / (2 r^3) + (2 / r) |sin(k D^2 / (4 r))| >= delta
//
// Optimal radii are envelope radii: the smallest r such that the worst-case metric stays below
// the tolerance for every r' > r. They are found by scanning a log-spaced grid for the last
// violation and bisecting inside that cell.

#ifndef NEARFIELD_BOUNDARY_HPP
#define NEARFIELD_BOUNDARY_HPP

#include "nearfield/array_model.hpp"
#include "nearfield/link.hpp"
#include "nearfield/mismatch.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace nearfield
{
    struct Tolerances
    {
        double delta_inf = 1e-3; // [1/m]
        double delta_2 = 1e-3;   // dimensionless
        double delta_se = 0.5;   // [bit/s/Hz]

        void validate() const;
    };

    // r^3 + p r + q = 0 with p = -k D^2 / (2 delta), q = -D^2 / (2 delta)
    struct CubicCoefficients
    {
        double p = 0.0; // [m^2]
        double q = 0.0; // [m^3]

        double discriminant() const { return (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0); }
    };

    CubicCoefficients spf_cubic(const ArrayConfig &cfg, double delta_inf);

    struct EnvelopeSearchPolicy
    {
        std::optional<double> r_min;       // default max(D, 10 d)
        std::size_t points_per_decade = 2000;
        double bisection_tol = 1e-8;       // relative
        double certification_margin = 0.5; // trailing-decade margin for uncertified (SE) scans
        double max_scan_factor = 100.0;    // SE horizon = factor * max(Rayleigh, SSPF)

        double resolve_r_min(const ArrayConfig &cfg) const;
        void validate() const;
    };

    enum class Metric
    {
        linf,
        l2,
        se
    };

    std::string_view metric_name(Metric m);
    Metric parse_metric(std::string_view name); // throws ValidationError

    struct BoundarySet
    {
        double rayleigh = 0.0;
        double epf = 0.0;
        double spf = 0.0;
        double sspf = 0.0;
        double opt_linf = 0.0;
        double opt_l2 = 0.0;
        double opt_se = 0.0;

        bool epf_found = false; // false: no violation of g_EPF above r_min, epf set to r_min
        bool opt_linf_certified = false;
        bool opt_l2_certified = false;
        bool opt_se_certified = false;
        bool opt_linf_clamped = false; // no violation above r_min
        bool opt_l2_clamped = false;
        bool opt_se_clamped = false;
    };

    double rayleigh_distance(const ArrayConfig &cfg);

    // Returns 0 for a single element
    double sspf_distance(const ArrayConfig &cfg, double delta_inf);

    // Trigonometric (casus irreducibilis) root of the SPF cubic. Returns 0 for a single element.
    // Throws DomainError if the arccos argument leaves [-1, 1].
    double spf_distance(const ArrayConfig &cfg, double delta_inf);

    // Residual of the SPF cubic, ((2 delta / D^2) r^3 - k r - 1) / (k r)
    double spf_relative_residual(const ArrayConfig &cfg, double delta_inf, double r);

    double epf_bound(const ArrayConfig &cfg, double r); // D^2/(2r^3) + (2/r)|sin(kD^2/(4r))|
    double spf_bound(const ArrayConfig &cfg, double r); // D^2/(2r^3) + kD^2/(2r^2)

    struct EpfResult
    {
        double radius = 0.0;
        bool found = false;
    };

    EpfResult epf_distance(const ArrayConfig &cfg, double delta_inf, const EnvelopeSearchPolicy &policy = {});

    // Smallest r with (r + D) g_SPF(r) < delta_2; beyond it E_l2 <= (r + D) E_linf stays below delta_2
    double l2_certified_bound(const ArrayConfig &cfg, double delta_2);

    // Worst-case metric as a function of range
    using WorstCaseMetric = std::function<MetricSample(double)>;

    struct ScanHorizon
    {
        double upper = 0.0;               // last scanned range
        std::optional<double> certified_below; // analytic bound; no horizon guarantee when empty
    };

    struct EnvelopeResult
    {
        double radius = 0.0;
        bool certified = false;
        bool clamped = false;              // no violation on the grid, radius = r_min
        std::vector<MetricSample> samples; // the scan grid
    };

    // Throws ValidationError for delta <= 0 and HorizonExceeded if the last grid point still
    // violates, or (uncertified scans) if the trailing decade is not below delta * margin.
    EnvelopeResult optimal_radius(const WorstCaseMetric &metric, double delta, double r_min, const ScanHorizon &horizon,
                                  const EnvelopeSearchPolicy &policy = {});

    // Metric-specific horizons and certification, see boundary.cpp
    EnvelopeResult optimal_radius(const ArrayConfig &cfg, Metric metric, const Tolerances &tol, const LinkBudget &budget,
                                  const EnvelopeSearchPolicy &envelope = {}, const AngleSearchPolicy &angles = {});

    ScanHorizon scan_horizon(const ArrayConfig &cfg, Metric metric, const Tolerances &tol,
                             const EnvelopeSearchPolicy &envelope = {});

    // Pointwise worst-case metric used by the envelope search and the sweeps
    MetricSample worst_case(const ArrayConfig &cfg, Metric metric, double range, const LinkBudget &budget,
                            const AngleSearchPolicy &angles = {});

    BoundarySet boundary_set(const ArrayConfig &cfg, const Tolerances &tol, const LinkBudget &budget,
                             const EnvelopeSearchPolicy &envelope = {}, const AngleSearchPolicy &angles = {});

    // Log-spaced grid, first point = start, last point = stop
    std::vector<double> log_grid(double start, double stop, std::size_t points);

    // Number of points for a log grid with the given density
    std::size_t log_grid_points(double start, double stop, std::size_t points_per_decade);
}

#endif
