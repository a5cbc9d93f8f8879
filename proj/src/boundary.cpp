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

#include "nearfield/boundary.hpp"
#include "nearfield/errors.hpp"
#include "nearfield/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nearfield
{
    namespace
    {
        bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

        // linf and l2 scans extend this far past their analytic bound
        constexpr double kCertifiedScanFactor = 2.0;

        void check_tolerance(double delta, const char *what)
        {
            if (!positive_finite(delta))
                throw ValidationError(std::string(what) + " must be positive and finite");
        }
    }

    void Tolerances::validate() const
    {
        check_tolerance(delta_inf, "delta_inf");
        check_tolerance(delta_2, "delta_2");
        check_tolerance(delta_se, "delta_se");
    }

    double EnvelopeSearchPolicy::resolve_r_min(const ArrayConfig &cfg) const
    {
        return r_min.value_or(std::max(cfg.aperture(), 10.0 * cfg.spacing()));
    }

    void EnvelopeSearchPolicy::validate() const
    {
        if (r_min && !positive_finite(*r_min))
            throw ValidationError("r_min must be positive");
        if (points_per_decade < 10)
            throw ValidationError("points_per_decade must be at least 10");
        if (!positive_finite(bisection_tol) || bisection_tol >= 1.0)
            throw ValidationError("bisection_tol must lie in (0, 1)");
        if (!positive_finite(certification_margin) || certification_margin > 1.0)
            throw ValidationError("certification_margin must lie in (0, 1]");
        if (!positive_finite(max_scan_factor) || max_scan_factor < 1.0)
            throw ValidationError("max_scan_factor must be at least 1");
    }

    std::string_view metric_name(Metric m)
    {
        switch (m)
        {
        case Metric::linf:
            return "linf";
        case Metric::l2:
            return "l2";
        case Metric::se:
            return "se";
        }
        return "unknown";
    }

    Metric parse_metric(std::string_view name)
    {
        if (name == "linf")
            return Metric::linf;
        if (name == "l2")
            return Metric::l2;
        if (name == "se")
            return Metric::se;
        throw ValidationError("unknown metric '" + std::string(name) + "' (expected linf, l2 or se)");
    }

    // ------------------------------------------------------------------------
    // Analytic radii

    double rayleigh_distance(const ArrayConfig &cfg)
    {
        const double D = cfg.aperture();
        return 2.0 * D * D / cfg.wavelength();
    }

    double sspf_distance(const ArrayConfig &cfg, double delta_inf)
    {
        check_tolerance(delta_inf, "delta_inf");
        const double D = cfg.aperture();
        return std::sqrt((cfg.wavenumber() * D * D + D) / (2.0 * delta_inf));
    }

    CubicCoefficients spf_cubic(const ArrayConfig &cfg, double delta_inf)
    {
        check_tolerance(delta_inf, "delta_inf");
        const double D2 = cfg.aperture() * cfg.aperture();
        return {-cfg.wavenumber() * D2 / (2.0 * delta_inf), -D2 / (2.0 * delta_inf)};
    }

    double spf_distance(const ArrayConfig &cfg, double delta_inf)
    {
        const CubicCoefficients c = spf_cubic(cfg, delta_inf);
        if (cfg.n_elements() == 1)
            return 0.0;
        // r = 2 sqrt(-p/3) cos(acos((3q / 2p) sqrt(-3/p)) / 3)
        const double arg = (3.0 * c.q / (2.0 * c.p)) * std::sqrt(-3.0 / c.p);
        if (!(arg >= -1.0 && arg <= 1.0))
            throw DomainError("SPF cubic has no trigonometric root (arccos argument " + std::to_string(arg) + ")");
        return 2.0 * std::sqrt(-c.p / 3.0) * std::cos(std::acos(arg) / 3.0);
    }

    double spf_relative_residual(const ArrayConfig &cfg, double delta_inf, double r)
    {
        const double D2 = cfg.aperture() * cfg.aperture();
        const double k = cfg.wavenumber();
        return ((2.0 * delta_inf / D2) * r * r * r - k * r - 1.0) / (k * r);
    }

    double epf_bound(const ArrayConfig &cfg, double r)
    {
        const double D2 = cfg.aperture() * cfg.aperture();
        return D2 / (2.0 * r * r * r) + (2.0 / r) * std::abs(std::sin(cfg.wavenumber() * D2 / (4.0 * r)));
    }

    double spf_bound(const ArrayConfig &cfg, double r)
    {
        const double D2 = cfg.aperture() * cfg.aperture();
        return D2 / (2.0 * r * r * r) + cfg.wavenumber() * D2 / (2.0 * r * r);
    }

    std::size_t log_grid_points(double start, double stop, std::size_t points_per_decade)
    {
        const double decades = std::log10(stop / start);
        return std::max<std::size_t>(2, std::size_t(std::ceil(decades * double(points_per_decade))) + 1);
    }

    std::vector<double> log_grid(double start, double stop, std::size_t points)
    {
        if (points == 0)
            throw ValidationError("log grid needs at least one point");
        if (points == 1 && positive_finite(start))
            return {start};
        if (!positive_finite(start) || !positive_finite(stop) || !(start < stop))
            throw ValidationError("log grid needs 0 < start < stop");
        std::vector<double> g(points);
        const double ls = std::log(start), le = std::log(stop);
        for (std::size_t i = 0; i < points; ++i)
            g[i] = std::exp(ls + (le - ls) * double(i) / double(points - 1));
        g.front() = start;
        g.back() = stop;
        return g;
    }

    // Last sign change of f(r) >= delta on a grid, refined by bisection. f(grid[i]) >= delta
    // and f(grid[i + 1]) < delta on entry.
    static double bisect_crossing(const std::function<double(double)> &f, double delta, double lo, double hi, double tol)
    {
        for (int it = 0; it < 200 && (hi - lo) > tol * hi; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (f(mid) >= delta)
                lo = mid;
            else
                hi = mid;
        }
        return hi;
    }

    EpfResult epf_distance(const ArrayConfig &cfg, double delta_inf, const EnvelopeSearchPolicy &policy)
    {
        check_tolerance(delta_inf, "delta_inf");
        policy.validate();
        const double r_min = policy.resolve_r_min(cfg);
        if (cfg.n_elements() == 1)
            return {0.0, false};
        const double r_spf = spf_distance(cfg, delta_inf);
        if (!(r_spf > r_min))
            return {r_min, false};

        // g_EPF <= g_SPF < delta beyond R_SPF, so no violation can lie past it
        const auto grid = log_grid(r_min, r_spf, log_grid_points(r_min, r_spf, policy.points_per_decade));
        std::ptrdiff_t last = -1;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (epf_bound(cfg, grid[i]) >= delta_inf)
                last = std::ptrdiff_t(i);
        if (last < 0)
            return {r_min, false};
        if (std::size_t(last) + 1 == grid.size())
            return {r_spf, true};

        auto g = [&](double r)
        { return epf_bound(cfg, r); };
        return {bisect_crossing(g, delta_inf, grid[std::size_t(last)], grid[std::size_t(last) + 1], policy.bisection_tol), true};
    }

    double l2_certified_bound(const ArrayConfig &cfg, double delta_2)
    {
        check_tolerance(delta_2, "delta_2");
        if (cfg.n_elements() == 1)
            return 0.0;
        const double D = cfg.aperture();
        auto h = [&](double r)
        { return (r + D) * spf_bound(cfg, r); };
        double lo = D, hi = D;
        while (h(hi) >= delta_2)
            hi *= 2.0;
        while (lo > 0.0 && h(lo) < delta_2)
            lo *= 0.5;
        for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (h(mid) >= delta_2)
                lo = mid;
            else
                hi = mid;
        }
        return hi;
    }

    // ------------------------------------------------------------------------
    // Envelope search

    EnvelopeResult optimal_radius(const WorstCaseMetric &metric, double delta, double r_min, const ScanHorizon &horizon,
                                  const EnvelopeSearchPolicy &policy)
    {
        check_tolerance(delta, "tolerance");
        policy.validate();
        if (!positive_finite(r_min))
            throw ValidationError("r_min must be positive");

        // Always scan at least one decade
        const double upper = std::max(horizon.upper, 10.0 * r_min);
        const auto grid = log_grid(r_min, upper, log_grid_points(r_min, upper, policy.points_per_decade));

        EnvelopeResult res;
        res.samples.resize(grid.size());
        parallel_for(grid.size(), [&](std::size_t i)
                     { res.samples[i] = metric(grid[i]); });

        std::ptrdiff_t last = -1;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (!(res.samples[i].value < delta))
                last = std::ptrdiff_t(i);

        if (std::size_t(last + 1) == grid.size())
            throw HorizonExceeded("metric still exceeds the tolerance at the scan horizon r = " + std::to_string(upper) + " m");

        if (!horizon.certified_below)
        {
            const double margin = delta * policy.certification_margin;
            for (const auto &s : res.samples)
                if (s.range >= upper / 10.0 && !(s.value < margin))
                    throw HorizonExceeded("metric is not settled below " + std::to_string(margin) +
                                          " over the last scanned decade (r = " + std::to_string(s.range) + " m)");
        }

        if (last < 0)
        {
            res.radius = r_min;
            res.clamped = true;
        }
        else
        {
            auto f = [&](double r)
            { return metric(r).value; };
            res.radius = bisect_crossing(f, delta, grid[std::size_t(last)], grid[std::size_t(last) + 1], policy.bisection_tol);
        }
        // The analytic bound only certifies the result when the scan reached it and the radius respects it
        res.certified = horizon.certified_below.has_value() && upper >= *horizon.certified_below &&
                        res.radius <= std::max(*horizon.certified_below, r_min);
        return res;
    }

    ScanHorizon scan_horizon(const ArrayConfig &cfg, Metric metric, const Tolerances &tol, const EnvelopeSearchPolicy &envelope)
    {
        switch (metric)
        {
        case Metric::linf:
        {
            const double bound = spf_distance(cfg, tol.delta_inf);
            return {kCertifiedScanFactor * bound, bound};
        }
        case Metric::l2:
        {
            const double bound = l2_certified_bound(cfg, tol.delta_2);
            return {kCertifiedScanFactor * bound, bound};
        }
        case Metric::se:
            return {envelope.max_scan_factor * std::max(rayleigh_distance(cfg), sspf_distance(cfg, tol.delta_inf)), std::nullopt};
        }
        throw ValidationError("unknown metric");
    }

    MetricSample worst_case(const ArrayConfig &cfg, Metric metric, double range, const LinkBudget &budget,
                            const AngleSearchPolicy &angles)
    {
        switch (metric)
        {
        case Metric::linf:
            return e_linf_worst(cfg, range, angles);
        case Metric::l2:
            return e_l2_worst(cfg, range, angles);
        case Metric::se:
            return se_loss_worst(cfg, range, budget, angles);
        }
        throw ValidationError("unknown metric");
    }

    EnvelopeResult optimal_radius(const ArrayConfig &cfg, Metric metric, const Tolerances &tol, const LinkBudget &budget,
                                  const EnvelopeSearchPolicy &envelope, const AngleSearchPolicy &angles)
    {
        tol.validate();
        budget.validate();
        envelope.validate();
        angles.validate();
        const double r_min = envelope.resolve_r_min(cfg);
        const double delta = metric == Metric::linf ? tol.delta_inf : metric == Metric::l2 ? tol.delta_2 : tol.delta_se;

        if (cfg.n_elements() == 1)
        {
            // All metrics vanish identically for a single element
            EnvelopeResult res;
            res.radius = r_min;
            res.clamped = true;
            res.certified = metric != Metric::se;
            res.samples.push_back({r_min, 0.0, 0.0});
            return res;
        }

        return optimal_radius([&](double r)
                              { return worst_case(cfg, metric, r, budget, angles); },
                              delta, r_min, scan_horizon(cfg, metric, tol, envelope), envelope);
    }

    BoundarySet boundary_set(const ArrayConfig &cfg, const Tolerances &tol, const LinkBudget &budget,
                             const EnvelopeSearchPolicy &envelope, const AngleSearchPolicy &angles)
    {
        tol.validate();
        BoundarySet b;
        b.rayleigh = rayleigh_distance(cfg);
        b.sspf = sspf_distance(cfg, tol.delta_inf);
        b.spf = spf_distance(cfg, tol.delta_inf);
        const auto epf = epf_distance(cfg, tol.delta_inf, envelope);
        b.epf = epf.radius;
        b.epf_found = epf.found;

        const auto linf = optimal_radius(cfg, Metric::linf, tol, budget, envelope, angles);
        b.opt_linf = linf.radius;
        b.opt_linf_certified = linf.certified;
        b.opt_linf_clamped = linf.clamped;

        const auto l2 = optimal_radius(cfg, Metric::l2, tol, budget, envelope, angles);
        b.opt_l2 = l2.radius;
        b.opt_l2_certified = l2.certified;
        b.opt_l2_clamped = l2.clamped;

        const auto se = optimal_radius(cfg, Metric::se, tol, budget, envelope, angles);
        b.opt_se = se.radius;
        b.opt_se_certified = se.certified;
        b.opt_se_clamped = se.clamped;
        return b;
    }
}
