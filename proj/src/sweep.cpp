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

#include "nearfield/sweep.hpp"
#include "nearfield/errors.hpp"
#include "nearfield/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

namespace nearfield
{
    namespace
    {
        constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

        nlohmann::json number(double v)
        {
            if (!std::isfinite(v))
                return nullptr;
            return v;
        }

        // Runs fn, storing NaN and an error message on failure
        template <typename Fn>
        void capture(BoundaryReport &rep, const char *what, Fn &&fn)
        {
            try
            {
                fn();
            }
            catch (const ValidationError &)
            {
                throw;
            }
            catch (const Error &e)
            {
                rep.errors.push_back(std::string(what) + ": " + e.what());
                rep.numerical_failure = true;
            }
        }

        double curve_upper(const ArrayConfig &cfg, Metric metric, const Tolerances &tol)
        {
            double r = std::max({rayleigh_distance(cfg), sspf_distance(cfg, tol.delta_inf), spf_distance(cfg, tol.delta_inf)});
            if (metric == Metric::l2)
                r = std::max(r, l2_certified_bound(cfg, tol.delta_2));
            return 10.0 * r;
        }
    }

    void SweepSpec::validate() const
    {
        if (configs.empty())
            throw ValidationError("sweep needs at least one array configuration");
        if (r_grid)
        {
            if (!(r_grid->start > 0.0) || !std::isfinite(r_grid->stop) || r_grid->points == 0)
                throw ValidationError("range grid needs start > 0 and at least one point");
            if (r_grid->points >= 2 && !(r_grid->start < r_grid->stop))
                throw ValidationError("range grid needs start < stop");
        }
        if (default_grid_points == 0)
            throw ValidationError("default grid needs at least one point");
        tolerances.validate();
        budget.validate();
        angles.validate();
        envelope.validate();
    }

    BoundaryReport boundary_report(const ArrayConfig &cfg, const Tolerances &tol, const LinkBudget &budget,
                                   const EnvelopeSearchPolicy &envelope, const AngleSearchPolicy &angles)
    {
        tol.validate();
        budget.validate();
        envelope.validate();
        angles.validate();

        BoundaryReport rep;
        BoundarySet &b = rep.radii;
        b.rayleigh = rayleigh_distance(cfg);
        b.sspf = sspf_distance(cfg, tol.delta_inf);
        b.spf = b.epf = b.opt_linf = b.opt_l2 = b.opt_se = kNaN;

        capture(rep, "spf", [&]
                { b.spf = spf_distance(cfg, tol.delta_inf); });
        capture(rep, "epf", [&]
                {
                    const auto e = epf_distance(cfg, tol.delta_inf, envelope);
                    b.epf = e.radius;
                    b.epf_found = e.found; });
        capture(rep, "opt_linf", [&]
                {
                    const auto r = optimal_radius(cfg, Metric::linf, tol, budget, envelope, angles);
                    b.opt_linf = r.radius;
                    b.opt_linf_certified = r.certified;
                    b.opt_linf_clamped = r.clamped; });
        capture(rep, "opt_l2", [&]
                {
                    const auto r = optimal_radius(cfg, Metric::l2, tol, budget, envelope, angles);
                    b.opt_l2 = r.radius;
                    b.opt_l2_certified = r.certified;
                    b.opt_l2_clamped = r.clamped; });
        capture(rep, "opt_se", [&]
                {
                    const auto r = optimal_radius(cfg, Metric::se, tol, budget, envelope, angles);
                    b.opt_se = r.radius;
                    b.opt_se_certified = r.certified;
                    b.opt_se_clamped = r.clamped; });
        return rep;
    }

    std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    std::string config_id(const ArrayConfig &cfg)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "f%gGHz_n%zu", cfg.carrier_freq() / 1e9, cfg.n_elements());
        return buf;
    }

    SweepResult run_sweep(const SweepSpec &spec)
    {
        spec.validate();

        SweepResult out;
        out.name = spec.name;
        std::map<std::string, int> seen;
        for (const auto &cfg : spec.configs)
        {
            std::string id = config_id(cfg);
            if (const int n = ++seen[id]; n > 1)
                id += "_" + std::to_string(n);
            out.configs.push_back({id, cfg, {}});
        }

        // Boundary sets: one config at a time, each envelope scan is parallel internally
        for (auto &c : out.configs)
            c.boundaries = boundary_report(c.config, spec.tolerances, spec.budget, spec.envelope, spec.angles);

        // Curves: flatten (config, metric, range) into one task list
        struct Task
        {
            std::size_t curve;
            std::size_t record;
        };
        std::vector<Task> tasks;
        for (std::size_t ci = 0; ci < out.configs.size(); ++ci)
        {
            const ArrayConfig &cfg = out.configs[ci].config;
            for (const Metric m : spec.metrics)
            {
                std::vector<double> ranges;
                if (spec.r_grid)
                    ranges = log_grid(spec.r_grid->start, spec.r_grid->stop, spec.r_grid->points);
                else
                {
                    const double lo = spec.envelope.resolve_r_min(cfg);
                    const double hi = std::max(curve_upper(cfg, m, spec.tolerances), 10.0 * lo);
                    ranges = log_grid(lo, hi, spec.default_grid_points);
                }

                Curve curve{ci, out.configs[ci].config_id, m, {}};
                curve.records.resize(ranges.size());
                for (std::size_t i = 0; i < ranges.size(); ++i)
                {
                    curve.records[i].range = ranges[i];
                    tasks.push_back({out.curves.size(), i});
                }
                out.curves.push_back(std::move(curve));
            }
        }

        parallel_for(tasks.size(), [&](std::size_t t)
                     {
                         Curve &curve = out.curves[tasks[t].curve];
                         CurveRecord &rec = curve.records[tasks[t].record];
                         const ArrayConfig &cfg = out.configs[curve.config_index].config;
                         try
                         {
                             const MetricSample s = worst_case(cfg, curve.metric, rec.range, spec.budget, spec.angles);
                             rec.value = s.value;
                             rec.theta_star = s.theta_star;
                         }
                         catch (const Error &e)
                         {
                             rec.value = kNaN;
                             rec.theta_star = kNaN;
                             rec.gap = true;
                             rec.error = e.what();
                         } });
        return out;
    }

    std::vector<std::string> preset_names() { return {"fig2-linf", "fig2-l2", "fig3-se"}; }

    SweepSpec preset(std::string_view name)
    {
        SweepSpec spec;
        spec.name = std::string(name);
        spec.tolerances = Tolerances{1e-3, 1e-3, 0.5};
        spec.budget = LinkBudget{1e10, 1e10, 64};

        std::vector<std::size_t> sizes;
        if (name == "fig2-linf")
        {
            spec.metrics = {Metric::linf};
            sizes = {2, 5, 64};
        }
        else if (name == "fig2-l2")
        {
            spec.metrics = {Metric::l2};
            sizes = {2, 5, 64};
        }
        else if (name == "fig3-se")
        {
            spec.metrics = {Metric::se};
            sizes = {2, 5, 10};
        }
        else
            throw UnknownPreset("unknown preset '" + std::string(name) + "' (expected fig2-linf, fig2-l2 or fig3-se)");

        for (const double ghz : {1.0, 10.0, 300.0})
            for (const std::size_t n : sizes)
                spec.configs.emplace_back(ghz * 1e9, n);
        return spec;
    }

    // ------------------------------------------------------------------------
    // Serialisation

    void write_curves_csv(std::ostream &os, const std::vector<Curve> &curves, const std::vector<ConfigResult> &configs)
    {
        os << "config_id,freq_hz,n_elements,metric,range_m,value,theta_star_rad\n";
        for (const auto &c : curves)
        {
            const ArrayConfig &cfg = configs.at(c.config_index).config;
            for (const auto &r : c.records)
                os << c.config_id << ',' << format_double(cfg.carrier_freq()) << ',' << cfg.n_elements() << ','
                   << metric_name(c.metric) << ',' << format_double(r.range) << ',' << format_double(r.value) << ','
                   << format_double(r.theta_star) << '\n';
        }
    }

    void write_boundaries_csv(std::ostream &os, const std::vector<ConfigResult> &configs)
    {
        os << "config_id,freq_hz,n_elements,rayleigh_m,epf_m,spf_m,sspf_m,opt_linf_m,opt_l2_m,opt_se_m,opt_se_certified\n";
        for (const auto &c : configs)
        {
            const BoundarySet &b = c.boundaries.radii;
            os << c.config_id << ',' << format_double(c.config.carrier_freq()) << ',' << c.config.n_elements() << ','
               << format_double(b.rayleigh) << ',' << format_double(b.epf) << ',' << format_double(b.spf) << ','
               << format_double(b.sspf) << ',' << format_double(b.opt_linf) << ',' << format_double(b.opt_l2) << ','
               << format_double(b.opt_se) << ',' << (b.opt_se_certified ? "true" : "false") << '\n';
        }
    }

    namespace
    {
        nlohmann::json config_json(const std::string &id, const ArrayConfig &cfg, const BoundaryReport &rep)
        {
            const BoundarySet &b = rep.radii;
            nlohmann::json j;
            j["config_id"] = id;
            j["freq_hz"] = cfg.carrier_freq();
            j["n_elements"] = cfg.n_elements();
            j["spacing_m"] = cfg.spacing();
            j["light_speed"] = cfg.light_speed();
            j["rayleigh_m"] = number(b.rayleigh);
            j["epf_m"] = number(b.epf);
            j["spf_m"] = number(b.spf);
            j["sspf_m"] = number(b.sspf);
            j["opt_linf_m"] = number(b.opt_linf);
            j["opt_l2_m"] = number(b.opt_l2);
            j["opt_se_m"] = number(b.opt_se);
            j["epf_found"] = b.epf_found;
            j["opt_linf_certified"] = b.opt_linf_certified;
            j["opt_l2_certified"] = b.opt_l2_certified;
            j["opt_se_certified"] = b.opt_se_certified;
            j["errors"] = rep.errors;
            return j;
        }
    }

    std::string boundary_to_json(const std::string &id, const ArrayConfig &cfg, const BoundaryReport &report, int indent)
    {
        nlohmann::json j = config_json(id, cfg, report);
        j["schema"] = kSchemaVersion;
        return j.dump(indent);
    }

    std::string sweep_to_json(const SweepResult &result, int indent)
    {
        nlohmann::json j;
        j["schema"] = kSchemaVersion;
        j["name"] = result.name;
        j["configs"] = nlohmann::json::array();
        for (const auto &c : result.configs)
            j["configs"].push_back(config_json(c.config_id, c.config, c.boundaries));
        j["curves"] = nlohmann::json::array();
        for (const auto &c : result.curves)
        {
            const ArrayConfig &cfg = result.configs.at(c.config_index).config;
            nlohmann::json cj;
            cj["config_id"] = c.config_id;
            cj["freq_hz"] = cfg.carrier_freq();
            cj["n_elements"] = cfg.n_elements();
            cj["metric"] = std::string(metric_name(c.metric));
            cj["records"] = nlohmann::json::array();
            for (const auto &r : c.records)
                cj["records"].push_back({{"range_m", r.range}, {"value", number(r.value)}, {"theta_star_rad", number(r.theta_star)}});
            j["curves"].push_back(std::move(cj));
        }
        return j.dump(indent);
    }
}
