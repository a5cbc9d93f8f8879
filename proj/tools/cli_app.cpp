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

#include "cli_app.hpp"

#include "nearfield/errors.hpp"
#include "nearfield/link.hpp"
#include "nearfield/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace nearfield::cli
{
    namespace
    {
        using nlohmann::json;

        template <typename T>
        void take(std::optional<T> &dst, const std::optional<T> &src)
        {
            if (src)
                dst = src;
        }

        void reject_unknown(const json &obj, const std::set<std::string> &allowed, const std::string &where)
        {
            if (!obj.is_object())
                throw ValidationError("config: '" + where + "' must be an object");
            for (auto it = obj.begin(); it != obj.end(); ++it)
                if (!allowed.count(it.key()))
                    throw ValidationError("config: unknown key '" + where + "." + it.key() + "'");
        }

        double get_number(const json &obj, const std::string &key, const std::string &where)
        {
            const json &v = obj.at(key);
            if (!v.is_number())
                throw ValidationError("config: '" + where + "." + key + "' must be a number");
            return v.get<double>();
        }

        std::size_t get_count(const json &obj, const std::string &key, const std::string &where)
        {
            const json &v = obj.at(key);
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw ValidationError("config: '" + where + "." + key + "' must be a non-negative integer");
            return v.get<std::size_t>();
        }

        template <typename T, typename Get>
        void read_opt(const json &obj, const std::string &key, const std::string &where, std::optional<T> &dst, Get get)
        {
            if (obj.contains(key))
                dst = get(obj, key, where);
        }

        std::string fmt(double v, const char *spec = "%.10g")
        {
            if (!std::isfinite(v))
                return "n/a";
            char buf[64];
            std::snprintf(buf, sizeof buf, spec, v);
            return buf;
        }

        void print_boundaries(std::ostream &out, const ArrayConfig &cfg, const Tolerances &tol, const BoundaryReport &rep)
        {
            const BoundarySet &b = rep.radii;
            out << "array      f = " << fmt(cfg.carrier_freq() / 1e9) << " GHz, N = " << cfg.n_elements()
                << ", d = " << fmt(cfg.spacing()) << " m, D = " << fmt(cfg.aperture()) << " m\n";
            out << "tolerance  delta_inf = " << fmt(tol.delta_inf) << " 1/m, delta_2 = " << fmt(tol.delta_2)
                << ", delta_se = " << fmt(tol.delta_se) << " bit/s/Hz\n";
            auto line = [&](const char *name, double v, const std::string &note)
            {
                out << name << " = " << fmt(v) << " m";
                if (!note.empty())
                    out << "  (" << note << ")";
                out << '\n';
            };
            auto cert = [](bool certified, bool clamped)
            {
                std::string s = certified ? "certified" : "not certified";
                if (clamped)
                    s += ", no violation above r_min";
                return s;
            };
            line("rayleigh", b.rayleigh, "");
            line("epf     ", b.epf, b.epf_found || !std::isfinite(b.epf) ? "" : "no violation above r_min");
            line("spf     ", b.spf, "");
            line("sspf    ", b.sspf, "");
            line("opt_linf", b.opt_linf, cert(b.opt_linf_certified, b.opt_linf_clamped));
            line("opt_l2  ", b.opt_l2, cert(b.opt_l2_certified, b.opt_l2_clamped));
            line("opt_se  ", b.opt_se, cert(b.opt_se_certified, b.opt_se_clamped) + ", heuristic horizon");
        }

        // Shared flags of the single-config commands
        struct CommonFlags
        {
            Settings flags;
            std::string config_path;
            bool json = false;

            void attach(CLI::App &sub)
            {
                sub.add_option("--freq-ghz", flags.freq_ghz, "Carrier frequency [GHz]");
                sub.add_option("--elements", flags.elements, "Number of array elements");
                sub.add_option("--spacing-m", flags.spacing_m, "Element spacing [m] (default half wavelength)");
                sub.add_option("--light-speed", flags.light_speed, "Propagation speed [m/s] (default 3e8)");
                sub.add_option("--delta-inf", flags.delta_inf, "Element-wise tolerance [1/m] (default 1e-3)");
                sub.add_option("--delta-2", flags.delta_2, "Normalised l2 tolerance (default 1e-3)");
                sub.add_option("--delta-se", flags.delta_se, "SE-loss tolerance [bit/s/Hz] (default 0.5)");
                sub.add_option("--pilot-snr-db", flags.pilot_snr_db, "Pilot SNR [dB] (default 100)");
                sub.add_option("--data-snr-db", flags.data_snr_db, "Data SNR [dB] (default 100)");
                sub.add_option("--pilot-len", flags.pilot_len, "Pilot length L (default 64)");
                sub.add_option("--points-per-decade", flags.points_per_decade, "Envelope scan density (default 2000)");
                sub.add_option("--angle-points", flags.angle_points, "Coarse angle grid size (default 721)");
                sub.add_option("--config", config_path, "JSON config file (flags take precedence)");
                sub.add_flag("--json", json, "Print JSON instead of text");
            }

            Settings resolve() const
            {
                Settings s = config_path.empty() ? Settings{} : load_config(config_path);
                s.merge(flags);
                return s;
            }
        };

        int cmd_boundaries(const CommonFlags &common, std::ostream &out, std::ostream &err)
        {
            const Settings s = common.resolve();
            const ArrayConfig cfg = s.array();
            const Tolerances tol = s.tolerances();
            const BoundaryReport rep = boundary_report(cfg, tol, s.budget(), s.envelope_policy(), s.angle_policy());
            if (common.json)
                out << boundary_to_json(config_id(cfg), cfg, rep) << '\n';
            else
                print_boundaries(out, cfg, tol, rep);
            for (const auto &e : rep.errors)
                err << "error: " << e << '\n';
            return rep.numerical_failure ? kExitNumerical : kExitOk;
        }

        struct CurveFlags
        {
            std::string metric;
            std::optional<double> r_start, r_stop;
            std::optional<std::size_t> r_points;
            std::string out_path;
        };

        int cmd_curve(const CommonFlags &common, const CurveFlags &cf, std::ostream &out, std::ostream &err)
        {
            const Settings s = common.resolve();
            SweepSpec spec;
            spec.name = "curve";
            spec.configs = {s.array()};
            spec.metrics = {parse_metric(cf.metric)};
            spec.tolerances = s.tolerances();
            spec.budget = s.budget();
            spec.angles = s.angle_policy();
            spec.envelope = s.envelope_policy();
            if (cf.r_start || cf.r_stop)
            {
                if (!cf.r_start || !cf.r_stop)
                    throw ValidationError("--r-start and --r-stop must be given together");
                spec.r_grid = RangeGrid{*cf.r_start, *cf.r_stop, cf.r_points.value_or(spec.default_grid_points)};
            }
            else if (cf.r_points)
                spec.default_grid_points = *cf.r_points;

            const SweepResult res = run_sweep(spec);
            std::ostringstream body;
            if (common.json)
                body << sweep_to_json(res) << '\n';
            else
                write_curves_csv(body, res.curves, res.configs);

            if (cf.out_path.empty())
                out << body.str();
            else
            {
                std::ofstream f(cf.out_path, std::ios::binary);
                if (!f)
                    throw ValidationError("cannot open output file '" + cf.out_path + "'");
                f << body.str();
            }

            std::size_t gaps = 0;
            for (const auto &c : res.curves)
                for (const auto &r : c.records)
                    gaps += r.gap ? 1 : 0;
            if (gaps > 0)
                err << "warning: " << gaps << " curve point(s) could not be evaluated (written as nan)\n";
            for (const auto &e : res.configs.front().boundaries.errors)
                err << "warning: " << e << '\n';
            return kExitOk;
        }

        struct SeFlags
        {
            double range = 0.0;
            std::optional<double> theta_deg;
        };

        int cmd_se(const CommonFlags &common, const SeFlags &sf, std::ostream &out, std::ostream &err)
        {
            const Settings s = common.resolve();
            const ArrayConfig cfg = s.array();
            const LinkBudget budget = s.budget();
            const Tolerances tol = s.tolerances();

            double theta = 0.0;
            if (sf.theta_deg)
                theta = *sf.theta_deg * kPi / 180.0;
            else
                theta = se_loss_worst(cfg, sf.range, budget, s.angle_policy()).theta_star;
            const PolarPosition pos(theta, sf.range);
            const SEReport rep = se_loss(cfg, pos, budget);
            const double nmse = nmse_lower_bound(cfg, pos, budget);

            int code = kExitOk;
            double opt_se = std::nan("");
            std::string opt_err;
            try
            {
                opt_se = optimal_radius(cfg, Metric::se, tol, budget, s.envelope_policy(), s.angle_policy()).radius;
            }
            catch (const ValidationError &)
            {
                throw;
            }
            catch (const Error &e)
            {
                opt_err = e.what();
                code = kExitNumerical;
            }

            if (common.json)
            {
                json j;
                j["schema"] = kSchemaVersion;
                j["config_id"] = config_id(cfg);
                j["freq_hz"] = cfg.carrier_freq();
                j["n_elements"] = cfg.n_elements();
                j["range_m"] = sf.range;
                j["theta_rad"] = theta;
                j["se_opt"] = rep.se_opt;
                j["se_mis"] = rep.se_mis;
                j["delta_se"] = rep.delta_se;
                j["eta"] = rep.eta;
                j["gain"] = rep.gain;
                j["nmse_lower_bound"] = nmse;
                j["opt_se_m"] = std::isfinite(opt_se) ? json(opt_se) : json(nullptr);
                j["opt_se_certified"] = false;
                out << j.dump(2) << '\n';
            }
            else
            {
                out << "position   r = " << fmt(sf.range) << " m, theta = " << fmt(theta) << " rad"
                    << (sf.theta_deg ? "" : " (worst case)") << '\n';
                out << "se_opt     = " << fmt(rep.se_opt) << " bit/s/Hz\n";
                out << "se_mis     = " << fmt(rep.se_mis) << " bit/s/Hz\n";
                out << "delta_se   = " << fmt(rep.delta_se) << " bit/s/Hz\n";
                out << "eta        = " << fmt(rep.eta) << '\n';
                out << "gain       = " << fmt(rep.gain) << '\n';
                out << "nmse_lb    = " << fmt(nmse) << '\n';
                out << "opt_se     = " << fmt(opt_se) << " m  (not certified, heuristic horizon)\n";
            }
            if (!opt_err.empty())
                err << "error: opt_se: " << opt_err << '\n';
            return code;
        }

        // Published values the reproduction summary is compared against
        struct Reference
        {
            double ghz;
            std::size_t n;
            const char *what;
            double value;
        };
        constexpr Reference kReferences[] = {
            {300.0, 64, "rayleigh", 1.9845},
            {300.0, 64, "opt_linf", 56.0013},
            {300.0, 64, "opt_l2", 1422.18},
        };

        int cmd_reproduce(const std::string &name, const std::string &out_dir, std::ostream &out, std::ostream &err)
        {
            const SweepSpec spec = preset(name);
            const SweepResult res = run_sweep(spec);

            std::error_code ec;
            std::filesystem::create_directories(out_dir, ec);
            if (ec)
                throw ValidationError("cannot create output directory '" + out_dir + "': " + ec.message());
            const std::filesystem::path dir(out_dir);

            auto write = [&](const std::filesystem::path &p, const std::string &text)
            {
                std::ofstream f(p, std::ios::binary);
                if (!f)
                    throw ValidationError("cannot write '" + p.string() + "'");
                f << text;
            };

            for (const auto &c : res.curves)
            {
                std::ostringstream os;
                write_curves_csv(os, {c}, res.configs);
                write(dir / ("curve_" + c.config_id + "_" + std::string(metric_name(c.metric)) + ".csv"), os.str());
            }
            {
                std::ostringstream os;
                write_boundaries_csv(os, res.configs);
                write(dir / "boundaries.csv", os.str());
            }

            out << "preset " << name << ": " << res.curves.size() << " curve(s), " << res.configs.size()
                << " config(s) written to " << out_dir << '\n';
            bool failed = false;
            for (const auto &c : res.configs)
            {
                const BoundarySet &b = c.boundaries.radii;
                const double ghz = c.config.carrier_freq() / 1e9;
                const std::size_t n = c.config.n_elements();
                auto summary = [&](const char *what, double v, const std::string &note)
                {
                    out << what << '(' << fmt(ghz, "%g") << "GHz," << n << ") = " << fmt(v, "%.2f") << " m";
                    for (const auto &r : kReferences)
                        if (r.ghz == ghz && r.n == n && std::string(r.what) == what)
                            out << " (reference: " << fmt(r.value, "%g") << ")";
                    if (!note.empty())
                        out << " [" << note << "]";
                    out << '\n';
                };
                for (const Metric m : spec.metrics)
                {
                    if (m == Metric::linf)
                        summary("opt_linf", b.opt_linf, b.opt_linf_certified ? "certified" : "not certified");
                    else if (m == Metric::l2)
                        summary("opt_l2", b.opt_l2, b.opt_l2_certified ? "certified" : "not certified");
                    else
                        summary("opt_se", b.opt_se, "not certified, qualitative");
                }
                if (ghz == 300.0 && n == 64)
                    summary("rayleigh", b.rayleigh, "");
                for (const auto &e : c.boundaries.errors)
                    err << "error: " << c.config_id << ": " << e << '\n';
                failed = failed || c.boundaries.numerical_failure;
            }
            return failed ? kExitNumerical : kExitOk;
        }
    }

    // ------------------------------------------------------------------------

    void Settings::merge(const Settings &over)
    {
        take(freq_ghz, over.freq_ghz);
        take(elements, over.elements);
        take(spacing_m, over.spacing_m);
        take(light_speed, over.light_speed);
        take(delta_inf, over.delta_inf);
        take(delta_2, over.delta_2);
        take(delta_se, over.delta_se);
        take(pilot_snr_db, over.pilot_snr_db);
        take(data_snr_db, over.data_snr_db);
        take(pilot_len, over.pilot_len);
        take(points_per_decade, over.points_per_decade);
        take(angle_points, over.angle_points);
    }

    ArrayConfig Settings::array() const
    {
        if (!freq_ghz)
            throw ValidationError("missing carrier frequency (--freq-ghz)");
        if (!elements)
            throw ValidationError("missing element count (--elements)");
        return ArrayConfig(*freq_ghz * 1e9, *elements, spacing_m, light_speed.value_or(kDefaultLightSpeed));
    }

    Tolerances Settings::tolerances() const
    {
        Tolerances t;
        t.delta_inf = delta_inf.value_or(t.delta_inf);
        t.delta_2 = delta_2.value_or(t.delta_2);
        t.delta_se = delta_se.value_or(t.delta_se);
        t.validate();
        return t;
    }

    LinkBudget Settings::budget() const
    {
        LinkBudget b;
        if (pilot_snr_db)
            b.pilot_snr = db_to_linear(*pilot_snr_db);
        if (data_snr_db)
            b.data_snr = db_to_linear(*data_snr_db);
        if (pilot_len)
            b.pilot_len = *pilot_len;
        b.validate();
        return b;
    }

    AngleSearchPolicy Settings::angle_policy() const
    {
        AngleSearchPolicy p = angles;
        if (angle_points)
            p.coarse_grid_points = *angle_points;
        p.validate();
        return p;
    }

    EnvelopeSearchPolicy Settings::envelope_policy() const
    {
        EnvelopeSearchPolicy p = envelope;
        if (points_per_decade)
            p.points_per_decade = *points_per_decade;
        p.validate();
        return p;
    }

    Settings parse_config(const std::string &json_text)
    {
        json doc;
        try
        {
            doc = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            throw ValidationError(std::string("config: invalid JSON: ") + e.what());
        }

        Settings s;
        try
        {
            reject_unknown(doc, {"array", "tolerances", "budget", "angle_policy", "envelope_policy"}, "root");
            if (doc.contains("array"))
            {
                const json &a = doc["array"];
                reject_unknown(a, {"freq_ghz", "elements", "spacing_m", "light_speed"}, "array");
                read_opt(a, "freq_ghz", "array", s.freq_ghz, get_number);
                read_opt(a, "elements", "array", s.elements, get_count);
                read_opt(a, "spacing_m", "array", s.spacing_m, get_number);
                read_opt(a, "light_speed", "array", s.light_speed, get_number);
            }
            if (doc.contains("tolerances"))
            {
                const json &t = doc["tolerances"];
                reject_unknown(t, {"delta_inf", "delta_2", "delta_se"}, "tolerances");
                read_opt(t, "delta_inf", "tolerances", s.delta_inf, get_number);
                read_opt(t, "delta_2", "tolerances", s.delta_2, get_number);
                read_opt(t, "delta_se", "tolerances", s.delta_se, get_number);
            }
            if (doc.contains("budget"))
            {
                const json &b = doc["budget"];
                reject_unknown(b, {"pilot_snr_db", "data_snr_db", "pilot_len"}, "budget");
                read_opt(b, "pilot_snr_db", "budget", s.pilot_snr_db, get_number);
                read_opt(b, "data_snr_db", "budget", s.data_snr_db, get_number);
                read_opt(b, "pilot_len", "budget", s.pilot_len, get_count);
            }
            if (doc.contains("angle_policy"))
            {
                const json &p = doc["angle_policy"];
                reject_unknown(p, {"coarse_grid_points", "refine_tolerance", "refine_max_iter"}, "angle_policy");
                if (p.contains("coarse_grid_points"))
                    s.angles.coarse_grid_points = get_count(p, "coarse_grid_points", "angle_policy");
                if (p.contains("refine_tolerance"))
                    s.angles.refine_tolerance = get_number(p, "refine_tolerance", "angle_policy");
                if (p.contains("refine_max_iter"))
                    s.angles.refine_max_iter = get_count(p, "refine_max_iter", "angle_policy");
            }
            if (doc.contains("envelope_policy"))
            {
                const json &p = doc["envelope_policy"];
                reject_unknown(p, {"r_min", "points_per_decade", "bisection_tol", "certification_margin", "max_scan_factor"},
                               "envelope_policy");
                if (p.contains("r_min"))
                    s.envelope.r_min = get_number(p, "r_min", "envelope_policy");
                if (p.contains("points_per_decade"))
                    s.envelope.points_per_decade = get_count(p, "points_per_decade", "envelope_policy");
                if (p.contains("bisection_tol"))
                    s.envelope.bisection_tol = get_number(p, "bisection_tol", "envelope_policy");
                if (p.contains("certification_margin"))
                    s.envelope.certification_margin = get_number(p, "certification_margin", "envelope_policy");
                if (p.contains("max_scan_factor"))
                    s.envelope.max_scan_factor = get_number(p, "max_scan_factor", "envelope_policy");
            }
        }
        catch (const json::exception &e)
        {
            throw ValidationError(std::string("config: ") + e.what());
        }

        // Validate what the file provides right away
        if (s.freq_ghz && !(*s.freq_ghz > 0.0))
            throw ValidationError("config: array.freq_ghz must be positive");
        if (s.elements && *s.elements == 0)
            throw ValidationError("config: array.elements must be at least 1");
        if (s.spacing_m && !(*s.spacing_m > 0.0))
            throw ValidationError("config: array.spacing_m must be positive");
        if (s.light_speed && !(*s.light_speed > 0.0))
            throw ValidationError("config: array.light_speed must be positive");
        Settings probe = s;
        probe.tolerances();
        probe.budget();
        s.angles.validate();
        s.envelope.validate();
        return s;
    }

    Settings load_config(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw ValidationError("cannot read config file '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_config(ss.str());
    }

    int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"Near-field / far-field transition distances for uniform linear arrays"};
        app.require_subcommand(1);

        CommonFlags b_flags, c_flags, s_flags;
        auto *boundaries = app.add_subcommand("boundaries", "Print all transition radii for one array");
        b_flags.attach(*boundaries);

        CurveFlags cf;
        auto *curve = app.add_subcommand("curve", "Worst-case metric versus range as CSV");
        c_flags.attach(*curve);
        curve->add_option("--metric", cf.metric, "linf | l2 | se")->required();
        curve->add_option("--r-start", cf.r_start, "First range [m]");
        curve->add_option("--r-stop", cf.r_stop, "Last range [m]");
        curve->add_option("--r-points", cf.r_points, "Number of log-spaced ranges");
        curve->add_option("--out", cf.out_path, "Output file (default standard output)");

        SeFlags sf;
        auto *se = app.add_subcommand("se", "Spectral-efficiency analysis at one range");
        s_flags.attach(*se);
        se->add_option("--range", sf.range, "Range [m]")->required();
        se->add_option("--theta-deg", sf.theta_deg, "Look angle [deg] (default worst case)");

        std::string preset_name, out_dir = ".";
        auto *reproduce = app.add_subcommand("reproduce", "Regenerate a figure preset as a CSV bundle");
        reproduce->add_option("preset", preset_name, "fig2-linf | fig2-l2 | fig3-se")->required();
        reproduce->add_option("--out-dir", out_dir, "Output directory");

        try
        {
            std::vector<std::string> rev(args.rbegin(), args.rend());
            if (!rev.empty())
                rev.pop_back(); // program name
            app.parse(rev);
        }
        catch (const CLI::ParseError &e)
        {
            const int code = app.exit(e, out, err);
            return code == 0 ? kExitOk : kExitUsage;
        }

        try
        {
            if (*boundaries)
                return cmd_boundaries(b_flags, out, err);
            if (*curve)
                return cmd_curve(c_flags, cf, out, err);
            if (*se)
                return cmd_se(s_flags, sf, out, err);
            if (*reproduce)
                return cmd_reproduce(preset_name, out_dir, out, err);
        }
        catch (const ValidationError &e)
        {
            err << "error: " << e.what() << '\n';
            return kExitUsage;
        }
        catch (const UnknownPreset &e)
        {
            err << "error: " << e.what() << '\n';
            return kExitUsage;
        }
        catch (const Error &e)
        {
            err << "error: " << e.what() << '\n';
            return kExitNumerical;
        }
        catch (const std::exception &e)
        {
            err << "error: " << e.what() << '\n';
            return kExitNumerical;
        }
        return kExitUsage;
    }
}
