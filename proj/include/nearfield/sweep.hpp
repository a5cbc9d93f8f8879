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

#ifndef NEARFIELD_SWEEP_HPP
#define NEARFIELD_SWEEP_HPP

#include "nearfield/boundary.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nearfield
{
    struct RangeGrid
    {
        double start = 0.0; // [m]
        double stop = 0.0;  // [m]
        std::size_t points = 0;
    };

    struct SweepSpec
    {
        std::string name;
        std::vector<ArrayConfig> configs;
        // Shared grid. When empty every curve gets a log grid from r_min to 10x the largest
        // analytic radius of its config (for l2 the certified l2 bound is included).
        std::optional<RangeGrid> r_grid;
        std::size_t default_grid_points = 400;
        std::vector<Metric> metrics;
        Tolerances tolerances;
        LinkBudget budget;
        AngleSearchPolicy angles;
        EnvelopeSearchPolicy envelope;

        void validate() const; // throws ValidationError
    };

    // Boundary radii of one config. Radii that failed are NaN and carry a message in errors;
    // certification flags come from the envelope search.
    struct BoundaryReport
    {
        BoundarySet radii;
        std::vector<std::string> errors;
        bool numerical_failure = false; // some error was numerical (horizon, domain, geometry)
    };

    BoundaryReport boundary_report(const ArrayConfig &cfg, const Tolerances &tol, const LinkBudget &budget,
                                   const EnvelopeSearchPolicy &envelope = {}, const AngleSearchPolicy &angles = {});

    struct CurveRecord
    {
        double range = 0.0;
        double value = 0.0; // NaN for gap markers
        double theta_star = 0.0;
        bool gap = false;
        std::string error; // filled for gaps
    };

    struct Curve
    {
        std::size_t config_index = 0;
        std::string config_id;
        Metric metric = Metric::linf;
        std::vector<CurveRecord> records; // strictly increasing range
    };

    struct ConfigResult
    {
        std::string config_id;
        ArrayConfig config;
        BoundaryReport boundaries;
    };

    struct SweepResult
    {
        std::string name;
        std::vector<ConfigResult> configs;
        std::vector<Curve> curves; // ordered by (config index, metric order in spec)
    };

    // Deterministic identifier, e.g. "f300GHz_n64"
    std::string config_id(const ArrayConfig &cfg);

    SweepResult run_sweep(const SweepSpec &spec);

    // "fig2-linf", "fig2-l2", "fig3-se"; throws UnknownPreset
    SweepSpec preset(std::string_view name);
    std::vector<std::string> preset_names();

    // Serialisation. Floating point uses 17 significant digits; gaps / failed radii print as nan.
    inline constexpr int kSchemaVersion = 1;
    std::string format_double(double v);

    void write_curves_csv(std::ostream &os, const std::vector<Curve> &curves, const std::vector<ConfigResult> &configs);
    void write_boundaries_csv(std::ostream &os, const std::vector<ConfigResult> &configs);
    std::string sweep_to_json(const SweepResult &result, int indent = 2);
    std::string boundary_to_json(const std::string &id, const ArrayConfig &cfg, const BoundaryReport &report, int indent = 2);
}

#endif
