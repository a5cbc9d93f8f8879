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

#ifndef NEARFIELD_CLI_APP_HPP
#define NEARFIELD_CLI_APP_HPP

#include "nearfield/boundary.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nearfield::cli
{
    inline constexpr int kExitOk = 0;
    inline constexpr int kExitUsage = 2;
    inline constexpr int kExitNumerical = 3;

    // Everything a command may take from a JSON config file or flags. Unset fields fall back to
    // built-in defaults.
    struct Settings
    {
        std::optional<double> freq_ghz;
        std::optional<std::size_t> elements;
        std::optional<double> spacing_m;
        std::optional<double> light_speed;

        std::optional<double> delta_inf;
        std::optional<double> delta_2;
        std::optional<double> delta_se;

        std::optional<double> pilot_snr_db;
        std::optional<double> data_snr_db;
        std::optional<std::size_t> pilot_len;

        std::optional<std::size_t> points_per_decade;
        std::optional<std::size_t> angle_points;

        // Policies only come from the config file; the two optionals above override them
        AngleSearchPolicy angles;
        EnvelopeSearchPolicy envelope;

        // Values set in `over` replace the ones here (policies are kept)
        void merge(const Settings &over);

        ArrayConfig array() const;    // throws ValidationError if frequency / elements are missing
        Tolerances tolerances() const;
        LinkBudget budget() const;
        AngleSearchPolicy angle_policy() const;
        EnvelopeSearchPolicy envelope_policy() const;
    };

    // Parses a config document. Unknown keys and wrong types raise ValidationError.
    Settings parse_config(const std::string &json_text);
    Settings load_config(const std::string &path);

    // Full command line (argv[0] is the program name). Never throws.
    int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
}

#endif
