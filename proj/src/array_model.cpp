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

#include "nearfield/array_model.hpp"
#include "nearfield/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nearfield
{
    namespace
    {
        bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

        // Squared distance written as (r - x cos)^2 + (x sin)^2, exact zero only when the
        // source sits on the element
        double distance(double r, double x, double c, double s)
        {
            const double along = r - x * c;
            const double across = x * s;
            return std::hypot(along, across);
        }
    }

    ArrayConfig::ArrayConfig(double carrier_freq_hz, std::size_t n_elements, std::optional<double> spacing_m, double light_speed)
        : carrier_freq_(carrier_freq_hz), n_elements_(n_elements), spacing_(0.0), light_speed_(light_speed)
    {
        if (!positive_finite(carrier_freq_hz))
            throw ValidationError("carrier frequency must be positive and finite");
        if (n_elements == 0)
            throw ValidationError("array must have at least one element");
        if (!positive_finite(light_speed))
            throw ValidationError("light speed must be positive and finite");
        spacing_ = spacing_m.value_or(0.5 * wavelength());
        if (!positive_finite(spacing_))
            throw ValidationError("element spacing must be positive and finite");
    }

    PolarPosition::PolarPosition(double theta_rad, double range_m) : theta(theta_rad), range(range_m)
    {
        if (!std::isfinite(theta_rad))
            throw ValidationError("angle must be finite");
        if (!positive_finite(range_m))
            throw ValidationError("range must be positive and finite");
    }

    double element_distance(const ArrayConfig &cfg, const PolarPosition &pos, std::size_t n)
    {
        if (n >= cfg.n_elements())
            throw std::out_of_range("element index " + std::to_string(n) + " out of range");
        if (n == 0)
            return pos.range;
        const double x = double(n) * cfg.spacing();
        const double R = distance(pos.range, x, std::cos(pos.theta), std::abs(std::sin(pos.theta)));
        if (!(R > 0.0))
            throw DegenerateGeometry("source coincides with element " + std::to_string(n));
        return R;
    }

    cvec steering_nf(const ArrayConfig &cfg, const PolarPosition &pos)
    {
        const double k = cfg.wavenumber();
        cvec a(cfg.n_elements());
        for (std::size_t n = 0; n < a.size(); ++n)
            a[n] = std::polar(1.0, -k * element_distance(cfg, pos, n));
        return a;
    }

    cvec steering_ff(const ArrayConfig &cfg, const PolarPosition &pos)
    {
        const double k = cfg.wavenumber();
        const double c = std::cos(pos.theta);
        cvec a(cfg.n_elements());
        for (std::size_t n = 0; n < a.size(); ++n)
            a[n] = std::polar(1.0, -k * (pos.range - double(n) * cfg.spacing() * c));
        return a;
    }

    cvec channel_nf(const ArrayConfig &cfg, const PolarPosition &pos)
    {
        const double scale = cfg.wavelength() / (4.0 * kPi);
        cvec h = steering_nf(cfg, pos);
        for (std::size_t n = 0; n < h.size(); ++n)
            h[n] *= scale / element_distance(cfg, pos, n);
        return h;
    }

    cvec channel_ff(const ArrayConfig &cfg, const PolarPosition &pos)
    {
        const double amp = cfg.wavelength() / (4.0 * kPi * pos.range);
        cvec h = steering_ff(cfg, pos);
        for (auto &v : h)
            v *= amp;
        return h;
    }
}
