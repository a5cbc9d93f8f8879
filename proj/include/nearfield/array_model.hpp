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

#ifndef NEARFIELD_ARRAY_MODEL_HPP
#define NEARFIELD_ARRAY_MODEL_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace nearfield
{
    using cvec = std::vector<std::complex<double>>;

    // Speed of light used by default. The published boundary values assume c = 3e8 m/s;
    // the exact SI value can be passed explicitly.
    inline constexpr double kDefaultLightSpeed = 3.0e8;

    inline constexpr double kPi = 3.14159265358979323846;

    // Uniform linear array of isotropic elements placed at y_n = n * spacing, n = 0 ... N-1
    class ArrayConfig
    {
    public:
        // Throws ValidationError on non-positive / non-finite inputs.
        // spacing defaults to half a wavelength.
        ArrayConfig(double carrier_freq_hz,
                    std::size_t n_elements,
                    std::optional<double> spacing_m = std::nullopt,
                    double light_speed = kDefaultLightSpeed);

        double carrier_freq() const { return carrier_freq_; } // [Hz]
        std::size_t n_elements() const { return n_elements_; }
        double spacing() const { return spacing_; }         // [m]
        double light_speed() const { return light_speed_; } // [m/s]

        double wavelength() const { return light_speed_ / carrier_freq_; }
        double wavenumber() const { return 2.0 * kPi / wavelength(); }
        double aperture() const { return double(n_elements_ - 1) * spacing_; } // D = (N-1) d

        bool operator==(const ArrayConfig &) const = default;

    private:
        double carrier_freq_;
        std::size_t n_elements_;
        double spacing_;
        double light_speed_;
    };

    // Source position relative to element 0. theta is stored as given; all evaluations only
    // depend on cos(theta) and |sin(theta)|, so theta, -theta and 2pi - theta are equivalent.
    struct PolarPosition
    {
        double theta; // [rad]
        double range; // [m], > 0

        PolarPosition(double theta_rad, double range_m);
    };

    // Exact distance R_n between the source and element n (law of cosines).
    // Throws std::out_of_range for n >= N and DegenerateGeometry if R_n == 0.
    double element_distance(const ArrayConfig &cfg, const PolarPosition &pos, std::size_t n);

    // Near-field steering vector, a[n] = exp(-j k R_n)
    cvec steering_nf(const ArrayConfig &cfg, const PolarPosition &pos);

    // Far-field steering vector, a[n] = exp(-j k (r - n d cos(theta)))
    cvec steering_ff(const ArrayConfig &cfg, const PolarPosition &pos);

    // LoS channels with unit element gains:
    // h_NF[n] = lambda / (4 pi R_n) a_NF[n],  h_FF[n] = lambda / (4 pi r) a_FF[n]
    cvec channel_nf(const ArrayConfig &cfg, const PolarPosition &pos);
    cvec channel_ff(const ArrayConfig &cfg, const PolarPosition &pos);
}

#endif
