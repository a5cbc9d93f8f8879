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


#include "nearfield/errors.hpp"
#include "nearfield/mismatch.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace nearfield;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    struct Case
    {
        double f;
        std::size_t n;
    };
    const Case kGrid[] = {{1e9, 2}, {1e9, 5}, {1e9, 64}, {10e9, 2}, {10e9, 5}, {10e9, 64}, {300e9, 2}, {300e9, 5}, {300e9, 64}};
}

TEST_CASE("pointwise metrics match the complex-vector oracle", "[mismatch]")
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (const Case &c : kGrid)
    {
        const ArrayConfig cfg(c.f, c.n);
        const auto a = oracle::half_wave(c.f, c.n);
        for (int i = 0; i < 40; ++i)
        {
            const double theta = kPi * u01(gen);
            const double r = std::max(cfg.aperture(), 10.0 * cfg.spacing()) * std::pow(10.0, 3.0 * u01(gen));
            const PolarPosition pos(theta, r);
            CHECK_THAT(e_linf_at(cfg, pos), WithinRel(double(oracle::e_linf(a, theta, r)), 1e-7));
            CHECK_THAT(e_l2_at(cfg, pos), WithinRel(double(oracle::e_l2(a, theta, r)), 1e-7));
            CHECK_THAT(array_gain_efficiency(cfg, pos), WithinAbs(double(oracle::eta(a, theta, r)), 1e-12));
        }
    }
}

TEST_CASE("single element arrays have no mismatch", "[mismatch]")
{
    const ArrayConfig one(10e9, 1);
    CHECK(e_linf_at(one, {0.3, 2.0}) == 0.0);
    CHECK(e_l2_at(one, {0.3, 2.0}) == 0.0);
    CHECK(array_gain_efficiency(one, {0.3, 2.0}) == 1.0);
    const auto w = e_linf_worst(one, 2.0);
    CHECK(w.value == 0.0);
    CHECK(w.theta_star == 0.0);
    CHECK(e_l2_worst(one, 2.0).value == 0.0);
}

TEST_CASE("metrics vanish in the far field", "[mismatch][property]")
{
    for (const Case &c : kGrid)
    {
        const ArrayConfig cfg(c.f, c.n);
        for (double theta : {0.05, 0.9, kPi / 2.0, 2.2, 3.1})
        {
            const PolarPosition pos(theta, 1e6 * cfg.aperture());
            CHECK(e_linf_at(cfg, pos) < 1e-3);
            CHECK(e_l2_at(cfg, pos) < 1e-3);
            CHECK(array_gain_efficiency(cfg, pos) > 1.0 - 1e-6);
        }
    }
}

TEST_CASE("worst case dominates random angles and obeys the norm bridge", "[mismatch][property]")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (const Case &c : kGrid)
    {
        const ArrayConfig cfg(c.f, c.n);
        const double r_min = std::max(cfg.aperture(), 10.0 * cfg.spacing());
        for (double scale : {1.0, 7.0, 60.0})
        {
            const double r = r_min * scale;
            const MetricSample wi = e_linf_worst(cfg, r);
            const MetricSample w2 = e_l2_worst(cfg, r);
            CHECK(wi.theta_star >= 0.0);
            CHECK(wi.theta_star <= kPi);
            CHECK(w2.value <= (r + cfg.aperture()) * wi.value * (1.0 + 1e-12));
            for (int i = 0; i < 1000; ++i)
            {
                const double theta = kPi * u01(gen);
                const PolarPosition pos(theta, r);
                const double li = e_linf_at(cfg, pos);
                const double l2 = e_l2_at(cfg, pos);
                CHECK(li >= 0.0);
                CHECK(l2 >= 0.0);
                const double eta = array_gain_efficiency(cfg, pos);
                CHECK(eta >= 0.0);
                CHECK(eta <= 1.0);
                CHECK(li <= wi.value * (1.0 + 1e-12));
                CHECK(l2 <= w2.value * (1.0 + 1e-12));
                CHECK(l2 <= (r + cfg.aperture()) * li * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("worst-case search agrees with a dense angle oracle", "[mismatch][oracle]")
{
    const ArrayConfig cfg(300e9, 64);
    const auto a = oracle::half_wave(300e9, 64);
    for (double r : {56.0, 1.9845, 0.5})
    {
        const double ref_inf = double(oracle::dense_max([&](oracle::ld t) { return oracle::e_linf(a, t, r); }, 100000));
        const double ref_l2 = double(oracle::dense_max([&](oracle::ld t) { return oracle::e_l2(a, t, r); }, 100000));
        const MetricSample wi = e_linf_worst(cfg, r);
        const MetricSample w2 = e_l2_worst(cfg, r);
        INFO("r = " << r);
        CHECK_THAT(wi.value, WithinRel(ref_inf, 1e-6));
        CHECK_THAT(w2.value, WithinRel(ref_l2, 1e-6));
        CHECK(wi.value >= ref_inf * (1.0 - 1e-12));
    }
}

TEST_CASE("worst case is invariant under the full circle of angles", "[mismatch]")
{
    const ArrayConfig cfg(10e9, 5);
    const double r = 0.4;
    const MetricSample w = e_linf_worst(cfg, r);
    double full = 0.0;
    for (int i = 1; i < 20000; ++i)
        full = std::max(full, e_linf_at(cfg, {2.0 * kPi * i / 20000.0, r}));
    CHECK(full <= w.value * (1.0 + 1e-12));
    CHECK_THAT(full, WithinRel(w.value, 1e-6));
}

TEST_CASE("angle maximisation breaks ties toward the smallest angle", "[mismatch]")
{
    AngleSearchPolicy policy;
    const MetricSample flat = maximize_over_angle([](double) { return 1.0; }, 3.0, policy);
    CHECK(flat.value == 1.0);
    CHECK(flat.theta_star == kAngleInset);
    CHECK(flat.range == 3.0);

    // Two equal peaks at pi/4 and 3pi/4
    const MetricSample two = maximize_over_angle([](double t) { return std::pow(std::sin(2.0 * t), 2.0); }, 1.0, policy);
    CHECK_THAT(two.theta_star, WithinAbs(kPi / 4.0, 1e-5));

    const MetricSample mid = maximize_over_angle([](double t) { return -std::abs(t - 1.0); }, 1.0, policy);
    CHECK_THAT(mid.theta_star, WithinAbs(1.0, 1e-6));

    AngleSearchPolicy bad;
    bad.coarse_grid_points = 2;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = {};
    bad.refine_tolerance = 0.0;
    CHECK_THROWS_AS(e_l2_worst(ArrayConfig(1e9, 4), 3.0, bad), ValidationError);
}

TEST_CASE("degenerate geometry surfaces as an error", "[mismatch]")
{
    const ArrayConfig cfg(1e9, 4, 0.5);
    CHECK_THROWS_AS(e_linf_at(cfg, {0.0, 1.0}), DegenerateGeometry);
}
