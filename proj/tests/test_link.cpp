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
#include "nearfield/link.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace nearfield;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("channel gain", "[link]")
{
    const ArrayConfig one(1e9, 1);
    const double a = one.wavelength() / (4.0 * kPi * 3.0);
    CHECK_THAT(channel_gain(one, {0.4, 3.0}), WithinRel(a * a, 1e-14));

    const ArrayConfig cfg(10e9, 8);
    const double r = 0.9;
    double sum = 0.0;
    for (std::size_t n = 0; n < 8; ++n)
    {
        const double x = double(n) * cfg.spacing();
        sum += 1.0 / (r * r + x * x);
    }
    const double s = cfg.wavelength() / (4.0 * kPi);
    CHECK_THAT(channel_gain(cfg, {kPi / 2.0, r}), WithinRel(s * s * sum, 1e-13));

    const auto o = oracle::half_wave(300e9, 64);
    CHECK_THAT(channel_gain(ArrayConfig(300e9, 64), {kPi / 3.0, 5.0}),
               WithinRel(double(oracle::gain(o, oracle::kPiL / 3.0L, 5.0L)), 1e-12));
}

TEST_CASE("spectral efficiency closed cases", "[link]")
{
    LinkBudget b;
    b.data_snr = 0.0;
    CHECK(se_optimal(5.0, b) == 0.0);
    b.data_snr = 1.0;
    CHECK_THAT(se_optimal(1.0, b), WithinRel(1.0, 1e-15));
    CHECK_THAT(se_optimal(3.0, b), WithinRel(2.0, 1e-15));

    LinkBudget m{10.0, 10.0, 10};
    CHECK_THAT(snr_mismatched(1.0, 0.5, m), WithinRel(2.5 / 0.56, 1e-14));
    CHECK(snr_mismatched(1.0, 0.0, m) == 0.0);
    LinkBudget huge{1e12, 3.0, 1000000};
    CHECK_THAT(snr_mismatched(2.0, 1.0, huge), WithinRel(6.0, 1e-6));

    CHECK_THROWS_AS(snr_mismatched(1.0, 1.5, m), DomainError);
    CHECK_THROWS_AS(snr_mismatched(1.0, -0.1, m), DomainError);
    CHECK_THROWS_AS(snr_mismatched(0.0, 0.5, m), DomainError);
    CHECK_THROWS_AS((LinkBudget{0.0, 1.0, 1}.validate()), ValidationError);
    CHECK_THROWS_AS((LinkBudget{1.0, -1.0, 1}.validate()), ValidationError);
    CHECK_THROWS_AS((LinkBudget{1.0, 1.0, 0}.validate()), ValidationError);
    CHECK_THAT(db_to_linear(30.0), WithinRel(1000.0, 1e-14));
}

TEST_CASE("SE loss report", "[link]")
{
    const ArrayConfig cfg(10e9, 5);
    const PolarPosition pos(1.0, 0.3);
    const LinkBudget b;
    const SEReport rep = se_loss(cfg, pos, b);
    CHECK(rep.se_opt >= rep.se_mis);
    CHECK(rep.se_mis >= 0.0);
    CHECK_THAT(rep.delta_se, WithinAbs(rep.se_opt - rep.se_mis, 1e-12));
    const auto o = oracle::half_wave(10e9, 5);
    CHECK_THAT(rep.delta_se, WithinRel(double(oracle::se_loss(o, 1.0L, 0.3L, 1e10L, 1e10L, 64.0L)), 1e-9));

    LinkBudget silent = b;
    silent.data_snr = 0.0;
    CHECK(se_loss(cfg, pos, silent).delta_se == 0.0);

    const ArrayConfig one(10e9, 1);
    LinkBudget longp = b;
    longp.pilot_len = 1000000000;
    CHECK(se_loss(one, pos, longp).delta_se < 1e-6);
    CHECK(se_loss_worst(one, 0.3, b).value == 0.0);

    for (double f : {1e9, 10e9, 300e9})
        for (std::size_t n : {2u, 5u, 64u})
        {
            const ArrayConfig c(f, n);
            CHECK(se_loss_worst(c, 1e6 * c.aperture(), b).value < 1e-3);
        }
}

TEST_CASE("worst-case SE loss dominates random angles and matches a dense oracle", "[link][oracle]")
{
    const ArrayConfig cfg(1e9, 2);
    const LinkBudget b;
    const double r = rayleigh_distance(cfg);
    const MetricSample w = se_loss_worst(cfg, r, b);
    const auto o = oracle::half_wave(1e9, 2);
    const double ref = double(oracle::dense_max([&](oracle::ld t) { return oracle::se_loss(o, t, r, 1e10L, 1e10L, 64.0L); }, 100000));
    CHECK_THAT(w.value, WithinRel(ref, 1e-6));

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, kPi);
    const ArrayConfig big(28e9, 32);
    const MetricSample wb = se_loss_worst(big, 0.2, b);
    for (int i = 0; i < 1000; ++i)
        CHECK(se_loss(big, {u(gen), 0.2}, b).delta_se <= wb.value * (1.0 + 1e-12));
}

TEST_CASE("SNR ordering holds on random inputs", "[link][property]")
{
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 20000; ++i)
    {
        const double G = std::pow(10.0, -14.0 + 14.0 * u01(gen));
        const double eta = u01(gen);
        const LinkBudget b{std::pow(10.0, -2.0 + 14.0 * u01(gen)), std::pow(10.0, -2.0 + 14.0 * u01(gen)),
                           1 + std::size_t(u01(gen) * 512)};
        const double snr = snr_mismatched(G, eta, b);
        CHECK(snr >= 0.0);
        CHECK(snr <= eta * G * b.data_snr);
        CHECK(eta * G * b.data_snr <= G * b.data_snr);
    }
}

TEST_CASE("NMSE lower bound and bias approximation", "[link]")
{
    const ArrayConfig one(1e9, 1);
    CHECK(nmse_lower_bound(one, {0.2, 1.0}, LinkBudget{1e15, 1.0, 1000000}) < 1e-6);

    const ArrayConfig cfg(10e9, 5);
    const PolarPosition pos(kPi / 3.0, 0.48);
    double prev = 1e300;
    for (std::size_t L : {1u, 4u, 16u, 64u, 256u})
    {
        const double v = nmse_lower_bound(cfg, pos, LinkBudget{1e3, 1.0, L});
        CHECK(v < prev);
        CHECK(v >= 1.0 - array_gain_efficiency(cfg, pos));
        prev = v;
    }
    prev = 1e300;
    for (double rho : {1.0, 10.0, 1e3, 1e6})
    {
        const double v = nmse_lower_bound(cfg, pos, LinkBudget{rho, 1.0, 64});
        CHECK(v < prev);
        prev = v;
    }

    CHECK(nmse_bias_approx(0.0) == 0.0);
    CHECK_THAT(nmse_bias_approx(0.6), WithinRel(0.3276, 1e-12));
    for (double x : {1e-2, 1e-3, 1e-4})
        CHECK_THAT(nmse_bias_approx(x) / (x * x), WithinRel(1.0, x * x));
    CHECK_THROWS_AS(nmse_bias_approx(-1.0), DomainError);

    // The projection absorbs the mean phase offset, so the exact bias stays below the l2 approximation
    for (double f : {1e9, 10e9, 300e9})
        for (std::size_t n : {5u, 64u})
        {
            const ArrayConfig c(f, n);
            const double r = 10.0 * sspf_distance(c, 1e-3);
            for (double theta : {0.3, kPi / 2.0, 2.0})
            {
                const PolarPosition p(theta, r);
                const double e = e_l2_at(c, p);
                const double bias = 1.0 - array_gain_efficiency(c, p);
                INFO("bias " << bias << " approx " << nmse_bias_approx(e));
                CHECK(bias >= 0.0);
                CHECK(bias <= nmse_bias_approx(e) + 4.0 * std::pow(e, 4.0));
                CHECK(nmse_lower_bound(c, p, LinkBudget{}) >= bias);
            }
        }
}

TEST_CASE("Monte Carlo estimator is consistent with the NMSE expression", "[link][oracle]")
{
    const ArrayConfig cfg(10e9, 5);
    const double r = 2.0 * rayleigh_distance(cfg);
    const double theta = kPi / 3.0;
    const LinkBudget b{db_to_linear(30.0), 1.0, 64};
    const double bound = nmse_lower_bound(cfg, {theta, r}, b);
    const auto o = oracle::half_wave(10e9, 5);
    const auto est = oracle::simulate_nmse(o, theta, r, 64, db_to_linear(30.0), 4000, 17);
    CHECK(est.mean >= bound - 3.0 * est.std_error);
    CHECK_THAT(est.mean, WithinRel(bound, 0.05));

    // Deterministic regardless of how often it is called
    const auto again = oracle::simulate_nmse(o, theta, r, 64, db_to_linear(30.0), 4000, 17);
    CHECK(again.mean == est.mean);
}
