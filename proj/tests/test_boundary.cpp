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

TEST_CASE("Rayleigh distance", "[boundary]")
{
    CHECK(rayleigh_distance(ArrayConfig(1e9, 1)) == 0.0);
    CHECK_THAT(rayleigh_distance(ArrayConfig(300e9, 64)), WithinRel(1.9845, 1e-12));
    CHECK_THAT(rayleigh_distance(ArrayConfig(3e8, 2, 1.0)), WithinRel(2.0, 1e-15));
}

TEST_CASE("SSPF closed form", "[boundary]")
{
    CHECK(sspf_distance(ArrayConfig(1e9, 1), 1e-3) == 0.0);
    const auto o = oracle::half_wave(300e9, 64);
    const oracle::ld D = o.aperture();
    const double ref = double(std::sqrt((o.k() * D * D + D) / (2.0L * 1e-3L)));
    CHECK_THAT(sspf_distance(ArrayConfig(300e9, 64), 1e-3), WithinRel(ref, 1e-13));
    CHECK_THAT(ref, WithinRel(55.97, 1e-3));
    const ArrayConfig cfg(10e9, 16);
    CHECK_THAT(sspf_distance(cfg, 4e-3), WithinRel(0.5 * sspf_distance(cfg, 1e-3), 1e-14));
    CHECK_THROWS_AS(sspf_distance(cfg, 0.0), ValidationError);
}

TEST_CASE("SPF trigonometric root matches a bisection oracle", "[boundary][oracle]")
{
    CHECK(spf_distance(ArrayConfig(1e9, 1), 1e-3) == 0.0);
    for (const Case c : {Case{300e9, 64}, Case{1e9, 2}})
    {
        const ArrayConfig cfg(c.f, c.n);
        const double ref = double(oracle::spf_root(oracle::half_wave(c.f, c.n), 1e-3L));
        const double r = spf_distance(cfg, 1e-3);
        CHECK_THAT(r, WithinRel(ref, 1e-9));
        CHECK(std::abs(spf_relative_residual(cfg, 1e-3, r)) < 1e-9);
    }
    CHECK_THAT(spf_distance(ArrayConfig(300e9, 64), 1e-3), WithinRel(55.83, 1e-3));

    const CubicCoefficients cc = spf_cubic(ArrayConfig(300e9, 64), 1e-3);
    CHECK(cc.p < 0.0);
    CHECK(cc.q < 0.0);
    CHECK(cc.discriminant() < 0.0);

    // Long wavelength with a loose tolerance leaves the trigonometric branch
    CHECK_THROWS_AS(spf_distance(ArrayConfig(1e6, 2), 1e3), DomainError);
}

TEST_CASE("SPF residual on random configurations", "[boundary][property]")
{
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 100; ++i)
    {
        const double f = std::pow(10.0, 8.0 + 3.5 * u01(gen));
        const std::size_t n = 2 + std::size_t(u01(gen) * 254);
        const double delta = std::pow(10.0, -5.0 + 3.0 * u01(gen));
        const ArrayConfig cfg(f, n);
        const double r = spf_distance(cfg, delta);
        INFO("f=" << f << " n=" << n << " delta=" << delta);
        CHECK(std::abs(spf_relative_residual(cfg, delta, r)) < 1e-9);
        CHECK_THAT(r, WithinRel(double(oracle::spf_root(oracle::half_wave(f, n), delta)), 1e-9));
        if (r >= cfg.aperture())
            CHECK(r <= sspf_distance(cfg, delta) * (1.0 + 1e-12));
    }
}

TEST_CASE("EPF last violation agrees with a dense scan", "[boundary][oracle]")
{
    const ArrayConfig cfg(300e9, 64);
    const auto o = oracle::half_wave(300e9, 64);
    const EnvelopeSearchPolicy policy;
    const EpfResult e = epf_distance(cfg, 1e-3, policy);
    REQUIRE(e.found);

    const double r_min = policy.resolve_r_min(cfg);
    const double r_spf = spf_distance(cfg, 1e-3);
    const auto grid = oracle::log_points(r_min, r_spf, 1000000);
    oracle::ld left = 0, right = 0;
    REQUIRE(oracle::last_violation_cell(grid, [&](oracle::ld r) { return oracle::g_epf(o, r); }, 1e-3L, left, right));
    const double ref = double(oracle::bisect([&](oracle::ld r) { return oracle::g_epf(o, r) - 1e-3L; }, left, right));
    CHECK_THAT(e.radius, WithinRel(ref, 2.0 * policy.bisection_tol));

    const auto beyond = log_grid(e.radius * (1.0 + 1e-12), 10.0 * r_spf, 10000);
    for (double r : beyond)
        CHECK(epf_bound(cfg, r) < 1e-3);
}

TEST_CASE("EPF never exceeds SPF", "[boundary][property]")
{
    for (const Case &c : kGrid)
    {
        const ArrayConfig cfg(c.f, c.n);
        const EpfResult e = epf_distance(cfg, 1e-3);
        CHECK(e.radius <= spf_distance(cfg, 1e-3));
        for (double r : log_grid(e.radius * 1.001, 100.0 * e.radius, 200))
            CHECK(epf_bound(cfg, r) <= spf_bound(cfg, r));
    }
}

TEST_CASE("EPF reports missing violations", "[boundary]")
{
    const ArrayConfig cfg(300e9, 64);
    EnvelopeSearchPolicy policy;
    policy.r_min = spf_distance(cfg, 1e-3) * (1.0 - 1e-5);
    const EpfResult e = epf_distance(cfg, 1e-3, policy);
    CHECK_FALSE(e.found);
    CHECK(e.radius == *policy.r_min);

    const EpfResult single = epf_distance(ArrayConfig(1e9, 1), 1e-3);
    CHECK_FALSE(single.found);
    CHECK(single.radius == 0.0);
}

TEST_CASE("log grid helpers", "[boundary]")
{
    const auto g = log_grid(1.0, 1000.0, 4);
    REQUIRE(g.size() == 4);
    CHECK(g.front() == 1.0);
    CHECK(g.back() == 1000.0);
    CHECK_THAT(g[1], WithinRel(10.0, 1e-14));
    CHECK(log_grid(2.0, 2.0, 1) == std::vector<double>{2.0});
    CHECK_THROWS_AS(log_grid(2.0, 1.0, 5), ValidationError);
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), ValidationError);
    CHECK(log_grid_points(1.0, 100.0, 2000) == 4001);
    CHECK(log_grid_points(1.0, 1.0, 2000) == 2);
}

TEST_CASE("envelope search on synthetic metrics", "[boundary]")
{
    const EnvelopeSearchPolicy policy;
    auto inv = [](double r) { return MetricSample{r, 1.0 / r, 0.0}; };
    const EnvelopeResult a = optimal_radius(inv, 0.1, 1.0, ScanHorizon{100.0, 20.0}, policy);
    CHECK_THAT(a.radius, WithinRel(10.0, 2e-8));
    CHECK(a.certified);
    CHECK_FALSE(a.clamped);

    // Oscillating metric: the last crossing wins
    auto osc = [](double r) { return MetricSample{r, (1.5 + std::sin(r)) / r, 0.0}; };
    const EnvelopeResult b = optimal_radius(osc, 0.1, 1.0, ScanHorizon{2000.0, std::nullopt}, policy);
    CHECK_FALSE(b.certified);
    for (double r : log_grid(b.radius * (1.0 + 1e-9), 2000.0, 10000))
        CHECK(osc(r).value < 0.1);
    CHECK(osc(b.radius * (1.0 - 1e-6)).value >= 0.1);

    const EnvelopeResult c = optimal_radius(inv, 10.0, 1.0, ScanHorizon{5.0, 2.0}, policy);
    CHECK(c.clamped);
    CHECK(c.radius == 1.0);
    CHECK(c.certified);

    auto flat = [](double r) { return MetricSample{r, 1.0, 0.0}; };
    CHECK_THROWS_AS(optimal_radius(flat, 0.5, 1.0, ScanHorizon{50.0, 10.0}, policy), HorizonExceeded);
    CHECK_THROWS_AS(optimal_radius(inv, 0.0, 1.0, ScanHorizon{50.0, 10.0}, policy), ValidationError);

    // Uncertified scans must settle well below the tolerance over the last decade
    auto slow = [](double r) { return MetricSample{r, r < 10.0 ? 1.0 : 0.08, 0.0}; };
    CHECK_THROWS_AS(optimal_radius(slow, 0.1, 1.0, ScanHorizon{100.0, std::nullopt}, policy), HorizonExceeded);
    CHECK_NOTHROW(optimal_radius(slow, 0.1, 1.0, ScanHorizon{100.0, 100.0}, policy));

    EnvelopeSearchPolicy bad;
    bad.points_per_decade = 5;
    CHECK_THROWS_AS(optimal_radius(inv, 0.1, 1.0, ScanHorizon{100.0, 10.0}, bad), ValidationError);
}

TEST_CASE("optimal radii of real arrays obey the never-again property", "[boundary][property]")
{
    const Tolerances tol;
    const LinkBudget budget;
    for (const Case c : {Case{10e9, 5}, Case{1e9, 2}})
    {
        const ArrayConfig cfg(c.f, c.n);
        for (const Metric m : {Metric::linf, Metric::l2, Metric::se})
        {
            INFO("metric " << metric_name(m) << " f=" << c.f << " n=" << c.n);
            const double delta = m == Metric::linf ? tol.delta_inf : m == Metric::l2 ? tol.delta_2 : tol.delta_se;
            const EnvelopeResult res = optimal_radius(cfg, m, tol, budget);
            CHECK(res.certified == (m != Metric::se));
            const double upper = res.samples.back().range;
            for (double r : log_grid(res.radius * (1.0 + 1e-9), upper, 2000))
                CHECK(worst_case(cfg, m, r, budget).value < delta);
        }
    }
}

TEST_CASE("tighter tolerances never shrink the optimal radius", "[boundary][property]")
{
    const ArrayConfig cfg(10e9, 5);
    const LinkBudget budget;
    for (const Metric m : {Metric::linf, Metric::l2})
    {
        double prev = 0.0;
        for (double delta : {1e-2, 1e-3, 1e-4})
        {
            Tolerances tol{delta, delta, 0.5};
            const double r = optimal_radius(cfg, m, tol, budget).radius;
            CHECK(r >= prev);
            prev = r;
        }
    }
}

TEST_CASE("single element arrays give trivial boundaries", "[boundary]")
{
    const ArrayConfig one(1e9, 1);
    const BoundarySet b = boundary_set(one, {}, {});
    CHECK(b.rayleigh == 0.0);
    CHECK(b.spf == 0.0);
    CHECK(b.sspf == 0.0);
    CHECK(b.epf == 0.0);
    CHECK_FALSE(b.epf_found);
    const double r_min = EnvelopeSearchPolicy{}.resolve_r_min(one);
    CHECK(b.opt_linf == r_min);
    CHECK(b.opt_l2 == r_min);
    CHECK(b.opt_se == r_min);
    CHECK(b.opt_linf_clamped);
    CHECK(b.opt_linf_certified);
    CHECK(b.opt_l2_certified);
    CHECK_FALSE(b.opt_se_certified);
}

TEST_CASE("loose tolerance returns r_min and certifies it", "[boundary]")
{
    const ArrayConfig cfg(10e9, 5);
    const Tolerances tol{1e3, 1e3, 0.5};
    const EnvelopeResult res = optimal_radius(cfg, Metric::linf, tol, {});
    CHECK(res.clamped);
    CHECK(res.certified);
    CHECK(res.radius == EnvelopeSearchPolicy{}.resolve_r_min(cfg));
}

TEST_CASE("metric names", "[boundary]")
{
    for (const Metric m : {Metric::linf, Metric::l2, Metric::se})
        CHECK(parse_metric(metric_name(m)) == m);
    CHECK_THROWS_AS(parse_metric("l3"), ValidationError);
    CHECK_THROWS_AS((Tolerances{0.0, 1.0, 1.0}.validate()), ValidationError);
}

TEST_CASE("optimal linf radius exceeds Rayleigh by an order of magnitude", "[boundary][slow]")
{
    const ArrayConfig cfg(300e9, 64);
    const EnvelopeResult res = optimal_radius(cfg, Metric::linf, {}, {});
    CHECK(res.certified);
    CHECK(res.radius / rayleigh_distance(cfg) > 10.0);
    CHECK(res.radius <= epf_distance(cfg, 1e-3).radius * (1.0 + 1e-6));
}
