#include <cmath>

#include "doctest.h"
#include "rcr/geometry.hpp"
#include "rcr/hulls.hpp"
#include "rcr/loopsoup.hpp"
#include "rcr/rng.hpp"

using namespace rcr;

namespace {

bool loop_hits_arc(const soup::LoopSample& loop, const sampler::HullGeometry& hull) {
    if (geom::polylines_cross(loop.points, hull.arc)) return true;
    if (!hull.is_slit && geom::point_in_polygon(hull.polygon, loop.points.front())) return true;
    return false;
}

} // namespace

TEST_SUITE("loopsoup") {

TEST_CASE("escape mass functional") {
    const auto zero = soup::escape_mass(2.0, 1.0);
    CHECK(zero.mass == doctest::Approx(0.0));
    CHECK(zero.probability == doctest::Approx(1.0));
    // subdomain cut by a perfect hull of capacity t: Phi'(0) = e^t
    const auto m = soup::escape_mass(2.0, std::exp(0.3));
    CHECK(m.mass == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(m.probability == doctest::Approx(std::exp(-0.6)).epsilon(1e-12));
    CHECK_THROWS_AS(soup::escape_mass(1.0, 0.5), ValidationError);
}

TEST_CASE("soup sampling basics") {
    soup::SoupConfig cfg;
    cfg.intensity = 0.0;
    cfg.t_min = 1e-2;
    soup::LoopSoupSampler empty(cfg);
    Rng rng(5);
    CHECK(empty.sample(rng).empty());

    cfg.intensity = 1.0;
    soup::LoopSoupSampler s1(cfg);
    CHECK(s1.truncated_mass() > 0.5);
    CHECK(s1.truncated_mass() < 20.0);

    // every sampled loop closes, surrounds 0 and stays in U (hard assertions)
    long total = 0;
    for (int i = 0; i < 50; ++i) {
        Rng r(9, static_cast<std::uint64_t>(i));
        for (const auto& loop : s1.sample(r)) {
            ++total;
            REQUIRE(loop.points.size() >= 65);
            CHECK(std::abs(loop.points.front() - loop.points.back()) < 1e-12);
            CHECK(loop.winding != 0);
            CHECK(loop.surrounds_origin);
            for (const auto& p : loop.points) CHECK(std::abs(p) < 1.0);
        }
    }
    CHECK(total > 0);
}

TEST_CASE("poisson counts: doubling intensity and dispersion") {
    soup::SoupConfig cfg;
    cfg.intensity = 1.0;
    cfg.t_min = 1e-2;
    cfg.bridge_points = 64;
    soup::LoopSoupSampler s1(cfg);
    cfg.intensity = 2.0;
    soup::LoopSoupSampler s2(cfg);

    const int n = 500;
    double sum1 = 0, sum2 = 0, sumsq1 = 0;
    for (int i = 0; i < n; ++i) {
        Rng ra(17, static_cast<std::uint64_t>(i));
        Rng rb(18, static_cast<std::uint64_t>(i));
        const double c1 = static_cast<double>(s1.sample(ra).size());
        const double c2 = static_cast<double>(s2.sample(rb).size());
        sum1 += c1;
        sumsq1 += c1 * c1;
        sum2 += c2;
    }
    const double mean1 = sum1 / n, mean2 = sum2 / n;
    const double var1 = (sumsq1 - sum1 * sum1 / n) / (n - 1);
    // doubling c doubles the mean (z-test)
    const double se = std::sqrt((4.0 * mean1 + mean2) / n); // rough
    CHECK(std::abs(mean2 - 2.0 * mean1) < 3.5 * se + 0.05);
    // dispersion: variance/mean within [0.8, 1.2]
    CHECK(var1 / mean1 > 0.8);
    CHECK(var1 / mean1 < 1.2);
}

TEST_CASE("escaping counts approach c log Phi'(0) as the cutoff shrinks") {
    // perfect hull theta = pi, t = 0.3: analytic escape mass = c * 0.3
    const auto hull = sampler::hull_from_perfect(kPi, 0.3);
    const double c = 1.0;
    const int n = 3000;
    double prev_mean = -1.0;
    for (double tmin : {1e-2, 1e-3}) {
        soup::SoupConfig cfg;
        cfg.intensity = c;
        cfg.t_min = tmin;
        soup::LoopSoupSampler s(cfg);
        double hits = 0;
        for (int i = 0; i < n; ++i) {
            Rng r(23, static_cast<std::uint64_t>(i));
            for (const auto& loop : s.sample(r))
                if (loop_hits_arc(loop, hull)) hits += 1.0;
        }
        const double mean = hits / n;
        CHECK(mean <= 0.3 + 3.0 * std::sqrt(0.3 / n)); // truncation only loses mass
        if (prev_mean >= 0) {
            CHECK(mean >= prev_mean - 2.0 * std::sqrt(0.3 / n));
            // within 10 percent at t_min = 1e-3
            CHECK(std::abs(mean - 0.3) < 0.03 + 3.0 * std::sqrt(0.3 / n));
        }
        prev_mean = mean;
    }
}

TEST_CASE("nested subdomains: escape masses are additive") {
    // hulls A1 subset A2 along the same perfect curve
    const auto h1 = sampler::hull_from_perfect(kPi, 0.15);
    const auto h2 = sampler::hull_from_perfect(kPi, 0.3);
    soup::SoupConfig cfg;
    cfg.intensity = 1.0;
    cfg.t_min = 1e-3;
    soup::LoopSoupSampler s(cfg);
    const int n = 3000;
    double e1 = 0, e2 = 0;
    for (int i = 0; i < n; ++i) {
        Rng r(29, static_cast<std::uint64_t>(i));
        for (const auto& loop : s.sample(r)) {
            if (loop_hits_arc(loop, h1)) e1 += 1.0;
            if (loop_hits_arc(loop, h2)) e2 += 1.0;
        }
    }
    const double diff = (e2 - e1) / n;
    const double se = std::sqrt(0.45 / n);
    CHECK(std::abs(diff - 0.15) < 3.0 * se);
}

} // TEST_SUITE
