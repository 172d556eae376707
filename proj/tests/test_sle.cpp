#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rcr/loewner.hpp"
#include "rcr/restriction.hpp"
#include "rcr/sle.hpp"

using namespace rcr;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// two-sided Kolmogorov-Smirnov p-value against N(0, sigma^2)
double ks_pvalue(std::vector<double> xs, double sigma) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = normal_cdf(xs[i] / sigma);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    const double lam = d * (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n));
    double p = 0.0;
    for (int k = 1; k <= 100; ++k)
        p += 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
    return std::min(std::max(p, 0.0), 1.0);
}

} // namespace

TEST_SUITE("sle") {

TEST_CASE("perfect driver: values and hull derivatives") {
    const auto w_pi = sle::perfect_driver(kPi, 1.0, 1e-3);
    for (double v : w_pi.values) CHECK(v == doctest::Approx(kPi).epsilon(1e-14));

    // |f'_t(0)| = e^t and f'_t(1) = exp(-t/(1-cos theta)); theta = pi/2, t = 0.3
    const double theta = kPi / 2, t = 0.3;
    const auto w = sle::perfect_driver(theta, t, 1e-3);
    const auto [d0, d1] = restriction::hull_derivatives(w, t);
    CHECK(d0 == doctest::Approx(std::exp(t)).epsilon(1e-12));
    CHECK(d1 == doctest::Approx(std::exp(-t)).epsilon(1e-5));
    // generic theta
    const auto w2 = sle::perfect_driver(2.0, 0.25, 1e-3);
    const auto [e0, e1] = restriction::hull_derivatives(w2, 0.25);
    CHECK(e0 == doctest::Approx(std::exp(0.25)).epsilon(1e-12));
    CHECK(e1 == doctest::Approx(std::exp(-0.25 / (1.0 - std::cos(2.0)))).epsilon(1e-5));
}

TEST_CASE("chordal driver: rho = 0 decouples, sign invariance, repulsion") {
    sle::SleParams p;
    p.kappa = 2.0;
    p.rho = 0.0;
    p.force = sle::ForceKind::Angle;
    p.force_value = 1.0;
    p.T = 1.0;
    p.dt = 1e-3;
    p.seed = 101;
    std::vector<double> ends;
    for (int i = 0; i < 600; ++i) {
        p.stream = static_cast<std::uint64_t>(i);
        const auto pair = sle::chordal_sle_driver(p);
        ends.push_back(pair.w.values.back() - pair.w.values.front());
        // sign invariance of W - V along the whole path
        const double s0 = pair.w.values.front() - pair.v.values.front();
        for (std::size_t k = 0; k < pair.w.values.size(); ++k) {
            CHECK((pair.w.values[k] - pair.v.values[k]) * s0 >= 0.0);
        }
    }
    CHECK(ks_pvalue(ends, std::sqrt(p.kappa * p.T)) > 0.01);

    // repulsion sanity at rho = 2: E[W_T - V_T] grows with T
    p.kappa = 8.0 / 3.0;
    p.rho = 2.0;
    double mean_half = 0.0, mean_full = 0.0;
    for (int i = 0; i < 1000; ++i) {
        p.stream = static_cast<std::uint64_t>(i);
        const auto pair = sle::chordal_sle_driver(p);
        const auto half = pair.w.values.size() / 2;
        mean_half += std::abs(pair.w.values[half] - pair.v.values[half]);
        mean_full += std::abs(pair.w.values.back() - pair.v.values.back());
    }
    CHECK(mean_full > mean_half);
}

TEST_CASE("radial driver: rho = 0 endpoint distribution (KS)") {
    sle::SleParams p;
    p.kappa = 8.0 / 3.0;
    p.rho = 0.0;
    p.force = sle::ForceKind::None;
    p.T = 0.5;
    p.dt = 1e-3;
    p.seed = 33;
    std::vector<double> ends;
    for (int i = 0; i < 2000; ++i) {
        p.stream = static_cast<std::uint64_t>(i);
        const auto pair = sle::radial_sle_driver(p);
        ends.push_back(pair.w.values.back() - pair.w.values.front());
        CHECK(pair.w.values.size() == pair.v.values.size());
    }
    CHECK(ks_pvalue(ends, std::sqrt(p.kappa * p.T)) > 0.01);
}

TEST_CASE("radial driver: half-angle stays in (0, pi) with force point 1-") {
    sle::SleParams p;
    p.kappa = 8.0 / 3.0;
    p.rho = 2.0;
    p.force = sle::ForceKind::LimitLeft;
    p.T = 2.0;
    p.dt = 1e-4;
    p.seed = 77;
    for (int i = 0; i < 1000; ++i) {
        p.stream = static_cast<std::uint64_t>(i);
        sle::RadialSleStepper st(p);
        const long nsteps = std::llround(p.T / p.dt);
        bool ok = true;
        for (long k = 0; k < nsteps; ++k) {
            st.step();
            ok = ok && st.phi() > 0.0 && st.phi() < kPi;
        }
        CHECK(ok);
        // W - V = 2 * sgn * phi stays one-signed
        CHECK(st.sgn() == -1);
    }
}

TEST_CASE("driver grids are aligned") {
    sle::SleParams p;
    p.T = 0.25;
    p.dt = 1e-3;
    p.force = sle::ForceKind::LimitLeft;
    p.rho = 1.0;
    const auto pair = sle::radial_sle_driver(p);
    CHECK(pair.w.dt == pair.v.dt);
    CHECK(pair.w.values.size() == pair.v.values.size());
    CHECK(pair.w.values.size() == 251);
}

TEST_CASE("parameter validation") {
    sle::SleParams p;
    p.rho = -2.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.rho = 0.0;
    p.dt = 1e-3;
    p.T = 0.0505; // not a grid multiple
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

} // TEST_SUITE
