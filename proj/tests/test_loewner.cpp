#include <cmath>

#include "doctest.h"
#include "rcr/conformal.hpp"
#include "rcr/geometry.hpp"
#include "rcr/loewner.hpp"
#include "rcr/rng.hpp"
#include "rcr/sle.hpp"

using namespace rcr;
using conformal::Domain;

namespace {

DrivingPath brownian_driver(double start, double kappa, double T, double dt, std::uint64_t seed) {
    Rng rng(seed);
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    std::vector<double> w(n + 1);
    w[0] = start;
    for (std::size_t k = 1; k <= n; ++k)
        w[k] = w[k - 1] + std::sqrt(kappa * dt) * rng.gaussian();
    return DrivingPath(dt, std::move(w));
}

} // namespace

TEST_SUITE("loewner") {

TEST_CASE("chordal flow: constant-driver closed form") {
    const auto w = DrivingPath::constant(0.0, 1.0, 1e-3);
    // g_t(z) = sqrt(z^2 + 4t): g_1(3i) = sqrt(-9 + 4) = i sqrt(5)
    const auto r = loewner::chordal_flow(w, {0, 3}, 1.0);
    CHECK(!r.swallowed);
    CHECK(std::abs(r.point - Complex(0, std::sqrt(5.0))) < 1e-9);
    // z = W_0 swallowed immediately
    const auto s = loewner::chordal_flow(w, {0, 0}, 1.0);
    CHECK(s.swallowed);
    CHECK(s.tau == 0.0);
    // hydrodynamic normalization: (g_t(z) - z) z -> 2t at z = 100i
    const auto far = loewner::chordal_flow(w, {0, 100}, 1.0);
    CHECK(std::abs((far.point - Complex(0, 100)) * Complex(0, 100) - Complex(2, 0)) < 1e-3);
}

TEST_CASE("radial flow: special points") {
    const auto w = DrivingPath::constant(0.0, 1.0, 1e-3);
    const auto zero = loewner::radial_flow(w, {0, 0}, 1.0);
    CHECK(!zero.swallowed);
    CHECK(std::abs(std::exp(zero.log_deriv) - std::exp(1.0)) < 1e-12);
    // antipode of a constant driver is fixed
    const auto anti = loewner::radial_flow(w, {-1, 0}, 1.0);
    CHECK(!anti.swallowed);
    CHECK(std::abs(anti.point - Complex(-1, 0)) < 1e-9);
    // the driving point itself is swallowed at 0
    const auto s = loewner::radial_flow(w, {1, 0}, 1.0);
    CHECK(s.swallowed);
    CHECK(s.tau == 0.0);
    // near-zero point integrates the variational ODE: log g' = t + O(|z|)
    const auto tiny = loewner::radial_flow(w, {1e-10, 0}, 1.0);
    CHECK(std::abs(tiny.log_deriv.real() - 1.0) < 1e-8);
}

TEST_CASE("radial flow: capacity additivity and circle preservation") {
    const auto w = brownian_driver(2.0, 8.0 / 3.0, 0.8, 1e-3, 5);
    const Complex z{-0.2, 0.5};
    const auto full = loewner::radial_flow(w, z, 0.8);
    REQUIRE(!full.swallowed);
    const auto half = loewner::radial_flow(w, z, 0.4);
    REQUIRE(!half.swallowed);
    const auto rest = loewner::radial_flow(w.shifted(400), half.point, 0.4);
    REQUIRE(!rest.swallowed);
    CHECK(std::abs(rest.point - full.point) < 1e-7);

    for (double y : {0.5, 2.5, 4.0}) {
        const auto b = loewner::radial_flow(w, std::polar(1.0, y), 0.8);
        if (!b.swallowed) CHECK(std::abs(std::abs(b.point) - 1.0) < 1e-8);
        const auto ba = loewner::radial_flow_boundary(w, y, 0.8);
        if (!b.swallowed && !ba.swallowed)
            CHECK(std::abs(std::polar(1.0, ba.angle) - b.point) < 1e-7);
    }
}

TEST_CASE("variational consistency: log-derivative vs finite differences") {
    const auto w = brownian_driver(0.0, 2.0, 0.5, 1e-3, 9);
    const Complex z{0.3, 0.4};
    const auto r = loewner::radial_flow(w, z, 0.5);
    REQUIRE(!r.swallowed);
    const double h = 1e-6;
    const auto rp = loewner::radial_flow(w, z + Complex(h, 0), 0.5);
    const auto rm = loewner::radial_flow(w, z - Complex(h, 0), 0.5);
    const Complex fd = (rp.point - rm.point) / (2.0 * h);
    CHECK(std::abs(std::exp(r.log_deriv) - fd) / std::abs(fd) < 1e-5);
}

TEST_CASE("monotone swallowing") {
    const auto w = brownian_driver(0.0, 8.0 / 3.0, 1.0, 1e-3, 13);
    const Complex z = std::polar(1.0, 0.05); // boundary point near the seed
    const auto early = loewner::radial_flow(w, z, 0.5);
    if (early.swallowed) {
        const auto late = loewner::radial_flow(w, z, 1.0);
        CHECK(late.swallowed);
        CHECK(late.tau == doctest::Approx(early.tau));
    }
}

TEST_CASE("trace symmetry: straight slits") {
    // radial driver pi: straight segment from -1 toward 0
    const auto rw = DrivingPath::constant(kPi, 0.4, 1e-3);
    const auto rt = loewner::extract_trace(rw, Domain::Disc, -1.0);
    for (const auto& p : rt.points) CHECK(std::abs(p.imag()) < 1e-4);
    // chordal driver 0: vertical segment
    const auto cw = DrivingPath::constant(0.0, 0.25, 1e-3);
    const auto ct = loewner::extract_trace(cw, Domain::HalfPlane, -1.0);
    for (const auto& p : ct.points) CHECK(std::abs(p.real()) < 1e-4);
    CHECK(std::abs(ct.points.back() - Complex(0, 1)) < 1e-6); // tip of [0, 2i sqrt(t)]
}

TEST_CASE("trace tip-offset convergence contract") {
    const auto w = sle::perfect_driver(kPi / 2, 0.3, 1e-3);
    const double off = std::pow(1e-3, 0.75);
    const auto t1 = loewner::extract_trace(w, Domain::Disc, off);
    const auto t2 = loewner::extract_trace(w, Domain::Disc, 0.5 * off);
    REQUIRE(t1.points.size() == t2.points.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < t1.points.size(); ++i)
        worst = std::max(worst, std::abs(t1.points[i] - t2.points[i]));
    CHECK(worst < 10.0 * off);
}

TEST_CASE("perfect curve self-similarity under f_t") {
    const double theta = kPi / 2, t = 0.3, s = 0.3, dt = 1e-3;
    const auto w = sle::perfect_driver(theta, t + s, dt);
    const auto full = loewner::extract_trace(w, Domain::Disc, -1.0);
    // map eta([t, t+s]) forward by f_t = g_t / g_t(1)
    const auto g_t = loewner::hull_maps(w, t, Domain::Disc);
    const auto g1 = loewner::radial_flow_boundary(w, 0.0, t);
    REQUIRE(!g1.swallowed);
    const Complex rot = std::polar(1.0, -g1.angle);
    std::vector<Complex> mapped, head;
    const auto nt = static_cast<std::size_t>(std::llround(t / dt));
    for (std::size_t k = nt; k < full.points.size(); ++k)
        mapped.push_back(rot * g_t.eval(full.points[k]));
    for (std::size_t k = 0; k <= full.points.size() - 1 - nt; ++k) head.push_back(full.points[k]);
    CHECK(geom::hausdorff_distance(mapped, head) < 1e-2);
}

TEST_CASE("hull maps agree with the flow") {
    const auto empty = loewner::hull_maps(DrivingPath::constant(0.3, 0.1, 1e-3), 0.0, Domain::Disc);
    CHECK(empty.elems.empty());

    const auto w = brownian_driver(1.0, 8.0 / 3.0, 0.5, 1e-3, 21);
    const auto chain = loewner::hull_maps(w, 0.5, Domain::Disc, 4);
    // derivative at 0 equals e^T
    Complex d(0, 0);
    chain.eval({0, 0}, &d);
    CHECK(std::abs(std::abs(d) - std::exp(0.5)) < 1e-8);
    CHECK(chain.capacity() == doctest::Approx(0.5).epsilon(1e-12));

    auto worst_gap = [](const DrivingPath& path, int substeps) {
        const auto c = loewner::hull_maps(path, path.horizon(), Domain::Disc, substeps);
        Rng rng(3);
        int checked = 0;
        double worst = 0.0;
        while (checked < 100) {
            const Complex z =
                std::polar(0.95 * std::sqrt(rng.uniform()), rng.uniform(0.0, kTwoPi));
            const auto r = loewner::radial_flow(path, z, path.horizon());
            if (r.swallowed) continue;
            worst = std::max(worst, std::abs(c.eval(z) - r.point));
            ++checked;
        }
        return worst;
    };
    // smooth drivers: chain and flow agree to 1e-6 on random interior points
    {
        const auto ns = static_cast<std::size_t>(500);
        std::vector<double> vals(ns + 1);
        for (std::size_t k = 0; k <= ns; ++k) vals[k] = 2.0 + 0.8 * std::sin(3.0 * 1e-3 * k);
        CHECK(worst_gap(DrivingPath(1e-3, std::move(vals)), 2) < 1e-6);
    }
    // rough (Brownian) drivers: agreement is limited by the piecewise-constant
    // slit approximation, first order in the substep
    CHECK(worst_gap(w, 4) < 2e-4);

    // chordal constant driver: chain equals sqrt(z^2 + 4T) pointwise
    const auto cw = DrivingPath::constant(0.0, 0.25, 1e-3);
    const auto cchain = loewner::hull_maps(cw, 0.25, Domain::HalfPlane);
    for (const Complex z : {Complex(0.7, 0.9), Complex(-1.2, 0.4), Complex(0.1, 2.0)}) {
        const Complex expect = conformal::chordal_slit_map(0.0, 0.25, z);
        CHECK(std::abs(cchain.eval(z) - expect) < 1e-6);
    }
}

} // TEST_SUITE
