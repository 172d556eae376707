#include <cmath>

#include "doctest.h"
#include "rcr/conformal.hpp"
#include "rcr/geometry.hpp"
#include "rcr/loewner.hpp"
#include "rcr/restriction.hpp"
#include "rcr/rng.hpp"
#include "rcr/sle.hpp"

using namespace rcr;
using conformal::Domain;

namespace {

// two-point Richardson extrapolation in eps^2 for Q(eps) = L + c eps^2 + ...
double richardson2(double q1, double q2) { return (4.0 * q2 - q1) / 3.0; }

} // namespace

TEST_SUITE("conformal") {

TEST_CASE("cayley transform values and round trip") {
    CHECK(std::abs(conformal::cayley_disc_to_halfplane({1, 0}) - Complex(0, 0)) < 1e-15);
    CHECK(std::abs(conformal::cayley_disc_to_halfplane({0, 0}) - Complex(0, 1)) < 1e-15);
    CHECK(std::abs(conformal::cayley_disc_to_halfplane({0, 1}) - Complex(1, 0)) < 1e-15);
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        const double r = std::sqrt(rng.uniform());
        const Complex z = std::polar(r, rng.uniform(0.0, kTwoPi));
        const Complex back =
            conformal::cayley_halfplane_to_disc(conformal::cayley_disc_to_halfplane(z));
        CHECK(std::abs(back - z) < 1e-12);
    }
    CHECK_THROWS_AS(conformal::cayley_disc_to_halfplane({-1, 0}), DomainError);
}

TEST_CASE("half-disc map values") {
    const Complex w = conformal::halfdisc_map(2.0, 0.5, {0, 1});
    CHECK(std::abs(w - Complex(-0.1, 0.95)) < 1e-15);
    // boundary endpoint maps to the slit-image endpoint x + 2 eps
    const Complex e = conformal::halfdisc_map(2.0, 0.5, {2.5, 0});
    CHECK(std::abs(e - Complex(3.0, 0)) < 1e-14);
    // hydrodynamic normalization at large |z|
    const Complex far = conformal::halfdisc_map(2.0, 0.5, {0, 50});
    CHECK(std::abs(far - Complex(0, 50)) < 0.25 / 50.0 * 1.01);
    CHECK_THROWS_AS(conformal::halfdisc_map(2.0, 0.5, {2.1, 0.1}), DomainError);
}

TEST_CASE("normalized half-disc map fixes 0 and i") {
    for (double x : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
        for (double eps : {1e-2, 1e-3}) {
            const Complex f0 = conformal::halfdisc_fixed_map(x, eps, {0, 0});
            const Complex fi = conformal::halfdisc_fixed_map(x, eps, {0, 1});
            CHECK(std::abs(f0) < 1e-12);
            CHECK(std::abs(fi - Complex(0, 1)) < 1e-12);
        }
    }
}

TEST_CASE("kernel limits of the normalized half-disc map") {
    // eps^-2 (f_{x,eps}(y) - y) -> F(x,y), eps^-2 (f'_{x,eps}(y) - 1) -> G(x,y)
    const double xs[] = {-2.0, -1.0, 0.5, 1.0, 2.0};
    const double ys[] = {-2.5, -1.5, 0.75, 1.5, 2.5};
    for (double x : xs) {
        for (double y : ys) {
            if (std::abs(y - x) < 0.2) continue;
            auto q = [&](double eps) {
                Complex d(1, 0);
                const Complex f = conformal::halfdisc_fixed_map(x, eps, {y, 0}, &d);
                return std::make_pair((f.real() - y) / (eps * eps), (d.real() - 1.0) / (eps * eps));
            };
            const auto [f1, g1] = q(2e-3);
            const auto [f2, g2] = q(1e-3);
            const auto k = restriction::kernels(x, y);
            CHECK(std::abs(richardson2(f1, f2) - k.F) < 1e-6);
            CHECK(std::abs(richardson2(g1, g2) - k.G) < 1e-6);
        }
    }
    // frozen spot values (x=1): F(1,2) = 5, G(1,2) = 3/2
    auto lim = [&](double y) {
        Complex d(1, 0);
        const Complex f2 = conformal::halfdisc_fixed_map(1.0, 1e-3, {y, 0}, &d);
        return std::make_pair((f2.real() - y) / 1e-6, (d.real() - 1.0) / 1e-6);
    };
    const auto [fv, gv] = lim(2.0);
    CHECK(fv == doctest::Approx(5.0).epsilon(1e-4));
    CHECK(gv == doctest::Approx(1.5).epsilon(1e-4));
}

TEST_CASE("chain evaluation: identity, delegation, derivative vs finite differences") {
    conformal::SlitMapChain empty;
    Complex d(0, 0);
    CHECK(std::abs(empty.eval({0.3, 0.4}, &d) - Complex(0.3, 0.4)) < 1e-15);
    CHECK(std::abs(d - Complex(1, 0)) < 1e-15);

    conformal::SlitMapChain single;
    single.domain = Domain::HalfPlane;
    single.append(conformal::make_halfdisc(2.0, 0.5));
    CHECK(std::abs(single.eval({0, 1}) - Complex(-0.1, 0.95)) < 1e-15);

    // mixed 10-element half-plane chain
    conformal::SlitMapChain chain;
    chain.domain = Domain::HalfPlane;
    Rng rng(7);
    for (int i = 0; i < 10; ++i) {
        if (i % 3 == 2) {
            chain.append(conformal::make_halfdisc(3.0 + rng.uniform(), 0.1));
        } else {
            chain.append(conformal::make_chordal_slit(rng.uniform(-0.3, 0.3), 0.002));
        }
    }
    const Complex z0{0.4, 1.3};
    Complex dc(0, 0);
    chain.eval(z0, &dc);
    const double h = 1e-6;
    const Complex fd = (chain.eval(z0 + Complex(h, 0)) - chain.eval(z0 - Complex(h, 0))) / (2 * h);
    CHECK(std::abs(dc - fd) / std::abs(dc) < 1e-6);

    // disc chain with radial slits
    conformal::SlitMapChain rchain;
    for (int i = 0; i < 10; ++i) rchain.append(conformal::make_radial_slit(0.3 * i, 0.01));
    const Complex zd{-0.35, 0.48};
    Complex dr(0, 0);
    rchain.eval(zd, &dr);
    const Complex fdr =
        (rchain.eval(zd + Complex(h, 0)) - rchain.eval(zd - Complex(h, 0))) / (2 * h);
    CHECK(std::abs(dr - fdr) / std::abs(dr) < 1e-6);

    // inverse round trip
    const Complex img = rchain.eval(zd);
    CHECK(std::abs(rchain.eval_inverse(img) - zd) < 1e-10);
}

TEST_CASE("radial slit map: boundary angles, tip, antipode") {
    const double dcap = 0.04;
    // antipode of the attack point is fixed with derivative e^{-dcap/2}
    Complex d(0, 0);
    const Complex anti = conformal::radial_slit_map(0.0, dcap, {-1, 0}, &d);
    CHECK(std::abs(anti - Complex(-1, 0)) < 1e-12);
    CHECK(std::abs(d - Complex(std::exp(-0.5 * dcap), 0)) < 1e-10);
    // tip maps to the attack point under the forward map
    const Complex tip = std::polar(conformal::radial_slit_tip_radius(dcap), 0.0);
    const Complex tip_img = conformal::radial_slit_map(0.0, dcap, tip);
    CHECK(std::abs(tip_img - Complex(1, 0)) < 1e-7);
    // capacity/radius inversion
    CHECK(conformal::radial_capacity_of_radius(conformal::radial_slit_tip_radius(0.3)) ==
          doctest::Approx(0.3).epsilon(1e-12));
    // boundary angle map agrees with the complex evaluation
    for (double y : {0.4, 1.2, 3.0, -2.0}) {
        double dyd = 0;
        const double yp = conformal::radial_slit_map_angle(0.0, dcap, y, &dyd);
        const Complex w = conformal::radial_slit_map(0.0, dcap, std::polar(1.0, y));
        CHECK(std::abs(std::polar(1.0, yp) - w) < 1e-12);
        CHECK(std::abs(std::abs(w)) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(dyd > 0);
    }
}

TEST_CASE("zipper: exact vertical slit in the half-plane") {
    // slit [0, 2i]: driver identically zero, capacity-time 1 (hcap = 2)
    std::vector<Complex> arc;
    const int m = 400;
    for (int j = 0; j <= m; ++j) arc.emplace_back(0.0, 2.0 * j / m);
    const auto zr = conformal::zipper_encode(arc, Domain::HalfPlane);
    double total = 0.0;
    for (std::size_t i = 0; i < zr.segment_values.size(); ++i) {
        CHECK(std::abs(zr.segment_values[i]) < 1e-12);
        total += zr.segment_capacities[i];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zipper: exact radial slit in the disc") {
    // straight slit from -1 toward 0: driver identically pi
    std::vector<Complex> arc;
    const int m = 300;
    const double r_end = 0.4;
    for (int j = 0; j <= m; ++j) arc.emplace_back(-(1.0 - (1.0 - r_end) * j / m), 0.0);
    const auto zr = conformal::zipper_encode(arc, Domain::Disc);
    double total = 0.0;
    for (std::size_t i = 0; i < zr.segment_values.size(); ++i) {
        CHECK(std::abs(zr.segment_values[i] - kPi) < 1e-12);
        total += zr.segment_capacities[i];
    }
    CHECK(total == doctest::Approx(conformal::radial_capacity_of_radius(r_end)).epsilon(1e-12));
}

TEST_CASE("zipper: encode-then-retrace round trip on Brownian drivers") {
    const double dt = 1e-3;
    const double T = 0.5;
    const auto n = static_cast<std::size_t>(std::llround(T / dt));

    // each recovered slit spans one capacity segment; its value estimates the
    // driver at the segment's capacity midpoint
    auto sup_error = [](const conformal::ZipperResult& zr, const DrivingPath& path) {
        double sup = 0.0, t = 0.0;
        for (std::size_t k = 0; k < zr.segment_values.size(); ++k) {
            const double mid = t + 0.5 * zr.segment_capacities[k];
            if (mid > path.horizon()) break;
            sup = std::max(sup, std::abs(zr.segment_values[k] - path.value(mid)));
            t += zr.segment_capacities[k];
        }
        return sup;
    };
    SUBCASE("radial") {
        Rng rng(11);
        std::vector<double> w(n + 1, kPi);
        for (std::size_t k = 1; k <= n; ++k) w[k] = w[k - 1] + std::sqrt(dt) * rng.gaussian();
        const DrivingPath path(dt, w);
        const auto tr = loewner::extract_trace(path, Domain::Disc, -1.0);
        const auto zr = conformal::zipper_encode(tr.points, Domain::Disc, dt);
        CHECK(sup_error(zr, path) < 5e-2);
    }
    SUBCASE("chordal") {
        Rng rng(12);
        std::vector<double> w(n + 1, 0.0);
        for (std::size_t k = 1; k <= n; ++k) w[k] = w[k - 1] + std::sqrt(dt) * rng.gaussian();
        const DrivingPath path(dt, w);
        const auto tr = loewner::extract_trace(path, Domain::HalfPlane, -1.0);
        const auto zr = conformal::zipper_encode(tr.points, Domain::HalfPlane, dt);
        CHECK(sup_error(zr, path) < 5e-2);
    }
}

TEST_CASE("A_eps composition: fixed points and capacity limit") {
    // per-step capacity log|f'_{x,eps}(i)| = 2 eps^2/(1+x^2)^2 + O(eps^4), so
    // with N = ceil(eps^-2) the composition capacity converges to
    // 2/(1+x^2)^2 = (1+cos theta)^2 / 2; at x = 1 the limit is 1/2.
    double prev_err = 1e9;
    for (double eps : {0.2, 0.1, 0.05}) {
        const auto a = conformal::build_A_eps(1.0, eps);
        const Complex f0 = a.chain.eval({0, 0});
        const Complex fi = a.chain.eval({0, 1});
        CHECK(std::abs(f0) < 1e-9);
        CHECK(std::abs(fi - Complex(0, 1)) < 1e-9);
        const double err = std::abs(a.capacity_from_i - 0.5);
        CHECK(err < prev_err);
        CHECK(err < eps);
        prev_err = err;
    }
    for (double x : {0.5, 2.0}) {
        const auto a = conformal::build_A_eps(x, 1e-2);
        CHECK(a.capacity_from_i == doctest::Approx(2.0 / sqr(1.0 + x * x)).epsilon(1e-3));
    }
    // one-iteration sanity: large eps keeps N small
    const auto small = conformal::build_A_eps(0.5, 0.45);
    CHECK(small.n_iterations == 5);
}

TEST_CASE("A_eps hull boundary approaches the perfect curve") {
    // limit curve: the perfect curve from x of capacity 2/(1+x^2)^2, pushed
    // to H through phi0; the hull-to-curve Hausdorff gap scales like eps
    const auto disc_trace = loewner::extract_trace(sle::perfect_driver(kPi / 2, 0.5, 1e-4),
                                                   Domain::Disc, -1.0, {10, 0, -1});
    std::vector<Complex> target;
    for (const auto& p : disc_trace.points)
        target.push_back(conformal::cayley_disc_to_halfplane(p));
    double prev = 1e9;
    for (double eps : {0.2, 0.1, 0.05}) {
        const auto pts = conformal::a_eps_hull_boundary(1.0, eps);
        const double dh = geom::hausdorff_distance(pts, target);
        CHECK(dh < prev);
        CHECK(dh < 1.5 * eps);
        prev = dh;
    }
}

} // TEST_SUITE
