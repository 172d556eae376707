#include "doctest.h"
#include "rcr/geometry.hpp"

using namespace rcr;

TEST_SUITE("geometry") {

TEST_CASE("segment intersection") {
    CHECK(geom::segments_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0}));
    CHECK(!geom::segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
    // touching endpoints count
    CHECK(geom::segments_intersect({0, 0}, {1, 0}, {1, 0}, {1, 1}));
    // collinear overlap
    CHECK(geom::segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));
}

TEST_CASE("winding and containment") {
    const std::vector<Complex> square = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    CHECK(geom::winding_number(square, {0, 0}) == 1);
    CHECK(geom::winding_number(square, {2, 0}) == 0);
    CHECK(geom::point_in_polygon(square, {0.5, 0.5}));
    CHECK(geom::point_in_polygon(square, {1, 0}));   // on the boundary
    CHECK(!geom::point_in_polygon(square, {1.5, 0}));
}

TEST_CASE("polyline crossing and hausdorff") {
    const std::vector<Complex> a = {{0, 0}, {1, 0}, {2, 1}};
    const std::vector<Complex> b = {{1, -1}, {1, 1}};
    const std::vector<Complex> c = {{5, 5}, {6, 6}};
    CHECK(geom::polylines_cross(a, b));
    CHECK(!geom::polylines_cross(a, c));
    CHECK(geom::hausdorff_distance(a, a) == doctest::Approx(0.0));
    CHECK(geom::hausdorff_distance({{0, 0}}, {{3, 4}}) == doctest::Approx(5.0));
}

TEST_CASE("dedupe and resample") {
    const std::vector<Complex> pts = {{0, 0}, {0, 0}, {1, 0}, {1, 1e-9}, {2, 0}};
    const auto d = geom::dedupe_polyline(pts, 1e-6);
    CHECK(d.size() == 3);
    const auto r = geom::resample_polyline({{0, 0}, {2, 0}}, 5);
    REQUIRE(r.size() == 5);
    CHECK(std::abs(r[2] - Complex(1, 0)) < 1e-12);
}

} // TEST_SUITE
