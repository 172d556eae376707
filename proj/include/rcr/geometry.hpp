#ifndef RCR_GEOMETRY_HPP
#define RCR_GEOMETRY_HPP

#include <vector>

#include "rcr/numeric.hpp"

namespace rcr::geom {

struct BoundingBox {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool overlaps(const BoundingBox& o, double pad = 0.0) const {
        return xmin - pad <= o.xmax && o.xmin - pad <= xmax && ymin - pad <= o.ymax &&
               o.ymin - pad <= ymax;
    }
};

BoundingBox bounding_box(const std::vector<Complex>& pts);

bool segments_intersect(const Complex& a, const Complex& b, const Complex& c, const Complex& d,
                        double eps = 1e-12);

// Winding number of a closed polyline about p (last->first edge implied).
int winding_number(const std::vector<Complex>& poly, const Complex& p);

// Winding-rule containment; points on the boundary count as inside within eps.
bool point_in_polygon(const std::vector<Complex>& poly, const Complex& p, double eps = 1e-12);

// Any edge of a (open) crosses any edge of b (open).
bool polylines_cross(const std::vector<Complex>& a, const std::vector<Complex>& b);

// Directed/symmetric Hausdorff distance between point sets (segment-blind;
// callers densify their polylines).
double hausdorff_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

// Collapse consecutive vertices closer than tol (snap-rounding repair).
std::vector<Complex> dedupe_polyline(const std::vector<Complex>& pts, double tol);

// Resample a polyline to n points equally spaced in arclength.
std::vector<Complex> resample_polyline(const std::vector<Complex>& pts, std::size_t n);

} // namespace rcr::geom

#endif
