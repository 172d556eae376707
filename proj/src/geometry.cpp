#include "rcr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rcr::geom {

BoundingBox bounding_box(const std::vector<Complex>& pts) {
    BoundingBox b;
    if (pts.empty()) return b;
    b.xmin = b.xmax = pts[0].real();
    b.ymin = b.ymax = pts[0].imag();
    for (const auto& p : pts) {
        b.xmin = std::min(b.xmin, p.real());
        b.xmax = std::max(b.xmax, p.real());
        b.ymin = std::min(b.ymin, p.imag());
        b.ymax = std::max(b.ymax, p.imag());
    }
    return b;
}

namespace {

inline double cross(const Complex& o, const Complex& a, const Complex& b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
}

inline bool on_segment(const Complex& a, const Complex& b, const Complex& p, double eps) {
    if (std::abs(cross(a, b, p)) > eps * (std::abs(b - a) + 1.0)) return false;
    const double dot = (p.real() - a.real()) * (b.real() - a.real()) +
                       (p.imag() - a.imag()) * (b.imag() - a.imag());
    return dot >= -eps && dot <= std::norm(b - a) + eps;
}

} // namespace

bool segments_intersect(const Complex& a, const Complex& b, const Complex& c, const Complex& d,
                        double eps) {
    const double d1 = cross(c, d, a);
    const double d2 = cross(c, d, b);
    const double d3 = cross(a, b, c);
    const double d4 = cross(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    return on_segment(c, d, a, eps) || on_segment(c, d, b, eps) || on_segment(a, b, c, eps) ||
           on_segment(a, b, d, eps);
}

int winding_number(const std::vector<Complex>& poly, const Complex& p) {
    int wn = 0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex& a = poly[i];
        const Complex& b = poly[(i + 1) % n];
        if (a.imag() <= p.imag()) {
            if (b.imag() > p.imag() && cross(a, b, p) > 0) ++wn;
        } else {
            if (b.imag() <= p.imag() && cross(a, b, p) < 0) --wn;
        }
    }
    return wn;
}

bool point_in_polygon(const std::vector<Complex>& poly, const Complex& p, double eps) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (on_segment(poly[i], poly[(i + 1) % n], p, eps)) return true;
    }
    return winding_number(poly, p) != 0;
}

bool polylines_cross(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.size() < 2 || b.size() < 2) return false;
    const BoundingBox ba = bounding_box(a);
    const BoundingBox bb = bounding_box(b);
    if (!ba.overlaps(bb)) return false;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        for (std::size_t j = 0; j + 1 < b.size(); ++j) {
            if (segments_intersect(a[i], a[i + 1], b[j], b[j + 1])) return true;
        }
    }
    return false;
}

double hausdorff_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    auto directed = [](const std::vector<Complex>& u, const std::vector<Complex>& v) {
        double worst = 0.0;
        for (const auto& p : u) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : v) best = std::min(best, std::abs(p - q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

std::vector<Complex> dedupe_polyline(const std::vector<Complex>& pts, double tol) {
    std::vector<Complex> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
        if (out.empty() || std::abs(p - out.back()) > tol) out.push_back(p);
    }
    return out;
}

std::vector<Complex> resample_polyline(const std::vector<Complex>& pts, std::size_t n) {
    if (pts.size() < 2 || n < 2) return pts;
    std::vector<double> cum(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i)
        cum[i] = cum[i - 1] + std::abs(pts[i] - pts[i - 1]);
    const double total = cum.back();
    if (total <= 0.0) return {pts.front(), pts.back()};
    std::vector<Complex> out;
    out.reserve(n);
    std::size_t j = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double s = total * static_cast<double>(k) / static_cast<double>(n - 1);
        while (j + 1 < cum.size() && cum[j + 1] < s) ++j;
        if (j + 1 >= pts.size()) {
            out.push_back(pts.back());
            continue;
        }
        const double seg = cum[j + 1] - cum[j];
        const double frac = seg > 0 ? (s - cum[j]) / seg : 0.0;
        out.push_back(pts[j] * (1.0 - frac) + pts[j + 1] * frac);
    }
    return out;
}

} // namespace rcr::geom
