#include "rcr/hulls.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rcr/conformal.hpp"
#include "rcr/geometry.hpp"
#include "rcr/loewner.hpp"
#include "rcr/sle.hpp"

namespace rcr::sampler {

namespace {

// Close a region hull's polygon along the unit circle on the side away
// from the point 1.
std::vector<Complex> close_polygon_along_circle(const std::vector<Complex>& arc) {
    std::vector<Complex> poly = arc;
    const double a_start = std::arg(arc.front());
    const double a_end = std::arg(arc.back());
    // walk from a_end back to a_start along the circular side not containing 0
    double span = wrap_two_pi(a_start - a_end); // ccw length end -> start
    bool ccw = true;
    if (wrap_two_pi(0.0 - a_end) < span) {
        // ccw walk would cross angle 0; go clockwise instead
        ccw = false;
        span = kTwoPi - span;
    }
    const int n_arc = 24;
    for (int j = 1; j < n_arc; ++j) {
        const double s = span * j / n_arc;
        poly.push_back(std::polar(1.0, a_end + (ccw ? s : -s)));
    }
    return poly;
}

} // namespace

HullGeometry hull_from_perfect(double theta, double t, int npts) {
    if (!(t > 0.0)) throw ValidationError("hull_from_perfect: capacity must be > 0");
    HullGeometry h;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "perfect:%g,%g", theta, t);
    h.id = buf;
    h.is_slit = true;
    const int fine = std::max(2000, 20 * npts);
    const double dtf = t / fine;
    const DrivingPath w = sle::perfect_driver(theta, t, dtf);
    loewner::TraceOptions opts;
    opts.stride = std::max(1, fine / (8 * npts));
    const auto tr = loewner::extract_trace(w, conformal::Domain::Disc, -1.0, opts);
    // equal arclength spacing (capacity spacing crowds the tip, sqrt-gaps the base)
    h.arc = geom::resample_polyline(tr.points, static_cast<std::size_t>(npts));
    h.polygon = h.arc;
    h.d0 = std::exp(t);
    h.d1 = std::exp(-t / (1.0 - std::cos(theta)));
    return h;
}

HullGeometry hull_from_halfdisc(double x, double eps, int npts) {
    HullGeometry h;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "halfdisc:%g,%g", x, eps);
    h.id = buf;
    h.is_slit = false;
    h.arc.reserve(npts + 1);
    for (int j = 0; j <= npts; ++j) {
        const double phi = kPi * j / npts;
        h.arc.push_back(conformal::cayley_halfplane_to_disc(x + eps * std::polar(1.0, phi)));
    }
    Complex di(1, 0), dz(1, 0);
    conformal::halfdisc_fixed_map(x, eps, Complex(0, 1), &di);
    conformal::halfdisc_fixed_map(x, eps, Complex(0, 0), &dz);
    h.d0 = std::abs(di);
    h.d1 = dz.real();
    h.polygon = close_polygon_along_circle(h.arc);
    return h;
}

HullGeometry hull_from_polyline(std::vector<Complex> arc, const std::string& id) {
    if (arc.size() < 3) throw ValidationError("hull_from_polyline: need at least 3 points");
    HullGeometry h;
    h.id = id;
    h.arc = std::move(arc);
    const bool closes = std::abs(std::abs(h.arc.back()) - 1.0) < 1e-7;
    h.is_slit = !closes;
    h.polygon = closes ? close_polygon_along_circle(h.arc) : h.arc;
    const auto chain = hull_phi_chain(h);
    h.d0 = std::exp(chain.capacity());
    Complex d1c(1, 0);
    chain.eval(Complex(1, 0), &d1c);
    h.d1 = std::abs(d1c);
    return h;
}

conformal::SlitMapChain hull_phi_chain(const HullGeometry& hull, double resample_dt) {
    std::vector<Complex> arc;
    arc.reserve(hull.arc.size());
    for (std::size_t i = 0; i < hull.arc.size(); ++i) {
        const Complex& p = hull.arc[i];
        if (i == 0 || std::abs(p) < 1.0 - 1e-9) arc.push_back(p);
    }
    auto zr = conformal::zipper_encode(arc, conformal::Domain::Disc, resample_dt);
    conformal::normalize_fix_one(zr.chain);
    return zr.chain;
}

double parse_angle(const std::string& text) {
    // numeric literal, or "pi", "pi/2", "3pi/4", "2pi/3" style expressions
    const auto pos = text.find("pi");
    if (pos == std::string::npos) {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw ValidationError("bad angle: " + text);
        return v;
    }
    double mult = 1.0;
    if (pos > 0) mult = std::stod(text.substr(0, pos));
    double div = 1.0;
    if (pos + 2 < text.size()) {
        if (text[pos + 2] != '/') throw ValidationError("bad angle: " + text);
        div = std::stod(text.substr(pos + 3));
    }
    return mult * kPi / div;
}

HullGeometry parse_hull(const std::string& descriptor) {
    const auto colon = descriptor.find(':');
    if (colon == std::string::npos)
        throw ValidationError("hull descriptor needs kind:params, got " + descriptor);
    const std::string kind = descriptor.substr(0, colon);
    const std::string rest = descriptor.substr(colon + 1);
    if (kind == "perfect" || kind == "halfdisc") {
        const auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw ValidationError("hull descriptor needs two parameters: " + descriptor);
        const std::string p1 = rest.substr(0, comma);
        const std::string p2 = rest.substr(comma + 1);
        if (kind == "perfect") return hull_from_perfect(parse_angle(p1), std::stod(p2));
        return hull_from_halfdisc(std::stod(p1), std::stod(p2));
    }
    if (kind == "polyline") {
        std::ifstream in(rest);
        if (!in) throw ValidationError("cannot open polyline file: " + rest);
        std::vector<Complex> pts;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line.find("re") == 0) continue;
            std::istringstream ss(line);
            double re, im;
            char comma;
            if (ss >> re >> comma >> im) pts.emplace_back(re, im);
        }
        return hull_from_polyline(std::move(pts), "polyline:" + rest);
    }
    throw ValidationError("unknown hull kind: " + kind);
}

} // namespace rcr::sampler
