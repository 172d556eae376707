#include "rcr/conformal.hpp"

#include <cmath>
#include <string>

#include "rcr/slit_maps.hpp"

namespace rcr::conformal {

Complex cayley_disc_to_halfplane(const Complex& z) {
    const Complex den = 1.0 + z;
    if (std::abs(den) < 1e-300)
        throw DomainError("cayley: pole at z = -1");
    return Complex(0, 1) * (1.0 - z) / den;
}

Complex cayley_halfplane_to_disc(const Complex& z) {
    const Complex den = Complex(0, 1) + z;
    if (std::abs(den) < 1e-300)
        throw DomainError("cayley inverse: pole at z = -i");
    return (Complex(0, 1) - z) / den;
}

MobiusTransform normalize_fix_0_i(double x, double eps) {
    return halfdisc_normalizer(x, eps);
}

Complex halfdisc_fixed_map(double x, double eps, const Complex& z, Complex* deriv) {
    const MobiusTransform m = halfdisc_normalizer(x, eps);
    Complex dg(1, 0);
    const Complex w = halfdisc_map(x, eps, z, deriv ? &dg : nullptr);
    if (deriv) *deriv = dg * m.derivative(w);
    return m.apply(w);
}

AEpsResult build_A_eps(double x, double eps) {
    if (!(eps > 0.0 && eps < std::abs(x)))
        throw ValidationError("build_A_eps: require 0 < eps < |x|");
    const long n = static_cast<long>(std::ceil(1.0 / (eps * eps) - 1e-12));
    AEpsResult out;
    out.n_iterations = n;
    out.chain.domain = Domain::HalfPlane;
    out.chain.append(make_halfdisc_fixed(x, eps, n));
    // i is a fixed point of f_{x,eps}, so the chain derivative at i is
    // f'(i)^n; accumulate its log directly.
    Complex di(1, 0);
    halfdisc_fixed_map(x, eps, Complex(0, 1), &di);
    out.capacity_from_i = static_cast<double>(n) * std::log(std::abs(di));
    return out;
}

std::vector<Complex> a_eps_hull_boundary(double x, double eps, int pts_per_arc) {
    const long n = static_cast<long>(std::ceil(1.0 / (eps * eps) - 1e-12));
    if (n > 4000)
        throw NumericError("a_eps_hull_boundary: too many iterations for geometric extraction");
    const MobiusTransform minv = halfdisc_normalizer(x, eps).inverse();
    std::vector<Complex> semicircle;
    semicircle.reserve(pts_per_arc);
    for (int j = 0; j < pts_per_arc; ++j) {
        const double phi = kPi * (j + 0.5) / pts_per_arc;
        semicircle.push_back(x + eps * std::polar(1.0, phi));
    }
    std::vector<Complex> pts;
    pts.reserve(static_cast<std::size_t>(n) * semicircle.size());
    // arcs of iterate k pulled back through the first k-1 maps
    std::vector<Complex> cur = semicircle;
    for (long k = 0; k < n; ++k) {
        pts.insert(pts.end(), cur.begin(), cur.end());
        if (k + 1 < n) {
            for (auto& p : cur) {
                p = halfdisc_inverse(x, eps, minv.apply(p));
            }
        }
    }
    return pts;
}

ZipperResult zipper_encode(const std::vector<Complex>& arc, Domain domain, double resample_dt) {
    if (arc.size() < 2)
        throw ValidationError("zipper_encode: need at least two arc points");
    ZipperResult out;
    out.chain.domain = domain;

    std::vector<Complex> img(arc.begin() + 1, arc.end());
    const std::size_t m = img.size();
    out.segment_values.reserve(m);
    out.segment_capacities.reserve(m);

    if (domain == Domain::HalfPlane) {
        if (std::abs(arc.front().imag()) > 1e-9)
            throw ValidationError("zipper_encode: arc must start on the real axis");
        for (std::size_t k = 0; k < m; ++k) {
            const Complex w = img[k];
            if (!(w.imag() > 0.0))
                throw NumericError("zipper_encode: vertex " + std::to_string(k + 1) +
                                   " swallowed out of order (left the half-plane)");
            const double xi = w.real();
            const double dc = 0.25 * sqr(w.imag());
            const SlitElement e = make_chordal_slit(xi, dc);
            out.segment_values.push_back(xi);
            out.segment_capacities.push_back(dc);
            out.chain.append(e);
            for (std::size_t j = k + 1; j < m; ++j) img[j] = e.apply(img[j]);
        }
    } else {
        if (std::abs(std::abs(arc.front()) - 1.0) > 1e-9)
            throw ValidationError("zipper_encode: arc must start on the unit circle");
        double prev_theta = std::arg(arc.front());
        for (std::size_t k = 0; k < m; ++k) {
            const Complex w = img[k];
            const double r = std::abs(w);
            if (!(r > 1e-8))
                throw NumericError("zipper_encode: arc passes through the origin");
            if (!(r < 1.0 - 1e-14))
                throw NumericError("zipper_encode: vertex " + std::to_string(k + 1) +
                                   " swallowed out of order (left the disc)");
            double theta = std::arg(w);
            theta += kTwoPi * std::round((prev_theta - theta) / kTwoPi);
            const double dc = radial_capacity_of_radius(r);
            const SlitElement e = make_radial_slit(theta, dc);
            out.segment_values.push_back(theta);
            out.segment_capacities.push_back(dc);
            out.chain.append(e);
            prev_theta = theta;
            for (std::size_t j = k + 1; j < m; ++j) img[j] = e.apply(img[j]);
        }
    }

    // Resample the piecewise-constant driver onto a uniform grid.
    double total = 0.0;
    for (double c : out.segment_capacities) total += c;
    if (total <= 0.0)
        throw NumericError("zipper_encode: arc has zero capacity");
    std::size_t ngrid = static_cast<std::size_t>(std::ceil(total / resample_dt));
    if (ngrid < 2) ngrid = 2;
    const double dt = total / static_cast<double>(ngrid);
    std::vector<double> vals(ngrid + 1);
    std::size_t seg = 0;
    double seg_end = out.segment_capacities[0];
    for (std::size_t k = 0; k <= ngrid; ++k) {
        const double t = dt * static_cast<double>(k);
        while (seg + 1 < out.segment_values.size() && t > seg_end + 1e-15) {
            ++seg;
            seg_end += out.segment_capacities[seg];
        }
        vals[k] = out.segment_values[seg];
    }
    out.driver = DrivingPath(dt, std::move(vals));
    return out;
}

void normalize_fix_one(SlitMapChain& chain) {
    if (chain.domain != Domain::Disc)
        throw ValidationError("normalize_fix_one: disc chains only");
    chain.post = MobiusTransform::identity();
    const Complex w = chain.eval(Complex(1, 0));
    chain.post = MobiusTransform::rotation(-std::arg(w));
}

} // namespace rcr::conformal
