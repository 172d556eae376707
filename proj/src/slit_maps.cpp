#include "rcr/slit_maps.hpp"

#include <cmath>

namespace rcr::conformal {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kAntipodeCut = 0.05;

inline Complex koebe(const Complex& w) {
    const Complex o = 1.0 + w;
    return w / (o * o);
}

inline Complex koebe_deriv(const Complex& w) {
    const Complex o = 1.0 + w;
    return (1.0 - w) / (o * o * o);
}

// Root of zeta*w^2 + (2*zeta - 1)*w + zeta = 0 (i.e. K(w) = zeta) lying in
// the closed unit disc. Rationalized form avoids cancellation at small zeta;
// the two roots have product 1.
inline Complex koebe_inverse_in_disc(const Complex& zeta) {
    if (zeta == Complex(0, 0)) return {0, 0};
    const Complex s = std::sqrt(1.0 - 4.0 * zeta);
    Complex w = 2.0 * zeta / ((1.0 - 2.0 * zeta) + s);
    if (std::norm(w) > 1.0) w = 1.0 / w;
    return w;
}

// Solve K(-1 + sig) = factor * K(-1 + s) for sig near 0; stable when the
// input sits close to the antipode of the attack point. Picks the branch
// with sig ~ s / sqrt(factor).
inline Complex antipode_shift(const Complex& s, double factor) {
    const Complex one_m_s = 1.0 - s;
    const Complex disc = s * s / factor + 4.0 * one_m_s / factor;
    const Complex root = std::sqrt(disc);
    return s * (-s / factor + root) / (2.0 * one_m_s);
}

// value + derivative of w -> K^{-1}(factor*K(w)) (rotated frame of the
// radial slit map); factor = e^{dcap} forward, e^{-dcap} inverse.
inline Complex radial_core(const Complex& u, double factor, Complex* deriv) {
    Complex w;
    if (std::abs(1.0 + u) < kAntipodeCut) {
        const Complex s = 1.0 + u;
        const Complex sig = antipode_shift(s, factor);
        w = -1.0 + sig;
        if (deriv) {
            const Complex ratio = sig / s;
            *deriv = factor * (2.0 - s) * ratio * ratio * ratio / (2.0 - sig);
        }
        return w;
    }
    const Complex zeta = factor * koebe(u);
    w = koebe_inverse_in_disc(zeta);
    if (deriv) *deriv = factor * koebe_deriv(u) / koebe_deriv(w);
    return w;
}

} // namespace

Complex chordal_slit_map(double xi, double dcap, const Complex& z, Complex* deriv) {
    const Complex d = z - xi;
    const Complex v = d * d + 4.0 * dcap;
    Complex s = std::sqrt(v);
    if (std::abs(z.imag()) > 0.0) {
        if (s.imag() < 0.0) s = -s;
    } else {
        if (d.real() < 0.0) s = -s;
    }
    if (deriv) *deriv = (s == Complex(0, 0)) ? Complex(0, 0) : d / s;
    return xi + s;
}

Complex chordal_slit_inverse(double xi, double dcap, const Complex& z, Complex* deriv) {
    const Complex d = z - xi;
    const Complex v = d * d - 4.0 * dcap;
    Complex s = std::sqrt(v);
    if (z.imag() > 0.0 || v.real() < 0.0) {
        if (s.imag() < 0.0) s = -s;
    } else {
        if (d.real() < 0.0) s = -s;
    }
    if (deriv) {
        if (s == Complex(0, 0)) throw DomainError("chordal_slit_inverse: derivative at slit base");
        *deriv = d / s;
    }
    return xi + s;
}

double radial_slit_map_angle(double theta, double dcap, double y, double* dyd) {
    const double a = wrap_pi(y - theta);
    const double f = std::exp(-0.5 * dcap);
    const double ca = std::cos(0.5 * std::abs(a));
    double arg = f * ca;
    if (arg > 1.0) arg = 1.0;
    const double ap = 2.0 * std::acos(arg);
    if (dyd) {
        const double sp = std::sin(0.5 * ap);
        if (sp <= 0.0) throw DomainError("radial_slit_map_angle: boundary point at slit base");
        *dyd = f * std::sin(0.5 * std::abs(a)) / sp;
    }
    const double signed_ap = (a >= 0.0) ? ap : -ap;
    return y + (signed_ap - a);
}

Complex radial_slit_map(double theta, double dcap, const Complex& z, Complex* deriv) {
    const double r2 = std::norm(z);
    if (std::abs(r2 - 1.0) < kBoundaryTol) {
        double dyd = 0;
        const double y = std::arg(z);
        const double yp = radial_slit_map_angle(theta, dcap, y, deriv ? &dyd : nullptr);
        const Complex w = std::polar(1.0, yp);
        if (deriv) *deriv = std::polar(dyd, yp - y);
        return w;
    }
    const Complex rot = std::polar(1.0, theta);
    const Complex u = z / rot;
    const Complex w = radial_core(u, std::exp(dcap), deriv);
    return w * rot;
}

Complex radial_slit_inverse(double theta, double dcap, const Complex& z, Complex* deriv) {
    const double r2 = std::norm(z);
    if (std::abs(r2 - 1.0) < kBoundaryTol) {
        // Boundary welding: points with e^{dcap/2} cos(a/2) <= 1 stay on the
        // circle; the rest land on the slit itself.
        const double y = std::arg(z);
        const double a = wrap_pi(y - theta);
        const double f = std::exp(0.5 * dcap);
        const double arg = f * std::cos(0.5 * std::abs(a));
        if (arg <= 1.0) {
            const double ap = 2.0 * std::acos(arg);
            const double signed_ap = (a >= 0.0) ? ap : -ap;
            if (deriv) {
                const double sp = std::sin(0.5 * ap);
                if (sp <= 0.0) throw DomainError("radial_slit_inverse: slit endpoint");
                *deriv = std::polar(f * std::sin(0.5 * std::abs(a)) / sp, signed_ap - a);
            }
            return std::polar(1.0, theta + signed_ap);
        }
        // On-slit image at radius r with K(r) = e^{-dcap} K(e^{ia}).
        const double q = std::exp(-dcap) / (4.0 * sqr(std::cos(0.5 * a)));
        const double A = 1.0 / q - 2.0;
        const double r = 2.0 / (A + std::sqrt(A * A - 4.0));
        if (deriv) throw DomainError("radial_slit_inverse: derivative on welded slit");
        return std::polar(r, theta);
    }
    const Complex rot = std::polar(1.0, theta);
    const Complex u = z / rot;
    const Complex w = radial_core(u, std::exp(-dcap), deriv);
    return w * rot;
}

double radial_slit_tip_radius(double dcap) {
    const double A = 4.0 * std::exp(dcap) - 2.0;
    return 2.0 / (A + std::sqrt(A * A - 4.0));
}

double radial_capacity_of_radius(double r) {
    if (!(r > 0.0 && r < 1.0))
        throw DomainError("radial_capacity_of_radius: radius outside (0,1)");
    return std::log1p(sqr(1.0 - r) / (4.0 * r));
}

Complex halfdisc_map(double x, double eps, const Complex& z, Complex* deriv) {
    if (!(eps > 0.0 && eps < std::abs(x)))
        throw ValidationError("halfdisc_map: require 0 < eps < |x|");
    const Complex d = z - x;
    if (std::norm(d) < sqr(eps) * (1.0 - 1e-12))
        throw DomainError("halfdisc_map: point inside excluded half-disc");
    if (deriv) *deriv = 1.0 - sqr(eps) / (d * d);
    return z + sqr(eps) / d;
}

Complex halfdisc_inverse(double x, double eps, const Complex& z, Complex* deriv) {
    if (!(eps > 0.0 && eps < std::abs(x)))
        throw ValidationError("halfdisc_inverse: require 0 < eps < |x|");
    const Complex d = z - x;
    Complex s = std::sqrt(d * d - 4.0 * sqr(eps));
    // branch: s close to d, so the map is ~identity far away
    if (std::norm(s - d) > std::norm(s + d)) s = -s;
    const Complex w = 0.5 * (z + x + s);
    if (deriv) {
        const Complex dd = w - x;
        const Complex gp = 1.0 - sqr(eps) / (dd * dd);
        if (gp == Complex(0, 0)) throw DomainError("halfdisc_inverse: derivative at slit tip");
        *deriv = 1.0 / gp;
    }
    return w;
}

} // namespace rcr::conformal
