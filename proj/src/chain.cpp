#include "rcr/chain.hpp"

#include <cmath>

#include "rcr/slit_maps.hpp"

namespace rcr::conformal {

MobiusTransform halfdisc_normalizer(double x, double eps) {
    if (!(eps > 0.0 && eps < std::abs(x)))
        throw ValidationError("halfdisc_normalizer: require 0 < eps < |x|");
    const double e2 = eps * eps;
    const double a = -e2 * x / (1.0 + x * x); // Re g(i)
    const double b = 1.0 - e2 / (1.0 + x * x); // Im g(i)
    const double c = -e2 / x;                  // g(0)
    // m(w) = b (w - c) / (b^2 + (c - a)(w - a))
    MobiusTransform m;
    m.a = Complex(b, 0);
    m.b = Complex(-b * c, 0);
    m.c = Complex(c - a, 0);
    m.d = Complex(b * b - (c - a) * a, 0);
    return m;
}

SlitElement make_chordal_slit(double xi, double dcap) {
    SlitElement e;
    e.kind = MapKind::ChordalSlit;
    e.p1 = xi;
    e.p2 = dcap;
    return e;
}

SlitElement make_radial_slit(double theta, double dcap) {
    SlitElement e;
    e.kind = MapKind::RadialSlit;
    e.p1 = theta;
    e.p2 = dcap;
    return e;
}

SlitElement make_halfdisc(double x, double eps) {
    SlitElement e;
    e.kind = MapKind::HalfDisc;
    e.p1 = x;
    e.p2 = eps;
    return e;
}

SlitElement make_halfdisc_fixed(double x, double eps, long repeat) {
    SlitElement e;
    e.kind = MapKind::HalfDiscFixed;
    e.p1 = x;
    e.p2 = eps;
    e.repeat = repeat;
    e.mob = halfdisc_normalizer(x, eps);
    return e;
}

SlitElement make_mobius(const MobiusTransform& m) {
    SlitElement e;
    e.kind = MapKind::Mobius;
    e.mob = m;
    return e;
}

double SlitElement::capacity() const {
    switch (kind) {
        case MapKind::ChordalSlit:
        case MapKind::RadialSlit:
            return p2;
        default:
            return 0.0;
    }
}

Complex SlitElement::apply(const Complex& z, Complex* deriv) const {
    switch (kind) {
        case MapKind::ChordalSlit:
            return chordal_slit_map(p1, p2, z, deriv);
        case MapKind::RadialSlit:
            return radial_slit_map(p1, p2, z, deriv);
        case MapKind::HalfDisc:
            return halfdisc_map(p1, p2, z, deriv);
        case MapKind::HalfDiscFixed: {
            Complex w = z;
            Complex total(1, 0);
            for (long k = 0; k < repeat; ++k) {
                Complex dg(1, 0);
                w = halfdisc_map(p1, p2, w, deriv ? &dg : nullptr);
                if (deriv) {
                    total *= dg * mob.derivative(w);
                }
                w = mob.apply(w);
            }
            if (deriv) *deriv = total;
            return w;
        }
        case MapKind::Mobius: {
            if (deriv) *deriv = mob.derivative(z);
            return mob.apply(z);
        }
    }
    throw NumericError("SlitElement::apply: bad kind");
}

Complex SlitElement::apply_inverse(const Complex& z) const {
    switch (kind) {
        case MapKind::ChordalSlit:
            return chordal_slit_inverse(p1, p2, z);
        case MapKind::RadialSlit:
            return radial_slit_inverse(p1, p2, z);
        case MapKind::HalfDisc:
            return halfdisc_inverse(p1, p2, z);
        case MapKind::HalfDiscFixed: {
            Complex w = z;
            const MobiusTransform minv = mob.inverse();
            for (long k = 0; k < repeat; ++k) {
                w = minv.apply(w);
                w = halfdisc_inverse(p1, p2, w);
            }
            return w;
        }
        case MapKind::Mobius:
            return mob.inverse().apply(z);
    }
    throw NumericError("SlitElement::apply_inverse: bad kind");
}

Complex SlitMapChain::eval(const Complex& z, Complex* deriv) const {
    Complex w = z;
    Complex total(1, 0);
    for (const auto& e : elems) {
        Complex d(1, 0);
        w = e.apply(w, deriv ? &d : nullptr);
        if (deriv) total *= d;
        if (!finite(w)) throw DomainError("SlitMapChain::eval: non-finite intermediate image");
    }
    if (!post.is_identity(0.0)) {
        if (deriv) total *= post.derivative(w);
        w = post.apply(w);
    }
    if (deriv) *deriv = total;
    return w;
}

Complex SlitMapChain::eval_inverse(const Complex& z) const {
    Complex w = z;
    if (!post.is_identity(0.0)) w = post.inverse().apply(w);
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
        w = it->apply_inverse(w);
        if (!finite(w)) throw DomainError("SlitMapChain::eval_inverse: non-finite intermediate image");
    }
    return w;
}

double SlitMapChain::capacity() const {
    double c = 0.0;
    for (const auto& e : elems) c += e.capacity();
    return c;
}

} // namespace rcr::conformal
