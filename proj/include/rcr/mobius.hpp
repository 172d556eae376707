#ifndef RCR_MOBIUS_HPP
#define RCR_MOBIUS_HPP

#include <algorithm>
#include <cmath>

#include "rcr/numeric.hpp"

namespace rcr {

// z -> (a z + b) / (c z + d), ad - bc != 0.
struct MobiusTransform {
    Complex a{1.0, 0.0};
    Complex b{0.0, 0.0};
    Complex c{0.0, 0.0};
    Complex d{1.0, 0.0};

    static MobiusTransform identity() { return {}; }

    static MobiusTransform rotation(double phi) {
        return {std::polar(1.0, phi), {0, 0}, {0, 0}, {1, 0}};
    }

    // Cayley transform phi0(z) = i(1-z)/(1+z): disc -> half-plane,
    // 1 -> 0, 0 -> i, -1 -> infinity.
    static MobiusTransform cayley() {
        return {Complex(0, -1), Complex(0, 1), Complex(1, 0), Complex(1, 0)};
    }

    Complex det() const { return a * d - b * c; }

    Complex apply(const Complex& z) const {
        const Complex den = c * z + d;
        if (den == Complex(0, 0))
            throw DomainError("mobius: pole at input point");
        return (a * z + b) / den;
    }

    Complex derivative(const Complex& z) const {
        const Complex den = c * z + d;
        if (den == Complex(0, 0))
            throw DomainError("mobius: pole at input point");
        return det() / (den * den);
    }

    MobiusTransform inverse() const {
        return MobiusTransform{d, -b, -c, a}.normalized();
    }

    // this after other: z -> this(other(z)).
    MobiusTransform compose(const MobiusTransform& other) const {
        return MobiusTransform{a * other.a + b * other.c, a * other.b + b * other.d,
                               c * other.a + d * other.c, c * other.b + d * other.d}
            .normalized();
    }

    MobiusTransform normalized() const {
        const double m = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
        if (m == 0.0 || !std::isfinite(m)) return *this;
        return {a / m, b / m, c / m, d / m};
    }

    bool is_identity(double tol = 0.0) const {
        const MobiusTransform n = normalized();
        return std::abs(n.b) <= tol && std::abs(n.c) <= tol && std::abs(n.a - n.d) <= tol;
    }
};

} // namespace rcr

#endif
