#ifndef RCR_NUMERIC_HPP
#define RCR_NUMERIC_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace rcr {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Input/configuration problems: CLI maps these to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runtime numerical failures (zipper breakdown, overflow guards): exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Domain violations of conformal maps (point outside the map's domain).
struct DomainError : NumericError {
    using NumericError::NumericError;
};

inline bool finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Wrap into (-pi, pi].
inline double wrap_pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    if (a > kPi) a -= kTwoPi;
    return a;
}

// Wrap into [0, 2*pi).
inline double wrap_two_pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
    return a;
}

inline double sqr(double x) { return x * x; }

} // namespace rcr

#endif
