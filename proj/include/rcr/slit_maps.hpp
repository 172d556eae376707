#ifndef RCR_SLIT_MAPS_HPP
#define RCR_SLIT_MAPS_HPP

#include "rcr/numeric.hpp"

namespace rcr::conformal {

// --- chordal elementary slit map -------------------------------------------
//
// Constant-driver solution of the chordal Loewner ODE over capacity-time
// dcap: g(z) = xi + sqrt((z-xi)^2 + 4*dcap) removes the vertical slit
// [xi, xi + 2i*sqrt(dcap)] from H (hcap = 2*dcap).
Complex chordal_slit_map(double xi, double dcap, const Complex& z, Complex* deriv = nullptr);
Complex chordal_slit_inverse(double xi, double dcap, const Complex& z, Complex* deriv = nullptr);

// --- radial elementary slit map ---------------------------------------------
//
// Constant-driver solution of the radial Loewner ODE: with K(w) = w/(1+w)^2,
// the map g with K(e^{-i theta} g(z)) = e^{dcap} K(e^{-i theta} z) removes the
// straight slit [r e^{i theta}, e^{i theta}] from U, fixes 0 and has
// g'(0) = e^{dcap}.
Complex radial_slit_map(double theta, double dcap, const Complex& z, Complex* deriv = nullptr);
Complex radial_slit_inverse(double theta, double dcap, const Complex& z, Complex* deriv = nullptr);

// Boundary specialization: absolute angle y -> image angle, exactly on the
// circle. dyd (optional) receives dy'/dy > 0.
double radial_slit_map_angle(double theta, double dcap, double y, double* dyd = nullptr);

// Tip radius r(dcap) of the slit (K(r) = e^{-dcap}/4) and its inverse.
double radial_slit_tip_radius(double dcap);
double radial_capacity_of_radius(double r);

// --- half-disc map -----------------------------------------------------------
//
// g_{x,eps}(z) = z + eps^2/(z - x): H \ B(x,eps) -> H, hydrodynamically
// normalized at infinity. Requires 0 < eps < |x| and |z - x| >= eps.
Complex halfdisc_map(double x, double eps, const Complex& z, Complex* deriv = nullptr);
Complex halfdisc_inverse(double x, double eps, const Complex& z, Complex* deriv = nullptr);

} // namespace rcr::conformal

#endif
