#ifndef RCR_CONFORMAL_HPP
#define RCR_CONFORMAL_HPP

#include <vector>

#include "rcr/chain.hpp"
#include "rcr/driving_path.hpp"
#include "rcr/mobius.hpp"
#include "rcr/numeric.hpp"

namespace rcr::conformal {

// phi0(z) = i(1-z)/(1+z): U -> H, 1 -> 0, 0 -> i.
Complex cayley_disc_to_halfplane(const Complex& z);
Complex cayley_halfplane_to_disc(const Complex& z);

// Mobius part m of f_{x,eps} = m o g_{x,eps}, the map H\B(x,eps) -> H
// preserving 0 and i.
MobiusTransform normalize_fix_0_i(double x, double eps);

// f_{x,eps} with chain-rule derivative.
Complex halfdisc_fixed_map(double x, double eps, const Complex& z, Complex* deriv = nullptr);

struct AEpsResult {
    SlitMapChain chain;      // Phi_eps = f_{x,eps}^{N(eps)}
    long n_iterations;       // N(eps) = ceil(eps^-2)
    double capacity_from_i;  // log |Phi_eps'(i)|
};

// N(eps)-fold composition of f_{x,eps}; the hull A_eps(x) approximates the
// perfect curve started at x of capacity t_x = (1+cos theta)^2.
AEpsResult build_A_eps(double x, double eps);

// Boundary arcs of the hull A_eps(x): each removed half-disc pulled back by
// the preceding iterates. Used for geometric comparisons.
std::vector<Complex> a_eps_hull_boundary(double x, double eps, int pts_per_arc = 24);

struct ZipperResult {
    SlitMapChain chain;   // g_A: domain minus hull -> domain, 0-normalized (disc)
    DrivingPath driver;   // resampled piecewise-constant driver
    std::vector<double> segment_values;     // per-step driving value
    std::vector<double> segment_capacities; // per-step capacity increment > 0
};

// Discrete Loewner encoding of a boundary-attached simple arc. The arc is
// given as a polyline; arc[0] must lie on the boundary (real axis / unit
// circle), the rest strictly inside the domain (and away from 0 in the
// disc). Every interior vertex becomes the exact tip of one elementary slit.
ZipperResult zipper_encode(const std::vector<Complex>& arc, Domain domain,
                           double resample_dt = 1e-3);

// Rotation post-normalization making a disc zipper chain fix the point 1.
void normalize_fix_one(SlitMapChain& chain);

} // namespace rcr::conformal

#endif
