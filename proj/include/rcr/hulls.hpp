#ifndef RCR_HULLS_HPP
#define RCR_HULLS_HPP

#include <string>
#include <vector>

#include "rcr/chain.hpp"
#include "rcr/numeric.hpp"
#include "rcr/restriction.hpp"

namespace rcr::sampler {

// Geometric realization of a hull A together with the analytic derivative
// pair (|Phi_A'(0)|, Phi_A'(1)) used as Monte Carlo targets.
struct HullGeometry {
    std::string id;
    bool is_slit = true;           // slit (zero width) vs boundary-attached region
    std::vector<Complex> arc;      // boundary arc in U; first (and for regions
                                   // last) vertex on the unit circle
    std::vector<Complex> polygon;  // closed polygon for geometric hit tests
    double d0 = 1.0;               // |Phi_A'(0)|
    double d1 = 1.0;               // Phi_A'(1)
};

// Perfect radial curve eta^theta([0,t]) as a slit hull; exact derivative
// targets d0 = e^t, d1 = exp(-t/(1-cos theta)).
HullGeometry hull_from_perfect(double theta, double t, int npts = 160);

// Cayley image of the half-disc B(x,eps) cap H; derivative targets from the
// closed-form f_{x,eps}.
HullGeometry hull_from_halfdisc(double x, double eps, int npts = 160);

// Arbitrary boundary-attached arc; derivative targets from the zipper
// encoding and the boundary variational flow.
HullGeometry hull_from_polyline(std::vector<Complex> arc, const std::string& id);

// Hull descriptor mini-language: perfect:<theta>,<t> | halfdisc:<x>,<eps> |
// polyline:<csv-file>. Angles accept "pi" expressions (pi/2, 3pi/4, ...).
HullGeometry parse_hull(const std::string& descriptor);
double parse_angle(const std::string& text);

// Phi_A as a slit-map chain fixing 0 and 1 (zipper of the arc plus rotation).
conformal::SlitMapChain hull_phi_chain(const HullGeometry& hull, double resample_dt = 2e-4);

} // namespace rcr::sampler

#endif
