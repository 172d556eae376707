#ifndef RCR_RESTRICTION_HPP
#define RCR_RESTRICTION_HPP

#include <array>
#include <string>
#include <vector>

#include "rcr/chain.hpp"
#include "rcr/driving_path.hpp"
#include "rcr/numeric.hpp"

namespace rcr::restriction {

// Disconnection exponent: xi(beta) = ((sqrt(24 beta + 1) - 1)^2 - 4) / 48.
double xi(double beta);

// rho(beta) = (2/3)(sqrt(24 beta + 1) - 1) - 2, inverse of beta_of_rho on rho >= -2.
double rho_of_beta(double beta);
double beta_of_rho(double rho);

struct ExponentTriple {
    double alpha;
    double gamma;
    double beta;
};

// alpha = 5/48 + (3/64) rho (rho+4), gamma = (1/32) rho (3 rho+4),
// beta = 5/8 + gamma + (3/8) rho; alpha = xi(beta).
ExponentTriple exponents_of_rho(double rho);

struct RestrictionLaw {
    double alpha = 5.0 / 48.0;
    double beta = 5.0 / 8.0;

    bool admissible() const { return beta >= 5.0 / 8.0 - 1e-12 && alpha <= xi(beta) + 1e-12; }
    // Loop-soup intensity needed to lower alpha from xi(beta).
    double soup_intensity() const { return xi(beta) - alpha; }
};

// nu(theta) = -alpha + beta/(1 - cos theta); avoidance of the perfect curve
// run for time t is exp(-nu(theta) t).
double nu(double theta, const RestrictionLaw& law);

// lambda(x) = (c0 + c2 x^2) / (x^2 (1+x^2)^2); c0 = 2 beta, c2 = 2 beta - 4 alpha.
struct LambdaParams {
    double c0 = 0.0;
    double c2 = 0.0;
    static LambdaParams from_law(const RestrictionLaw& law) {
        return {2.0 * law.beta, 2.0 * law.beta - 4.0 * law.alpha};
    }
    RestrictionLaw law() const { return {0.25 * (c0 - c2), 0.5 * c0}; }
};

double lambda(double x, const LambdaParams& params);

struct Kernels {
    double F;
    double G;
};

// F(x,y) = (1 + x^2 + y^2 + x y)/(x (1+x^2)) + 1/(y-x)
// G(x,y) = (x + 2y)/(x (1+x^2)) - 1/(y-x)^2
Kernels kernels(double x, double y);

// General numerator c0 + c1 |x| + c2 x^2 + c3 |x|^3 over x^2 (1+x^2)^2 (the
// symmetric family; the closed form has c1 = c3 = 0). Nonzero c1 breaks the
// cross-sign commutation relation, nonzero c3 breaks the ODE: negative controls.
struct LambdaGeneral {
    std::array<double, 4> c = {0, 0, 0, 0};
};

// lambda'(y) F(x,y) + 2 lambda(y) G(x,y) - lambda'(x) F(y,x) - 2 lambda(x) G(y,x),
// with analytic derivatives of the closed form.
double commutation_residual(double x, double y, const LambdaGeneral& lam);
double commutation_residual(double x, double y, const LambdaParams& params);

// Residual of
// x^2 (1+x^2)^2 l''' + 6x(1+x^2)(1+3x^2) l'' + 6(1+12x^2+15x^4) l' + 24x(2+5x^2) l = 0
// (equivalently P''' with P = x^2 (1+x^2)^2 lambda).
double lambda_ode_residual(double x, const LambdaGeneral& lam);
double lambda_ode_residual(double x, const LambdaParams& params);

// ---- hulls -----------------------------------------------------------------

struct RadialHull {
    std::string tag;          // "perfect:...", "halfdisc:...", "generic"
    DrivingPath encoding;     // radial driving path growing the hull
    double d0 = 1.0;          // |Phi_A'(0)| >= 1
    double d1 = 1.0;          // Phi_A'(1) in (0, 1]
};

// d0 = e^T, d1 = |g_T'(1)| from the boundary variational flow.
std::pair<double, double> hull_derivatives(const DrivingPath& encoding, double T);

RadialHull make_perfect_hull(double theta, double t, double dt = 1e-4);
RadialHull make_halfdisc_hull(double x, double eps, double dt = 1e-4);
RadialHull make_encoded_hull(const DrivingPath& encoding, std::string tag = "generic");

// P[K cap A = empty] = d0^alpha * d1^beta (warns-by-value for inadmissible laws).
double avoidance_probability(const RadialHull& hull, const RestrictionLaw& law);
double avoidance_probability(double d0, double d1, const RestrictionLaw& law);

} // namespace rcr::restriction

#endif
