#include "rcr/restriction.hpp"

#include <cmath>

#include "rcr/conformal.hpp"
#include "rcr/loewner.hpp"
#include "rcr/sle.hpp"

namespace rcr::restriction {

double xi(double beta) {
    if (beta < -1.0 / 24.0)
        throw ValidationError("xi: beta must be >= -1/24");
    const double u = std::sqrt(24.0 * beta + 1.0) - 1.0;
    return (u * u - 4.0) / 48.0;
}

double rho_of_beta(double beta) {
    if (beta < 0.0)
        throw ValidationError("rho_of_beta: beta must be >= 0");
    return (2.0 / 3.0) * (std::sqrt(24.0 * beta + 1.0) - 1.0) - 2.0;
}

double beta_of_rho(double rho) {
    return (rho + 2.0) * (3.0 * rho + 10.0) / 32.0;
}

ExponentTriple exponents_of_rho(double rho) {
    if (!(rho > -2.0))
        throw ValidationError("exponents_of_rho: rho must be > -2");
    ExponentTriple e;
    e.alpha = 5.0 / 48.0 + (3.0 / 64.0) * rho * (rho + 4.0);
    e.gamma = (1.0 / 32.0) * rho * (3.0 * rho + 4.0);
    e.beta = 5.0 / 8.0 + e.gamma + (3.0 / 8.0) * rho;
    return e;
}

double nu(double theta, const RestrictionLaw& law) {
    if (!(theta > 0.0 && theta < kTwoPi))
        throw ValidationError("nu: theta must lie in (0, 2pi)");
    return -law.alpha + law.beta / (1.0 - std::cos(theta));
}

double lambda(double x, const LambdaParams& params) {
    if (x == 0.0) throw ValidationError("lambda: singular at x = 0");
    const double x2 = x * x;
    const double q = 1.0 + x2;
    return (params.c0 + params.c2 * x2) / (x2 * q * q);
}

Kernels kernels(double x, double y) {
    if (x == 0.0 || y == 0.0 || x == y)
        throw ValidationError("kernels: poles at x = 0, y = 0, x = y");
    Kernels k;
    k.F = (1.0 + x * x + y * y + x * y) / (x * (1.0 + x * x)) + 1.0 / (y - x);
    k.G = (x + 2.0 * y) / (x * (1.0 + x * x)) - 1.0 / sqr(y - x);
    return k;
}

namespace {

// lambda = P / Q with P cubic and Q = x^2 (1+x^2)^2; value and first three
// derivatives by polynomial quotient-rule arithmetic.
struct Poly {
    std::vector<double> c; // c[k] x^k
    double eval(double x) const {
        double v = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
        return v;
    }
    Poly deriv() const {
        if (c.size() <= 1) return Poly{{0.0}};
        Poly d;
        d.c.resize(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k)
            d.c[k - 1] = c[k] * static_cast<double>(k);
        return d;
    }
};

Poly mul(const Poly& a, const Poly& b) {
    Poly r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

Poly sub(const Poly& a, const Poly& b) {
    Poly r = a;
    if (b.c.size() > r.c.size()) r.c.resize(b.c.size(), 0.0);
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[j] -= b.c[j];
    return r;
}

struct LambdaEval {
    double l, l1, l2, l3;
};

LambdaEval eval_lambda_derivs(double x, const LambdaGeneral& lam) {
    if (x == 0.0) throw ValidationError("lambda: singular at x = 0");
    // odd coefficients multiply |x|: the numerator is c0 + c1|x| + c2 x^2 +
    // c3 |x|^3, matching the symmetric family whose odd part the
    // cross-sign commutation relation eliminates
    const double s = x > 0 ? 1.0 : -1.0;
    const Poly p{{lam.c[0], s * lam.c[1], lam.c[2], s * lam.c[3]}};
    const Poly q{{0.0, 0.0, 1.0, 0.0, 2.0, 0.0, 1.0}}; // x^2 (1+x^2)^2
    // numerators of l', l'', l''' over q^2, q^3, q^4 via quotient rule
    const Poly qd = q.deriv();
    const Poly n1 = sub(mul(p.deriv(), q), mul(p, qd)); // l' = n1 / q^2
    const Poly n2 = sub(mul(n1.deriv(), q), mul(Poly{{2.0}}, mul(n1, qd))); // l'' = n2 / q^3
    const Poly n3 = sub(mul(n2.deriv(), q), mul(Poly{{3.0}}, mul(n2, qd))); // l''' = n3 / q^4
    const double qv = q.eval(x);
    LambdaEval e;
    e.l = p.eval(x) / qv;
    e.l1 = n1.eval(x) / (qv * qv);
    e.l2 = n2.eval(x) / (qv * qv * qv);
    e.l3 = n3.eval(x) / (qv * qv * qv * qv);
    return e;
}

} // namespace

double commutation_residual(double x, double y, const LambdaGeneral& lam) {
    const Kernels kxy = kernels(x, y);
    const Kernels kyx = kernels(y, x);
    const LambdaEval ex = eval_lambda_derivs(x, lam);
    const LambdaEval ey = eval_lambda_derivs(y, lam);
    return ey.l1 * kxy.F + 2.0 * ey.l * kxy.G - (ex.l1 * kyx.F + 2.0 * ex.l * kyx.G);
}

double commutation_residual(double x, double y, const LambdaParams& params) {
    return commutation_residual(x, y, LambdaGeneral{{params.c0, 0.0, params.c2, 0.0}});
}

double lambda_ode_residual(double x, const LambdaGeneral& lam) {
    const LambdaEval e = eval_lambda_derivs(x, lam);
    const double x2 = x * x;
    const double q = 1.0 + x2;
    return x2 * q * q * e.l3 + 6.0 * x * q * (1.0 + 3.0 * x2) * e.l2 +
           6.0 * (1.0 + 12.0 * x2 + 15.0 * x2 * x2) * e.l1 +
           24.0 * x * (2.0 + 5.0 * x2) * e.l;
}

double lambda_ode_residual(double x, const LambdaParams& params) {
    return lambda_ode_residual(x, LambdaGeneral{{params.c0, 0.0, params.c2, 0.0}});
}

// ---- hulls -----------------------------------------------------------------

std::pair<double, double> hull_derivatives(const DrivingPath& encoding, double T) {
    const double d0 = std::exp(T);
    const auto r = loewner::radial_flow_boundary(encoding, 0.0, T);
    if (r.swallowed)
        throw NumericError("hull_derivatives: hull swallows the boundary point 1");
    return {d0, std::exp(r.log_abs_deriv)};
}

RadialHull make_perfect_hull(double theta, double t, double dt) {
    RadialHull h;
    h.tag = "perfect";
    h.encoding = sle::perfect_driver(theta, t, dt);
    h.d0 = std::exp(t);
    h.d1 = std::exp(-t / (1.0 - std::cos(theta)));
    return h;
}

RadialHull make_halfdisc_hull(double x, double eps, double dt) {
    RadialHull h;
    h.tag = "halfdisc";
    // exact derivatives of Phi_A = phi0^{-1} o f_{x,eps} o phi0
    Complex di(1, 0), d0c(1, 0);
    conformal::halfdisc_fixed_map(x, eps, Complex(0, 1), &di);
    conformal::halfdisc_fixed_map(x, eps, Complex(0, 0), &d0c);
    h.d0 = std::abs(di);
    h.d1 = d0c.real();
    // encoding via the zipper of the hull's boundary arc in the disc
    std::vector<Complex> arc;
    const int n = 160;
    arc.reserve(n);
    for (int j = 0; j < n; ++j) {
        // open semicircle: first vertex on the boundary, the opposite
        // endpoint (also on the boundary) is dropped -- its capacity
        // increment vanishes
        const double phi = kPi * j / n;
        const Complex p = conformal::cayley_halfplane_to_disc(x + eps * std::polar(1.0, phi));
        if (j > 0 && std::abs(p) > 1.0 - 1e-8) continue;
        arc.push_back(p);
    }
    auto zr = conformal::zipper_encode(arc, conformal::Domain::Disc, dt);
    h.encoding = zr.driver;
    return h;
}

RadialHull make_encoded_hull(const DrivingPath& encoding, std::string tag) {
    RadialHull h;
    h.tag = std::move(tag);
    h.encoding = encoding;
    const auto [d0, d1] = hull_derivatives(encoding, encoding.horizon());
    h.d0 = d0;
    h.d1 = d1;
    return h;
}

double avoidance_probability(double d0, double d1, const RestrictionLaw& law) {
    return std::pow(d0, law.alpha) * std::pow(d1, law.beta);
}

double avoidance_probability(const RadialHull& hull, const RestrictionLaw& law) {
    return avoidance_probability(hull.d0, hull.d1, law);
}

} // namespace rcr::restriction
