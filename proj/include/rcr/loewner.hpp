#ifndef RCR_LOEWNER_HPP
#define RCR_LOEWNER_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rcr/chain.hpp"
#include "rcr/driving_path.hpp"
#include "rcr/numeric.hpp"
#include "rcr/slit_maps.hpp"

namespace rcr::loewner {

using conformal::Domain;
using conformal::SlitMapChain;

struct FlowResult {
    Complex point{0, 0};
    bool swallowed = false;
    double tau = 0.0;           // swallowing time if swallowed
    Complex log_deriv{0, 0};    // accumulated log g_t'(z)
};

struct BoundaryFlowResult {
    double angle = 0.0;         // image angle (disc) or image coordinate (half-plane)
    bool swallowed = false;
    double tau = 0.0;
    double log_abs_deriv = 0.0; // accumulated log |g_t'(z)|
};

inline double swallow_tolerance(double zmag) { return 1e-6 * (1.0 + zmag); }

// d g/dt = 2 / (g - W)
FlowResult chordal_flow(const DrivingPath& w, const Complex& z, double T);
// d g/dt = g (e^{iW} + g) / (e^{iW} - g); z = 0 handled analytically
FlowResult radial_flow(const DrivingPath& w, const Complex& z, double T);

// Boundary specializations; y0 is an angle (disc) or a real coordinate (half-plane).
BoundaryFlowResult radial_flow_boundary(const DrivingPath& w, double y0, double T);
BoundaryFlowResult chordal_flow_boundary(const DrivingPath& w, double x0, double T);

struct Trace {
    Domain domain = Domain::Disc;
    double dt = 0.0; // capacity spacing between consecutive points
    std::vector<Complex> points;
};

struct TraceOptions {
    int stride = 1;          // output every stride-th grid time
    double stop_radius = 0;  // radial: truncate when |tip| <= stop_radius
    double T = -1;           // horizon (defaults to driver horizon)
};

// Trace point at time t: inverse of the step-composition chain over [0,t]
// evaluated at the driver position displaced by tip_offset into the domain.
// tip_offset <= 0 selects the exact slit-tip variant.
Trace extract_trace(const DrivingPath& w, Domain domain, double tip_offset,
                    const TraceOptions& opts = {});

// Materialize g_T as a composition of elementary slit maps (constant
// midpoint driving value on each of `substeps` sub-intervals per grid step).
SlitMapChain hull_maps(const DrivingPath& w, double T, Domain domain, int substeps = 1);

void write_trace_csv(const Trace& trace, const std::string& path);

// ---- adaptive step primitives ----------------------------------------------
//
// RK4 with recursive halving (up to kMaxDepth levels) near the singularity;
// below the recursion limit the step falls back to the exact constant-driver
// slit map, which is unconditionally stable there. Templated on the driver
// so Monte Carlo streams segments through without materializing paths.

namespace detail {

constexpr int kMaxDepth = 12;
constexpr double kCfl = 0.05;

struct PointState {
    Complex g;
    Complex logd{0, 0};
    bool track_deriv = false;
};

inline Complex radial_rhs(const Complex& g, const Complex& e) {
    return g * (e + g) / (e - g);
}

inline Complex radial_logderiv_rhs(const Complex& g, const Complex& e) {
    const Complex d = e - g;
    return (e * e + 2.0 * e * g - g * g) / (d * d);
}

inline Complex chordal_rhs(const Complex& g, double wv) {
    return 2.0 / (g - wv);
}

inline Complex chordal_logderiv_rhs(const Complex& g, double wv) {
    const Complex d = g - wv;
    return -2.0 / (d * d);
}

// Advance over [t, t+h]; returns false and sets *tau when swallowed.
template <class DriverT>
bool radial_advance(const DriverT& w, PointState& st, double t, double h, double tol, int depth,
                    double* tau, double cfl = kCfl) {
    const Complex e0 = std::polar(1.0, w.value(t));
    const double dist = std::abs(st.g - e0);
    if (dist < tol) {
        *tau = t;
        return false;
    }
    const Complex f0 = radial_rhs(st.g, e0);
    if (h * std::abs(f0) > cfl * dist) {
        if (depth < kMaxDepth) {
            if (!radial_advance(w, st, t, 0.5 * h, tol, depth + 1, tau, cfl)) return false;
            return radial_advance(w, st, t + 0.5 * h, 0.5 * h, tol, depth + 1, tau, cfl);
        }
        const double theta = w.value(t + 0.5 * h);
        Complex d(1, 0);
        st.g = conformal::radial_slit_map(theta, h, st.g, st.track_deriv ? &d : nullptr);
        if (st.track_deriv) st.logd += std::log(d);
        if (std::abs(st.g - std::polar(1.0, w.value(t + h))) < tol) {
            *tau = t + h;
            return false;
        }
        return true;
    }
    const Complex e1 = std::polar(1.0, w.value(t + 0.5 * h));
    const Complex e2 = std::polar(1.0, w.value(t + h));
    const Complex k1 = f0;
    const Complex k2 = radial_rhs(st.g + 0.5 * h * k1, e1);
    const Complex k3 = radial_rhs(st.g + 0.5 * h * k2, e1);
    const Complex k4 = radial_rhs(st.g + h * k3, e2);
    const Complex gn = st.g + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (st.track_deriv) {
        const Complex l1 = radial_logderiv_rhs(st.g, e0);
        const Complex l2 = radial_logderiv_rhs(st.g + 0.5 * h * k1, e1);
        const Complex l3 = radial_logderiv_rhs(st.g + 0.5 * h * k2, e1);
        const Complex l4 = radial_logderiv_rhs(st.g + h * k3, e2);
        st.logd += (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    }
    st.g = gn;
    if (std::abs(st.g - e2) < tol) {
        *tau = t + h;
        return false;
    }
    return true;
}

template <class DriverT>
bool chordal_advance(const DriverT& w, PointState& st, double t, double h, double tol, int depth,
                     double* tau, double cfl = kCfl) {
    const double w0 = w.value(t);
    const double dist = std::abs(st.g - w0);
    if (dist < tol) {
        *tau = t;
        return false;
    }
    const Complex f0 = chordal_rhs(st.g, w0);
    if (h * std::abs(f0) > cfl * dist) {
        if (depth < kMaxDepth) {
            if (!chordal_advance(w, st, t, 0.5 * h, tol, depth + 1, tau, cfl)) return false;
            return chordal_advance(w, st, t + 0.5 * h, 0.5 * h, tol, depth + 1, tau, cfl);
        }
        const double xi = w.value(t + 0.5 * h);
        Complex d(1, 0);
        st.g = conformal::chordal_slit_map(xi, h, st.g, st.track_deriv ? &d : nullptr);
        if (st.track_deriv) st.logd += std::log(d);
        if (std::abs(st.g - w.value(t + h)) < tol) {
            *tau = t + h;
            return false;
        }
        return true;
    }
    const double w1 = w.value(t + 0.5 * h);
    const double w2 = w.value(t + h);
    const Complex k1 = f0;
    const Complex k2 = chordal_rhs(st.g + 0.5 * h * k1, w1);
    const Complex k3 = chordal_rhs(st.g + 0.5 * h * k2, w1);
    const Complex k4 = chordal_rhs(st.g + h * k3, w2);
    const Complex gn = st.g + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (st.track_deriv) {
        const Complex l1 = chordal_logderiv_rhs(st.g, w0);
        const Complex l2 = chordal_logderiv_rhs(st.g + 0.5 * h * k1, w1);
        const Complex l3 = chordal_logderiv_rhs(st.g + 0.5 * h * k2, w1);
        const Complex l4 = chordal_logderiv_rhs(st.g + h * k3, w2);
        st.logd += (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    }
    st.g = gn;
    if (std::abs(st.g - w2) < tol) {
        *tau = t + h;
        return false;
    }
    return true;
}

// angle dynamics on the circle: da/dt = cot((a - W)/2)
template <class DriverT>
bool radial_boundary_advance(const DriverT& w, double& y, double& logd, bool track, double t,
                             double h, double tol, int depth, double* tau) {
    const double a0 = 0.5 * (y - w.value(t));
    const double dist = 2.0 * std::abs(std::sin(a0));
    if (dist < tol) {
        *tau = t;
        return false;
    }
    const double f0 = std::cos(a0) / std::sin(a0);
    if (h * std::abs(f0) > kCfl * dist) {
        if (depth < kMaxDepth) {
            if (!radial_boundary_advance(w, y, logd, track, t, 0.5 * h, tol, depth + 1, tau))
                return false;
            return radial_boundary_advance(w, y, logd, track, t + 0.5 * h, 0.5 * h, tol, depth + 1,
                                           tau);
        }
        const double theta = w.value(t + 0.5 * h);
        double dyd = 1.0;
        y = conformal::radial_slit_map_angle(theta, h, y, track ? &dyd : nullptr);
        if (track) logd += std::log(dyd);
        if (2.0 * std::abs(std::sin(0.5 * (y - w.value(t + h)))) < tol) {
            *tau = t + h;
            return false;
        }
        return true;
    }
    auto rhs = [&](double yy, double tt) {
        const double a = 0.5 * (yy - w.value(tt));
        return std::cos(a) / std::sin(a);
    };
    const double k1 = f0;
    const double k2 = rhs(y + 0.5 * h * k1, t + 0.5 * h);
    const double k3 = rhs(y + 0.5 * h * k2, t + 0.5 * h);
    const double k4 = rhs(y + h * k3, t + h);
    if (track) {
        auto lrhs = [&](double yy, double tt) {
            const double a = 0.5 * (yy - w.value(tt));
            return -0.5 / sqr(std::sin(a));
        };
        const double l1 = lrhs(y, t);
        const double l2 = lrhs(y + 0.5 * h * k1, t + 0.5 * h);
        const double l3 = lrhs(y + 0.5 * h * k2, t + 0.5 * h);
        const double l4 = lrhs(y + h * k3, t + h);
        logd += (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    }
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (2.0 * std::abs(std::sin(0.5 * (y - w.value(t + h)))) < tol) {
        *tau = t + h;
        return false;
    }
    return true;
}

template <class DriverT>
bool chordal_boundary_advance(const DriverT& w, double& x, double& logd, bool track, double t,
                              double h, double tol, int depth, double* tau) {
    const double dist = std::abs(x - w.value(t));
    if (dist < tol) {
        *tau = t;
        return false;
    }
    const double f0 = 2.0 / (x - w.value(t));
    if (h * std::abs(f0) > kCfl * dist) {
        if (depth < kMaxDepth) {
            if (!chordal_boundary_advance(w, x, logd, track, t, 0.5 * h, tol, depth + 1, tau))
                return false;
            return chordal_boundary_advance(w, x, logd, track, t + 0.5 * h, 0.5 * h, tol, depth + 1,
                                            tau);
        }
        const double xi = w.value(t + 0.5 * h);
        const double d = x - xi;
        const double s = std::sqrt(d * d + 4.0 * h);
        x = xi + (d >= 0 ? s : -s);
        if (track) logd += std::log(std::abs(d) / s);
        if (std::abs(x - w.value(t + h)) < tol) {
            *tau = t + h;
            return false;
        }
        return true;
    }
    auto rhs = [&](double xx, double tt) { return 2.0 / (xx - w.value(tt)); };
    const double k1 = f0;
    const double k2 = rhs(x + 0.5 * h * k1, t + 0.5 * h);
    const double k3 = rhs(x + 0.5 * h * k2, t + 0.5 * h);
    const double k4 = rhs(x + h * k3, t + h);
    if (track) {
        auto lrhs = [&](double xx, double tt) { return -2.0 / sqr(xx - w.value(tt)); };
        const double l1 = lrhs(x, t);
        const double l2 = lrhs(x + 0.5 * h * k1, t + 0.5 * h);
        const double l3 = lrhs(x + 0.5 * h * k2, t + 0.5 * h);
        const double l4 = lrhs(x + h * k3, t + h);
        logd += (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    }
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (std::abs(x - w.value(t + h)) < tol) {
        *tau = t + h;
        return false;
    }
    return true;
}

// Linear driver segment [t0, t0+dt] used by streaming Monte Carlo.
struct SegmentDriver {
    double t0, dt, w0, w1;
    double value(double t) const {
        const double f = std::min(std::max((t - t0) / dt, 0.0), 1.0);
        return w0 * (1.0 - f) + w1 * f;
    }
};

} // namespace detail

} // namespace rcr::loewner

#endif
