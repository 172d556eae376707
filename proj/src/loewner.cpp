#include "rcr/loewner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace rcr::loewner {

namespace {

void check_horizon(const DrivingPath& w, double T) {
    if (T > w.horizon() + 1e-12)
        throw ValidationError("flow horizon exceeds driver horizon");
}

} // namespace

FlowResult chordal_flow(const DrivingPath& w, const Complex& z, double T) {
    check_horizon(w, T);
    if (z.imag() < -1e-12)
        throw ValidationError("chordal_flow: point below the real axis");
    FlowResult out;
    const double tol = swallow_tolerance(std::abs(z));
    detail::PointState st{z, {0, 0}, true};
    double t = 0.0;
    while (t < T - 1e-15) {
        const double h = std::min(w.dt, T - t);
        double tau = 0.0;
        if (!detail::chordal_advance(w, st, t, h, tol, 0, &tau)) {
            out.swallowed = true;
            out.tau = tau;
            out.point = st.g;
            out.log_deriv = st.logd;
            return out;
        }
        t += h;
    }
    out.point = st.g;
    out.log_deriv = st.logd;
    return out;
}

FlowResult radial_flow(const DrivingPath& w, const Complex& z, double T) {
    check_horizon(w, T);
    FlowResult out;
    if (std::abs(z) < 1e-300) {
        out.point = Complex(0, 0);
        out.log_deriv = Complex(T, 0); // g_t'(0) = e^t
        return out;
    }
    if (std::abs(z) > 1.0 + 1e-9)
        throw ValidationError("radial_flow: point outside the closed disc");
    const double tol = swallow_tolerance(std::abs(z));
    detail::PointState st{z, {0, 0}, true};
    const bool on_circle = std::abs(std::abs(z) - 1.0) < 1e-12;
    double t = 0.0;
    while (t < T - 1e-15) {
        const double h = std::min(w.dt, T - t);
        double tau = 0.0;
        if (!detail::radial_advance(w, st, t, h, tol, 0, &tau)) {
            out.swallowed = true;
            out.tau = tau;
            out.point = st.g;
            out.log_deriv = st.logd;
            return out;
        }
        if (on_circle) st.g /= std::abs(st.g); // boundary points stay on the circle
        t += h;
    }
    out.point = st.g;
    out.log_deriv = st.logd;
    return out;
}

BoundaryFlowResult radial_flow_boundary(const DrivingPath& w, double y0, double T) {
    check_horizon(w, T);
    BoundaryFlowResult out;
    double y = y0;
    double logd = 0.0;
    const double tol = swallow_tolerance(1.0);
    double t = 0.0;
    while (t < T - 1e-15) {
        const double h = std::min(w.dt, T - t);
        double tau = 0.0;
        if (!detail::radial_boundary_advance(w, y, logd, true, t, h, tol, 0, &tau)) {
            out.swallowed = true;
            out.tau = tau;
            out.angle = y;
            out.log_abs_deriv = logd;
            return out;
        }
        t += h;
    }
    out.angle = y;
    out.log_abs_deriv = logd;
    return out;
}

BoundaryFlowResult chordal_flow_boundary(const DrivingPath& w, double x0, double T) {
    check_horizon(w, T);
    BoundaryFlowResult out;
    double x = x0;
    double logd = 0.0;
    const double tol = swallow_tolerance(std::abs(x0));
    double t = 0.0;
    while (t < T - 1e-15) {
        const double h = std::min(w.dt, T - t);
        double tau = 0.0;
        if (!detail::chordal_boundary_advance(w, x, logd, true, t, h, tol, 0, &tau)) {
            out.swallowed = true;
            out.tau = tau;
            out.angle = x;
            out.log_abs_deriv = logd;
            return out;
        }
        t += h;
    }
    out.angle = x;
    out.log_abs_deriv = logd;
    return out;
}

Trace extract_trace(const DrivingPath& w, Domain domain, double tip_offset,
                    const TraceOptions& opts) {
    const double T = opts.T < 0 ? w.horizon() : opts.T;
    check_horizon(w, T);
    const auto nsteps = static_cast<std::size_t>(std::llround(T / w.dt));
    SlitMapChain chain;
    chain.domain = domain;
    chain.elems.reserve(nsteps);

    Trace tr;
    tr.domain = domain;
    tr.dt = w.dt * opts.stride;
    tr.points.reserve(nsteps / opts.stride + 2);
    if (domain == Domain::Disc) {
        tr.points.push_back(std::polar(1.0, w.values.front()));
    } else {
        tr.points.push_back(Complex(w.values.front(), 0));
    }

    for (std::size_t k = 0; k < nsteps; ++k) {
        const double t = w.dt * static_cast<double>(k);
        const double mid = w.value(t + 0.5 * w.dt);
        if (domain == Domain::Disc) {
            chain.append(conformal::make_radial_slit(mid, w.dt));
        } else {
            chain.append(conformal::make_chordal_slit(mid, w.dt));
        }
        if ((k + 1) % static_cast<std::size_t>(opts.stride) != 0 && k + 1 != nsteps) continue;

        Complex tip;
        const double wk = w.value(t + w.dt);
        if (tip_offset > 0.0) {
            tip = (domain == Domain::Disc) ? std::polar(1.0 - tip_offset, wk)
                                           : Complex(wk, tip_offset);
            tip = chain.eval_inverse(tip);
        } else {
            // exact tip of the last elementary slit, pulled back by the rest
            const auto& last = chain.elems.back();
            if (domain == Domain::Disc) {
                tip = std::polar(conformal::radial_slit_tip_radius(last.p2), last.p1);
            } else {
                tip = Complex(last.p1, 2.0 * std::sqrt(last.p2));
            }
            for (std::size_t j = chain.elems.size() - 1; j-- > 0;)
                tip = chain.elems[j].apply_inverse(tip);
        }
        tr.points.push_back(tip);
        if (domain == Domain::Disc && opts.stop_radius > 0 && std::abs(tip) <= opts.stop_radius)
            break;
    }
    return tr;
}

SlitMapChain hull_maps(const DrivingPath& w, double T, Domain domain, int substeps) {
    check_horizon(w, T);
    if (substeps < 1) throw ValidationError("hull_maps: substeps must be >= 1");
    SlitMapChain chain;
    chain.domain = domain;
    const auto nsteps = static_cast<std::size_t>(std::llround(T / w.dt));
    chain.elems.reserve(nsteps * static_cast<std::size_t>(substeps));
    const double h = w.dt / substeps;
    for (std::size_t k = 0; k < nsteps; ++k) {
        const double t = w.dt * static_cast<double>(k);
        for (int j = 0; j < substeps; ++j) {
            const double mid = w.value(t + (j + 0.5) * h);
            if (domain == Domain::Disc) {
                chain.append(conformal::make_radial_slit(mid, h));
            } else {
                chain.append(conformal::make_chordal_slit(mid, h));
            }
        }
    }
    return chain;
}

void write_trace_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << "t,re,im\n";
    char buf[128];
    for (std::size_t k = 0; k < trace.points.size(); ++k) {
        const double t = trace.dt * static_cast<double>(k);
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", t, trace.points[k].real(),
                      trace.points[k].imag());
        out << buf;
    }
}

} // namespace rcr::loewner
