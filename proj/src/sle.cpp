#include "rcr/sle.hpp"

#include <cmath>

namespace rcr::sle {

void SleParams::validate() const {
    if (!(kappa >= 0.0)) throw ValidationError("SleParams: kappa must be >= 0");
    if (!(rho > -2.0)) throw ValidationError("SleParams: rho must be > -2");
    if (!(dt > 0.0)) throw ValidationError("SleParams: dt must be > 0");
    if (!(T > 0.0)) throw ValidationError("SleParams: T must be > 0");
    const double n = T / dt;
    if (std::abs(n - std::round(n)) > 1e-6)
        throw ValidationError("SleParams: T must be a multiple of dt");
    if (force == ForceKind::Angle) {
        if (force_value == 0.0)
            throw ValidationError("SleParams: angle force point must be nonzero");
    }
}

DrivingPath perfect_driver(double theta, double T, double dt) {
    if (!(theta > 0.0 && theta < kTwoPi))
        throw ValidationError("perfect_driver: theta must lie in (0, 2pi)");
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    const double slope = -1.0 / std::tan(0.5 * theta);
    std::vector<double> vals(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        vals[k] = theta + slope * dt * static_cast<double>(k);
    return DrivingPath(dt, std::move(vals));
}

// ---- radial ----------------------------------------------------------------

RadialSleStepper::RadialSleStepper(const SleParams& p)
    : kappa_(p.kappa), rho_(p.rho), dt_(p.dt), rng_(p.seed, p.stream) {
    p.validate();
    double x;
    switch (p.force) {
        case ForceKind::Angle:
            x = wrap_two_pi(p.force_value);
            if (!(x > 0.0 && x < kTwoPi))
                throw ValidationError("radial force angle must be in (0, 2pi)");
            break;
        case ForceKind::LimitRight: x = kForceEps0; break;
        case ForceKind::LimitLeft: x = kTwoPi - kForceEps0; break;
        case ForceKind::None: x = kPi; break; // rho = 0: V decoupled from W
    }
    v_ = x;
    phi_ = 0.5 * x;
    sgn_ = -1; // W_0 - V_0 = -x < 0
    sub_threshold_ = 10.0 * std::sqrt(dt_ * std::max(kappa_, 1e-12));
}

namespace {

// fold into (0, pi); endpoint collisions resolved inward
double fold_half_turn(double x) {
    x = std::fabs(std::fmod(x, kTwoPi));
    if (x > kPi) x = kTwoPi - x;
    if (x == 0.0) x = 1e-15;
    if (x == kPi) x = kPi - 1e-15;
    return x;
}

} // namespace

void RadialSleStepper::substep(double h) {
    const double a = 0.25 * (rho_ + 2.0);
    const double noise = 0.5 * std::sqrt(kappa_ * h) * rng_.gaussian();
    const double margin = std::min(phi_, kPi - phi_);
    if (margin < 0.1) {
        // near an endpoint the drift is a*cot(psi) ~ a/psi; integrate it in
        // closed form (psi_det = sqrt(psi^2 + 2 a h)) together with
        // int cot dt = (psi_det - psi)/a, which stays bounded however small
        // psi gets (this carries the degenerate 1^+/1^- starts)
        const bool near_pi = phi_ > 0.5 * kPi;
        const double psi = near_pi ? kPi - phi_ : phi_;
        const double psi_det = std::sqrt(psi * psi + 2.0 * a * h);
        const double cot_int = (psi_det - psi) / a;         // int cot(psi) dt
        const double cot_phi_int = near_pi ? -cot_int : cot_int;
        v_ += -sgn_ * cot_phi_int;
        const double psi_new = fold_half_turn(psi_det + noise);
        phi_ = near_pi ? kPi - psi_new : psi_new;
    } else {
        const double cot = std::cos(phi_) / std::sin(phi_);
        v_ += -sgn_ * cot * h;
        phi_ = fold_half_turn(phi_ + noise + a * cot * h);
    }
}

void RadialSleStepper::step() {
    const double margin = std::min(phi_, kPi - phi_);
    int pieces = 1;
    if (margin < sub_threshold_) pieces = 16;
    else if (margin < 4.0 * sub_threshold_) pieces = 4;
    const double h = dt_ / pieces;
    for (int i = 0; i < pieces; ++i) substep(h);
}

DriverPair radial_sle_driver(const SleParams& p) {
    RadialSleStepper st(p);
    const auto n = static_cast<std::size_t>(std::llround(p.T / p.dt));
    std::vector<double> wv(n + 1), vv(n + 1);
    wv[0] = st.w();
    vv[0] = st.v();
    for (std::size_t k = 1; k <= n; ++k) {
        st.step();
        wv[k] = st.w();
        vv[k] = st.v();
    }
    return DriverPair{DrivingPath(p.dt, std::move(wv)), DrivingPath(p.dt, std::move(vv))};
}

// ---- chordal ---------------------------------------------------------------

ChordalSleStepper::ChordalSleStepper(const SleParams& p)
    : kappa_(p.kappa), rho_(p.rho), dt_(p.dt), rng_(p.seed, p.stream) {
    p.validate();
    double x;
    switch (p.force) {
        case ForceKind::Angle: x = p.force_value; break;
        case ForceKind::LimitRight: x = kForceEps0; break;
        case ForceKind::LimitLeft: x = -kForceEps0; break;
        case ForceKind::None: x = 1.0; break; // rho = 0: V irrelevant
    }
    v_ = x;
    d_ = std::fabs(x);
    sgn_ = (x > 0.0) ? -1 : 1; // sign of W - V
    sub_threshold_ = 10.0 * std::sqrt(dt_ * std::max(kappa_, 1e-12));
}

void ChordalSleStepper::substep(double h) {
    // dD = sqrt(kappa) dB + (rho+2)/D dt with D = |W - V|; the drift flow and
    // int dt/D are closed-form, so the step stays stable at D -> 0
    const double b = rho_ + 2.0;
    const double noise = std::sqrt(kappa_ * h) * rng_.gaussian();
    double d_det, dt_over_d;
    if (b > 1e-9) {
        d_det = std::sqrt(d_ * d_ + 2.0 * b * h);
        dt_over_d = (d_det - d_) / b; // int dt/D along the drift flow
    } else {
        d_det = d_;
        dt_over_d = h / d_;
    }
    v_ += -2.0 * sgn_ * dt_over_d;
    d_ = std::fabs(d_det + noise);
    if (d_ == 0.0) d_ = 1e-15;
}

void ChordalSleStepper::step() {
    int pieces = 1;
    if (d_ < sub_threshold_) pieces = 16;
    else if (d_ < 4.0 * sub_threshold_) pieces = 4;
    const double h = dt_ / pieces;
    for (int i = 0; i < pieces; ++i) substep(h);
}

DriverPair chordal_sle_driver(const SleParams& p) {
    if (p.force == ForceKind::Angle && p.force_value == 0.0)
        throw ValidationError("chordal force point must be nonzero");
    ChordalSleStepper st(p);
    const auto n = static_cast<std::size_t>(std::llround(p.T / p.dt));
    std::vector<double> wv(n + 1), vv(n + 1);
    wv[0] = st.w();
    vv[0] = st.v();
    for (std::size_t k = 1; k <= n; ++k) {
        st.step();
        wv[k] = st.w();
        vv[k] = st.v();
    }
    return DriverPair{DrivingPath(p.dt, std::move(wv)), DrivingPath(p.dt, std::move(vv))};
}

} // namespace rcr::sle
