#ifndef RCR_SLE_HPP
#define RCR_SLE_HPP

#include <cstdint>

#include "rcr/driving_path.hpp"
#include "rcr/numeric.hpp"
#include "rcr/rng.hpp"

namespace rcr::sle {

enum class ForceKind {
    None,       // plain SLE_kappa
    Angle,      // radial: force point e^{ix}, x in (0, 2pi); chordal: V_0 = x != 0
    LimitRight, // degenerate start 1^+ (radial) / 0^+ (chordal)
    LimitLeft,  // degenerate start 1^- (radial) / 0^-
};

struct SleParams {
    double kappa = 8.0 / 3.0;
    double rho = 0.0;
    ForceKind force = ForceKind::None;
    double force_value = 0.0; // Angle descriptor
    double T = 1.0;
    double dt = 1e-4;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0; // per-path stream index

    void validate() const;
};

// Degenerate force-point start offset (radians / half-plane units).
constexpr double kForceEps0 = 1e-6;

// W_t^theta = theta - t cot(theta/2), sampled on the uniform grid.
DrivingPath perfect_driver(double theta, double T, double dt);

// dW = sqrt(kappa) dB + rho/(W-V) dt, dV = 2/(V-W) dt.
// Simulated through D = W - V (Bessel-like, reflected at 0).
DriverPair chordal_sle_driver(const SleParams& params);

// dW = sqrt(kappa) dB + (rho/2) cot((W-V)/2) dt, dV = -cot((W-V)/2) dt.
// Simulated through the half-angle phi = |W-V|/2 kept in (0, pi) by
// reflection, with V reconstructed from its ODE and W = V + 2*sgn*phi.
DriverPair radial_sle_driver(const SleParams& params);

// Streaming stepper used by the Monte Carlo fast path (same dynamics as
// radial_sle_driver without materializing the full path).
class RadialSleStepper {
public:
    RadialSleStepper(const SleParams& params);
    void step(); // advance one grid step of size dt
    double w() const { return v_ + 2.0 * sgn_ * phi_; }
    double v() const { return v_; }
    double phi() const { return phi_; }
    int sgn() const { return sgn_; }

private:
    double kappa_, rho_, dt_;
    double phi_, v_;
    int sgn_;
    double sub_threshold_;
    Rng rng_;
    void substep(double h);
};

class ChordalSleStepper {
public:
    ChordalSleStepper(const SleParams& params);
    void step();
    double w() const { return v_ + sgn_ * d_; }
    double v() const { return v_; }

private:
    double kappa_, rho_, dt_;
    double d_, v_;
    int sgn_;
    double sub_threshold_;
    Rng rng_;
    void substep(double h);
};

} // namespace rcr::sle

#endif
