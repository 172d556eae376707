#ifndef RCR_LOOPSOUP_HPP
#define RCR_LOOPSOUP_HPP

#include <vector>

#include "rcr/numeric.hpp"
#include "rcr/rng.hpp"

namespace rcr::soup {

struct SoupConfig {
    double intensity = 1.0;   // c > 0
    double t_min = 1e-3;      // duration cutoff
    double t_max = 10.0;      // duration cap
    int bridge_points = 256;  // M
    void validate() const;
};

struct LoopSample {
    Complex root{0, 0};
    double duration = 0.0;
    std::vector<Complex> points; // closed: first == last
    int winding = 0;
    bool surrounds_origin = false;
};

struct EscapeMass {
    double mass;        // expected escaping-loop count, c * log Phi'(0)
    double probability; // all-contained probability, Phi'(0)^{-c}
};

// Phi'(0) is the derivative at 0 of the map from the subdomain onto U
// (>= 1 by the Schwarz lemma).
EscapeMass escape_mass(double c, double inner_map_deriv);

// Truncated sampler for the Brownian loop measure restricted to loops in U
// surrounding the origin, in rooted coordinates
//   dz * dt/(2 pi t^2) * P_bridge(z, t),
// with duration truncated to [t_min, t_max]. Root/duration proposals are
// stratified in log-duration with a precomputed per-stratum mass table
// (quasi-Monte Carlo, fixed internal seed, cached per config).
class LoopSoupSampler {
public:
    explicit LoopSoupSampler(const SoupConfig& cfg);

    const SoupConfig& config() const { return cfg_; }
    double truncated_mass() const { return total_mass_; }
    double expected_count() const { return cfg_.intensity * total_mass_; }

    // One Poissonian soup draw (counts and loops from the caller's stream).
    std::vector<LoopSample> sample(Rng& rng) const;

private:
    struct Stratum {
        double u0, u1;  // log-duration interval
        double mass;    // estimated mass contribution
        double wmax;    // envelope for rejection sampling
    };

    SoupConfig cfg_;
    std::vector<Stratum> strata_;
    double total_mass_ = 0.0;

    double proposal_radius(double t) const;
    double weight(double t, double du) const;
    bool make_loop(Rng& rng, const Complex& root, double t, LoopSample* out) const;
    void build_table();
};

} // namespace rcr::soup

#endif
