#ifndef RCR_SAMPLER_HPP
#define RCR_SAMPLER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rcr/hulls.hpp"
#include "rcr/loewner.hpp"
#include "rcr/loopsoup.hpp"
#include "rcr/numeric.hpp"
#include "rcr/restriction.hpp"
#include "rcr/rng.hpp"

namespace rcr::sampler {

constexpr double kKappaRestriction = 8.0 / 3.0;

struct McOptions {
    long n = 10000;
    double dt = 1e-4;
    std::uint64_t seed = 0;
    int workers = 0;           // 0 = hardware concurrency
    double T_radial = 8.0;     // radial capacity horizon
    double T_chordal = 8.0;    // left-boundary horizon (normalized half-plane)
    double soup_t_min = 1e-3;
    double soup_t_max = 10.0;
    int soup_bridge_points = 256;
    double ladder_t_min = 0.0; // > 0: record a second, coarser soup cutoff
};

struct EstimateReport {
    restriction::RestrictionLaw law;
    std::string hull;
    long n = 0;
    double p_hat = 0, se = 0, target = 0, z = 0, dt = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0;
};

std::string reports_json(const std::vector<EstimateReport>& reports);

// Per-sample avoidance outcomes for K ~ P(law): bit h of masks[i] is set when
// sample i intersects hulls[h]; with ladder_t_min > 0, bit (H + h) carries the
// coarser soup-cutoff outcome.
std::vector<std::uint32_t> mc_hit_masks(const restriction::RestrictionLaw& law,
                                        const std::vector<HullGeometry>& hulls,
                                        const McOptions& opts);

std::vector<EstimateReport> mc_estimate_avoidance(const restriction::RestrictionLaw& law,
                                                  const std::vector<HullGeometry>& hulls,
                                                  const McOptions& opts);

// Weighted no-intercept fit of log p on (log d0, log d1); recovers (alpha, beta).
struct RegressionFit {
    double alpha = 0, beta = 0, se_alpha = 0, se_beta = 0;
};
RegressionFit fit_product_form(const std::vector<EstimateReport>& reports,
                               const std::vector<HullGeometry>& hulls);

// ---- explicit samples -------------------------------------------------------

struct SampleK {
    loewner::Trace right;          // eta^R; the whole sample when rho = 0
    loewner::Trace left;           // eta^L (empty when rho = 0)
    std::vector<Complex> region;   // closed polygon between the boundaries
    std::vector<soup::LoopSample> loops;
};

SampleK sample_max_restriction(double beta, double dt, std::uint64_t seed,
                               std::uint64_t stream = 0, double T_radial = 8.0,
                               double r_stop = 1e-3);
SampleK sample_restriction(const restriction::RestrictionLaw& law, double dt, std::uint64_t seed,
                           std::uint64_t stream = 0, double T_radial = 8.0, double r_stop = 1e-3,
                           const soup::SoupConfig* soup_cfg = nullptr);
SampleK attach_soup(SampleK k, const soup::LoopSoupSampler& sampler, Rng& rng);

bool hit_test(const SampleK& k, const HullGeometry& hull);
std::string sample_json(const SampleK& k);

// ---- martingale verification ------------------------------------------------

struct MartingaleCheckpoint {
    double t = 0, mean = 0, se = 0, z = 0;
};

struct MartingaleReport {
    double rho = 0;
    std::string hull;
    long n = 0;
    double dt = 0, T = 0;
    std::uint64_t seed = 0;
    double m0 = 0;         // analytic M_0 = d0^{xi(beta)} d1^{beta}
    double m0_chain = 0;   // zipper-chain evaluation at t = 0 (cross-check)
    std::vector<MartingaleCheckpoint> checkpoints;
    double max_abs_z = 0;
    double hit_fraction = 0;
    double mean_m_at_hit = 0;
    double wall_ms = 0;
};

MartingaleReport verify_martingale(double rho, const HullGeometry& hull, double dt, double T,
                                   long n_paths, std::uint64_t seed, int workers = 0,
                                   int n_checkpoints = 5);
std::string martingale_json(const MartingaleReport& report);

// ---- chordal limit experiment -----------------------------------------------

struct ChordalLimitRung {
    double eps = 0;
    double analytic = 0; // |Phi_eps'(-1+eps)|^alpha Phi_eps'(1)^beta
    double p_hat = 0, se = 0, z = 0;
};

struct ChordalLimitReport {
    restriction::RestrictionLaw law;
    std::string hull;
    double limit_value = 0; // Psi_A'(1)^beta
    std::vector<ChordalLimitRung> rungs;
    bool gaps_decreasing = false;
    double alpha_gap = 0; // analytic spread between two alphas at the smallest eps
    double wall_ms = 0;
};

ChordalLimitReport chordal_limit_experiment(const restriction::RestrictionLaw& law,
                                            const HullGeometry& hull,
                                            const std::vector<double>& eps_ladder,
                                            const McOptions& opts);
std::string chordal_limit_json(const ChordalLimitReport& report);

} // namespace rcr::sampler

#endif
