#include "rcr/loopsoup.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "rcr/geometry.hpp"

namespace rcr::soup {

namespace {

constexpr double kRootRadiusFactor = 4.5; // proposal radius in units of sqrt(t)
constexpr int kStrata = 28;
constexpr int kProposalsPerStratum = 24576;
constexpr std::uint64_t kTableSeed = 0x1005e50a9ULL;

// Calibration radii: the escape mass of rU among loops surrounding 0 is
// exactly log(1/r), which pins the intensity normalization of the sampler at
// its own polyline resolution (see below).
constexpr double kCalibRadii[3] = {0.40, 0.55, 0.70};

// Continuum intensity factor relative to dz dt/(2 pi t^2) x bridge-law for
// winding-detected surrounding loops: the expected winding-area of the unit
// bridge is pi/6, while the log-conformal-radius rate of the surrounding-loop
// measure must be 1, so the factor is pi / (pi/6) = 6. Used only as a
// fallback when a degenerate duration window leaves no calibration events.
constexpr double kContinuumFactor = 6.0;

double halton(std::uint64_t i, unsigned base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

} // namespace

void SoupConfig::validate() const {
    if (!(intensity >= 0.0)) throw ValidationError("SoupConfig: intensity must be >= 0");
    if (!(t_min > 0.0 && t_min < t_max)) throw ValidationError("SoupConfig: need 0 < t_min < t_max");
    if (bridge_points < 64) throw ValidationError("SoupConfig: bridge resolution must be >= 64");
}

EscapeMass escape_mass(double c, double inner_map_deriv) {
    if (!(inner_map_deriv >= 1.0))
        throw ValidationError("escape_mass: map derivative at 0 must be >= 1");
    const double m = c * std::log(inner_map_deriv);
    return {m, std::exp(-m)};
}

LoopSoupSampler::LoopSoupSampler(const SoupConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    build_table();
}

double LoopSoupSampler::proposal_radius(double t) const {
    return std::min(1.0, kRootRadiusFactor * std::sqrt(t));
}

// Importance weight of a (log t, root) proposal against the reference
// density dz dt/(2 pi t^2): uniform u in [u0,u1], uniform root in a disc of
// radius R(t) gives weight du * R(t)^2 / (2 t).
double LoopSoupSampler::weight(double t, double du) const {
    const double r = proposal_radius(t);
    return du * r * r / (2.0 * t);
}

bool LoopSoupSampler::make_loop(Rng& rng, const Complex& root, double t, LoopSample* out) const {
    const int m = cfg_.bridge_points;
    const double sd = std::sqrt(t / m);
    std::vector<Complex> pts(static_cast<std::size_t>(m) + 1);
    Complex sum(0, 0);
    pts[0] = root;
    for (int k = 1; k <= m; ++k) {
        sum += Complex(sd * rng.gaussian(), sd * rng.gaussian());
        pts[k] = root + sum;
    }
    // recenter the cyclic increments so the walk closes exactly
    for (int k = 1; k <= m; ++k) {
        const double frac = static_cast<double>(k) / m;
        pts[k] -= frac * sum;
        if (std::norm(pts[k]) >= 1.0) return false;
    }
    std::vector<Complex> open(pts.begin(), pts.end() - 1);
    const int wind = geom::winding_number(open, Complex(0, 0));
    if (wind == 0) return false;
    if (out) {
        out->root = root;
        out->duration = t;
        out->points = std::move(pts);
        out->winding = wind;
        out->surrounds_origin = true;
    }
    return true;
}

// The sampler accepts loops in U whose discrete polyline winds around 0.
// Against the reference density dz dt/(2 pi t^2) this class carries a
// resolution-dependent total intensity (polyline winding under-detects
// marginal surrounding loops, and the continuum winding class itself carries
// 1/6 of the log-conformal-radius rate that the escape-mass functional
// log Phi'(0) requires). Both effects are scale-invariant constants, so the
// sampler is normalized once per configuration against the exactly solvable
// disc family: mass{loops in U surrounding 0 leaving rU} = log(1/r).
void LoopSoupSampler::build_table() {
    const double u_lo = std::log(cfg_.t_min);
    const double u_hi = std::log(cfg_.t_max);
    struct CacheKey {
        double a, b;
        int m;
        bool operator<(const CacheKey& o) const {
            return std::tie(a, b, m) < std::tie(o.a, o.b, o.m);
        }
    };
    struct CacheVal {
        std::vector<Stratum> strata;
        double mass;
    };
    static std::mutex cache_mutex;
    static std::map<CacheKey, CacheVal> cache;
    const CacheKey key{cfg_.t_min, cfg_.t_max, cfg_.bridge_points};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        const auto it = cache.find(key);
        if (it != cache.end()) {
            strata_ = it->second.strata;
            total_mass_ = it->second.mass;
            return;
        }
    }

    strata_.resize(kStrata);
    Rng bridge_rng(kTableSeed);
    total_mass_ = 0.0;
    double escape_mass_raw[3] = {0, 0, 0};
    LoopSample probe;
    for (int j = 0; j < kStrata; ++j) {
        Stratum& s = strata_[j];
        s.u0 = u_lo + (u_hi - u_lo) * j / kStrata;
        s.u1 = u_lo + (u_hi - u_lo) * (j + 1) / kStrata;
        const double du = s.u1 - s.u0;
        s.wmax = std::max(weight(std::exp(s.u0), du), weight(std::exp(s.u1), du));
        double acc = 0.0;
        for (int i = 0; i < kProposalsPerStratum; ++i) {
            const auto idx = static_cast<std::uint64_t>(i) + 1;
            const double t = std::exp(s.u0 + du * halton(idx, 2));
            const double rad = proposal_radius(t) * std::sqrt(halton(idx, 3));
            const double ang = kTwoPi * halton(idx, 5);
            const Complex root = std::polar(rad, ang);
            if (!make_loop(bridge_rng, root, t, &probe)) continue;
            const double w = weight(t, du);
            acc += w;
            double max_r2 = 0.0;
            for (const auto& p : probe.points) max_r2 = std::max(max_r2, std::norm(p));
            for (int c = 0; c < 3; ++c)
                if (max_r2 > sqr(kCalibRadii[c])) escape_mass_raw[c] += w;
        }
        s.mass = acc / kProposalsPerStratum;
        total_mass_ += s.mass;
    }

    double target_sum = 0.0, raw_sum = 0.0;
    for (int c = 0; c < 3; ++c) {
        target_sum += -std::log(kCalibRadii[c]);
        raw_sum += escape_mass_raw[c] / kProposalsPerStratum;
    }
    const double factor = raw_sum > 1e-3 ? target_sum / raw_sum : kContinuumFactor;
    for (auto& s : strata_) s.mass *= factor;
    total_mass_ *= factor;

    std::lock_guard<std::mutex> lock(cache_mutex);
    cache[key] = CacheVal{strata_, total_mass_};
}

std::vector<LoopSample> LoopSoupSampler::sample(Rng& rng) const {
    std::vector<LoopSample> out;
    const double mean = expected_count();
    if (mean > 1e6)
        throw NumericError("LoopSoupSampler: expected loop count exceeds resource guard");
    const long n = rng.poisson(mean);
    out.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        // stratum by mass, then rejection against the measure density
        double pick = rng.uniform() * total_mass_;
        std::size_t j = 0;
        while (j + 1 < strata_.size() && pick > strata_[j].mass) {
            pick -= strata_[j].mass;
            ++j;
        }
        const Stratum& s = strata_[j];
        LoopSample loop;
        for (int guard = 0; guard < 2000000; ++guard) {
            const double t = std::exp(rng.uniform(s.u0, s.u1));
            if (rng.uniform() * s.wmax > weight(t, s.u1 - s.u0)) continue;
            const double rad = proposal_radius(t) * std::sqrt(rng.uniform());
            const Complex root = std::polar(rad, rng.uniform(0.0, kTwoPi));
            if (make_loop(rng, root, t, &loop)) {
                out.push_back(std::move(loop));
                break;
            }
        }
    }
    return out;
}

} // namespace rcr::soup
