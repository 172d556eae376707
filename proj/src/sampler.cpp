#include "rcr/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "json.hpp"
#include "rcr/conformal.hpp"
#include "rcr/geometry.hpp"
#include "rcr/parallel.hpp"
#include "rcr/sle.hpp"

namespace rcr::sampler {

namespace {

using json = nlohmann::ordered_json;
using loewner::detail::PointState;
using loewner::detail::SegmentDriver;

constexpr std::uint64_t kSaltRadial = 0x72;
constexpr std::uint64_t kSaltChordal = 0x63;
constexpr std::uint64_t kSaltSoup = 0x73;

constexpr double kMergeTol = 1e-5;
constexpr double kCollapseDiam = 1e-4;
constexpr double kCollapseEdge = 1e-4;
constexpr double kCollapseDriverGap = 1e-3;
// hit-detection flows only need swallow events; their discretization bias is
// covered by the dt-refinement contract, so they run at a looser CFL number
// than the derivative-accurate single-point flows
constexpr double kHitFlowCfl = 0.2;

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct TrackedArc {
    std::vector<Complex> pts;
    bool hit = false;
    bool collapsed = false;
    bool active() const { return !hit && !collapsed && !pts.empty(); }
};

std::vector<Complex> interior_arc(const HullGeometry& hull) {
    std::vector<Complex> pts;
    pts.reserve(hull.arc.size());
    for (const auto& p : hull.arc)
        if (std::abs(p) < 1.0 - 1e-9) pts.push_back(p);
    return pts;
}

void prune_arc(std::vector<Complex>& v) {
    if (v.size() < 3) return;
    std::vector<Complex> keep;
    keep.reserve(v.size());
    keep.push_back(v.front());
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        if (std::norm(v[i] - keep.back()) > kMergeTol * kMergeTol) keep.push_back(v[i]);
    keep.push_back(v.back());
    v.swap(keep);
}

double cluster_diameter(const std::vector<Complex>& v) {
    double xmin = v[0].real(), xmax = xmin, ymin = v[0].imag(), ymax = ymin;
    for (const auto& p : v) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

// The leftover image hull has capacity O(diam + edge distance); once both are
// tiny and the cluster sits away from the driving point, the remaining hit
// probability is far below Monte Carlo resolution.
bool collapsed_radial(const std::vector<Complex>& v, double wcur) {
    if (cluster_diameter(v) > kCollapseDiam) return false;
    const Complex e = std::polar(1.0, wcur);
    double rmin = 1.0;
    for (const auto& p : v) {
        rmin = std::min(rmin, std::abs(p));
        if (std::abs(p - e) < kCollapseDriverGap) return false;
    }
    return (1.0 - rmin) < kCollapseEdge;
}

bool collapsed_chordal(const std::vector<Complex>& v, double wcur) {
    if (cluster_diameter(v) > kCollapseDiam) return false;
    double imax = 0.0;
    for (const auto& p : v) {
        imax = std::max(imax, p.imag());
        if (std::abs(p - wcur) < kCollapseDriverGap) return false;
    }
    return imax < kCollapseEdge;
}

// One driver step for a whole arc. The common case (point far from the
// driving point) is a single RK4 step sharing the three driver evaluations
// across every point; near passages fall back to the adaptive routine.
bool advance_arc_radial(TrackedArc& arc, const SegmentDriver& seg, double t, double dt,
                        double tol) {
    const Complex e0 = std::polar(1.0, seg.w0);
    const Complex em = std::polar(1.0, 0.5 * (seg.w0 + seg.w1));
    const Complex e1 = std::polar(1.0, seg.w1);
    const double tol2 = tol * tol;
    for (auto& p : arc.pts) {
        Complex g = p;
        const Complex d0 = g - e0;
        const double dist2 = std::norm(d0);
        if (dist2 < tol2) {
            arc.hit = true;
            return true;
        }
        const Complex k1 = loewner::detail::radial_rhs(g, e0);
        if (dt * dt * std::norm(k1) > sqr(kHitFlowCfl) * dist2) {
            PointState st{g, {0, 0}, false};
            double tau = 0.0;
            if (!loewner::detail::radial_advance(seg, st, t, dt, tol, 0, &tau, kHitFlowCfl)) {
                arc.hit = true;
                return true;
            }
            p = st.g;
            continue;
        }
        const Complex k2 = loewner::detail::radial_rhs(g + 0.5 * dt * k1, em);
        const Complex k3 = loewner::detail::radial_rhs(g + 0.5 * dt * k2, em);
        const Complex k4 = loewner::detail::radial_rhs(g + dt * k3, e1);
        g += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (std::norm(g - e1) < tol2) {
            arc.hit = true;
            return true;
        }
        p = g;
    }
    return false;
}

bool advance_arc_chordal(TrackedArc& arc, const SegmentDriver& seg, double t, double dt,
                         double tol) {
    const double w0 = seg.w0;
    const double wm = 0.5 * (seg.w0 + seg.w1);
    const double w1 = seg.w1;
    const double tol2 = tol * tol;
    for (auto& p : arc.pts) {
        Complex g = p;
        const double dist2 = std::norm(g - w0);
        if (dist2 < tol2) {
            arc.hit = true;
            return true;
        }
        const Complex k1 = loewner::detail::chordal_rhs(g, w0);
        if (dt * dt * std::norm(k1) > sqr(kHitFlowCfl) * dist2) {
            PointState st{g, {0, 0}, false};
            double tau = 0.0;
            if (!loewner::detail::chordal_advance(seg, st, t, dt, tol, 0, &tau, kHitFlowCfl)) {
                arc.hit = true;
                return true;
            }
            p = st.g;
            continue;
        }
        const Complex k2 = loewner::detail::chordal_rhs(g + 0.5 * dt * k1, wm);
        const Complex k3 = loewner::detail::chordal_rhs(g + 0.5 * dt * k2, wm);
        const Complex k4 = loewner::detail::chordal_rhs(g + dt * k3, w1);
        g += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (std::norm(g - w1) < tol2) {
            arc.hit = true;
            return true;
        }
        p = g;
    }
    return false;
}

bool advance_arc(TrackedArc& arc, const SegmentDriver& seg, double t, double dt, double tol,
                 bool radial) {
    return radial ? advance_arc_radial(arc, seg, t, dt, tol)
                  : advance_arc_chordal(arc, seg, t, dt, tol);
}

// psi: U -> H with e^{iV} -> 0, e^{iW} -> infinity, the ccw boundary arc from
// e^{iV} to e^{iW} (the curve side of the slit domain) onto the positive
// reals, scaled so Im psi(0) = 1.
MobiusTransform build_left_coordinate_map(double v_ang, double w_ang) {
    const Complex a = std::polar(1.0, v_ang);
    const Complex b = std::polar(1.0, w_ang);
    const double span = wrap_two_pi(w_ang - v_ang);
    if (span < 1e-9 || span > kTwoPi - 1e-9)
        throw NumericError("left-coordinate map: degenerate driver/force-point configuration");
    const Complex mid = std::polar(1.0, v_ang + 0.5 * span);
    MobiusTransform m{{1, 0}, -a, {1, 0}, -b};
    const Complex wm = m.apply(mid);
    const MobiusTransform rot{std::abs(wm) / wm, {0, 0}, {0, 0}, {1, 0}};
    MobiusTransform psi = rot.compose(m);
    const Complex z0 = psi.apply(Complex(0, 0));
    if (!(z0.imag() > 0))
        throw NumericError("left-coordinate map: orientation failure");
    const double scale = 1.0 / z0.imag();
    psi.a *= scale;
    psi.b *= scale;
    return psi;
}

bool loop_hits_hull(const soup::LoopSample& loop, const HullGeometry& hull,
                    const geom::BoundingBox& hull_box) {
    const geom::BoundingBox lb = geom::bounding_box(loop.points);
    if (!lb.overlaps(hull_box)) return false;
    if (geom::polylines_cross(loop.points, hull.arc)) return true;
    if (!hull.is_slit && geom::point_in_polygon(hull.polygon, loop.points.front())) return true;
    return false;
}

struct LawContext {
    restriction::RestrictionLaw law;
    double rho = 0;
    bool two_sided = false;
    const soup::LoopSoupSampler* soup = nullptr;
    const std::vector<HullGeometry>* hulls = nullptr;
    std::vector<geom::BoundingBox> hull_boxes;
    McOptions opts;
};

std::uint32_t run_one_sample(const LawContext& ctx, long index) {
    const auto& hulls = *ctx.hulls;
    const std::size_t nh = hulls.size();
    const double tol = loewner::swallow_tolerance(1.0);
    std::vector<TrackedArc> arcs(nh);
    for (std::size_t h = 0; h < nh; ++h) arcs[h].pts = interior_arc(hulls[h]);

    // stage 1: the radial curve eta^R
    sle::SleParams rp;
    rp.kappa = kKappaRestriction;
    rp.rho = ctx.rho;
    rp.force = ctx.two_sided ? sle::ForceKind::LimitLeft : sle::ForceKind::None;
    rp.T = ctx.opts.T_radial;
    rp.dt = ctx.opts.dt;
    rp.seed = ctx.opts.seed;
    rp.stream = mix_keys(static_cast<std::uint64_t>(index), kSaltRadial);
    sle::RadialSleStepper stepper(rp);
    const long nsteps = std::llround(ctx.opts.T_radial / ctx.opts.dt);
    double wprev = stepper.w();
    for (long k = 0; k < nsteps; ++k) {
        stepper.step();
        const double wnext = stepper.w();
        const double t = ctx.opts.dt * static_cast<double>(k);
        const SegmentDriver seg{t, ctx.opts.dt, wprev, wnext};
        bool any_active = false;
        for (auto& arc : arcs) {
            if (!arc.active()) continue;
            advance_arc(arc, seg, t, ctx.opts.dt, tol, true);
            if (arc.active() && (k & 31) == 31) {
                prune_arc(arc.pts);
                if (collapsed_radial(arc.pts, wnext)) arc.collapsed = true;
            }
            if (arc.active()) any_active = true;
        }
        wprev = wnext;
        if (!any_active) break;
    }

    // stage 2: the left boundary in the uniformized slit domain
    bool need_left = false;
    if (ctx.two_sided)
        for (const auto& arc : arcs) need_left |= arc.active();
    if (need_left) {
        const MobiusTransform psi = build_left_coordinate_map(stepper.v(), stepper.w());
        for (auto& arc : arcs) {
            if (!arc.active()) continue;
            for (auto& p : arc.pts) p = psi.apply(p);
        }
        sle::SleParams cp;
        cp.kappa = kKappaRestriction;
        cp.rho = ctx.rho - 2.0;
        cp.force = sle::ForceKind::LimitRight;
        cp.T = ctx.opts.T_chordal;
        cp.dt = ctx.opts.dt;
        cp.seed = ctx.opts.seed;
        cp.stream = mix_keys(static_cast<std::uint64_t>(index), kSaltChordal);
        sle::ChordalSleStepper cstep(cp);
        const long msteps = std::llround(ctx.opts.T_chordal / ctx.opts.dt);
        double cprev = cstep.w();
        for (long k = 0; k < msteps; ++k) {
            cstep.step();
            const double cnext = cstep.w();
            const double t = ctx.opts.dt * static_cast<double>(k);
            const SegmentDriver seg{t, ctx.opts.dt, cprev, cnext};
            bool any_active = false;
            for (auto& arc : arcs) {
                if (!arc.active()) continue;
                advance_arc(arc, seg, t, ctx.opts.dt, tol, false);
                if (arc.active() && (k & 31) == 31) {
                    prune_arc(arc.pts);
                    if (collapsed_chordal(arc.pts, cnext)) arc.collapsed = true;
                }
                if (arc.active()) any_active = true;
            }
            cprev = cnext;
            if (!any_active) break;
        }
    }

    std::uint32_t mask = 0;
    for (std::size_t h = 0; h < nh; ++h)
        if (arcs[h].hit) mask |= (1u << h);

    if (ctx.soup) {
        Rng rng(ctx.opts.seed, mix_keys(static_cast<std::uint64_t>(index), kSaltSoup));
        const auto loops = ctx.soup->sample(rng);
        const bool ladder = ctx.opts.ladder_t_min > 0.0;
        for (std::size_t h = 0; h < nh; ++h) {
            const bool curve_hit = (mask >> h) & 1u;
            bool fine = curve_hit, coarse = curve_hit;
            if (!curve_hit) {
                for (const auto& loop : loops) {
                    if (fine && (!ladder || coarse)) break;
                    if (loop_hits_hull(loop, hulls[h], ctx.hull_boxes[h])) {
                        fine = true;
                        if (loop.duration >= ctx.opts.ladder_t_min) coarse = true;
                    }
                }
            }
            if (fine) mask |= (1u << h);
            if (ladder && coarse) mask |= (1u << (nh + h));
        }
    } else if (ctx.opts.ladder_t_min > 0.0) {
        mask |= mask << nh;
    }
    return mask;
}

LawContext make_context(const restriction::RestrictionLaw& law,
                        const std::vector<HullGeometry>& hulls, const McOptions& opts,
                        const soup::LoopSoupSampler* soup) {
    if (hulls.empty()) throw ValidationError("mc: need at least one hull");
    const std::size_t limit = opts.ladder_t_min > 0 ? 16 : 32;
    if (hulls.size() > limit) throw ValidationError("mc: too many hulls for the mask width");
    if (!law.admissible())
        throw ValidationError("mc: law is not admissible (need beta >= 5/8, alpha <= xi(beta))");
    LawContext ctx;
    ctx.law = law;
    ctx.rho = restriction::rho_of_beta(law.beta);
    ctx.two_sided = ctx.rho > 1e-12;
    ctx.soup = soup;
    ctx.hulls = &hulls;
    ctx.hull_boxes.reserve(hulls.size());
    for (const auto& h : hulls) ctx.hull_boxes.push_back(geom::bounding_box(h.arc));
    ctx.opts = opts;
    return ctx;
}

} // namespace

std::vector<std::uint32_t> mc_hit_masks(const restriction::RestrictionLaw& law,
                                        const std::vector<HullGeometry>& hulls,
                                        const McOptions& opts) {
    const double c = law.soup_intensity();
    std::unique_ptr<soup::LoopSoupSampler> soup_sampler;
    if (c > 1e-12) {
        soup::SoupConfig cfg;
        cfg.intensity = c;
        cfg.t_min = opts.soup_t_min;
        cfg.t_max = opts.soup_t_max;
        cfg.bridge_points = opts.soup_bridge_points;
        soup_sampler = std::make_unique<soup::LoopSoupSampler>(cfg);
    }
    const LawContext ctx = make_context(law, hulls, opts, soup_sampler.get());
    std::vector<std::uint32_t> masks(static_cast<std::size_t>(opts.n), 0);
    parallel_for(opts.n, opts.workers,
                 [&](long i) { masks[static_cast<std::size_t>(i)] = run_one_sample(ctx, i); });
    return masks;
}

std::vector<EstimateReport> mc_estimate_avoidance(const restriction::RestrictionLaw& law,
                                                  const std::vector<HullGeometry>& hulls,
                                                  const McOptions& opts) {
    const double t0 = now_ms();
    const auto masks = mc_hit_masks(law, hulls, opts);
    const double wall = now_ms() - t0;
    std::vector<EstimateReport> out;
    out.reserve(hulls.size());
    for (std::size_t h = 0; h < hulls.size(); ++h) {
        long hits = 0;
        for (const auto m : masks) hits += (m >> h) & 1u;
        EstimateReport r;
        r.law = law;
        r.hull = hulls[h].id;
        r.n = opts.n;
        r.p_hat = 1.0 - static_cast<double>(hits) / static_cast<double>(opts.n);
        r.se = std::sqrt(std::max(r.p_hat * (1.0 - r.p_hat), 1e-12) / static_cast<double>(opts.n));
        r.target = restriction::avoidance_probability(hulls[h].d0, hulls[h].d1, law);
        r.z = (r.p_hat - r.target) / r.se;
        r.dt = opts.dt;
        r.seed = opts.seed;
        r.wall_ms = wall;
        out.push_back(r);
    }
    return out;
}

RegressionFit fit_product_form(const std::vector<EstimateReport>& reports,
                               const std::vector<HullGeometry>& hulls) {
    if (reports.size() != hulls.size() || reports.size() < 2)
        throw ValidationError("fit_product_form: need matching reports for >= 2 hulls");
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const double x1 = std::log(hulls[i].d0);
        const double x2 = std::log(hulls[i].d1);
        const double p = reports[i].p_hat;
        if (!(p > 0 && p < 1)) continue;
        const double y = std::log(p);
        const double var = (1.0 - p) / (static_cast<double>(reports[i].n) * p); // var of log p
        const double wgt = 1.0 / var;
        a11 += wgt * x1 * x1;
        a12 += wgt * x1 * x2;
        a22 += wgt * x2 * x2;
        b1 += wgt * x1 * y;
        b2 += wgt * x2 * y;
    }
    const double det = a11 * a22 - a12 * a12;
    if (std::abs(det) < 1e-12)
        throw NumericError("fit_product_form: degenerate hull design (collinear log-derivatives)");
    RegressionFit f;
    f.alpha = (a22 * b1 - a12 * b2) / det;
    f.beta = (a11 * b2 - a12 * b1) / det;
    f.se_alpha = std::sqrt(a22 / det);
    f.se_beta = std::sqrt(a11 / det);
    return f;
}

// ---- explicit samples -------------------------------------------------------

SampleK sample_max_restriction(double beta, double dt, std::uint64_t seed, std::uint64_t stream,
                               double T_radial, double r_stop) {
    if (!(beta >= 5.0 / 8.0 - 1e-12))
        throw ValidationError("sample_max_restriction: beta must be >= 5/8");
    const double rho = restriction::rho_of_beta(beta);
    SampleK k;

    sle::SleParams rp;
    rp.kappa = kKappaRestriction;
    rp.rho = rho;
    rp.force = rho > 1e-12 ? sle::ForceKind::LimitLeft : sle::ForceKind::None;
    rp.T = T_radial;
    rp.dt = dt;
    rp.seed = seed;
    rp.stream = mix_keys(stream, kSaltRadial);
    const DriverPair pair = sle::radial_sle_driver(rp);

    loewner::TraceOptions topt;
    topt.stop_radius = r_stop;
    k.right = loewner::extract_trace(pair.w, conformal::Domain::Disc, -1.0, topt);
    const double T_right = k.right.dt * static_cast<double>(k.right.points.size() - 1);
    k.right.points.push_back(Complex(0, 0)); // close the tail to the origin

    if (rho <= 1e-12) return k;

    // left boundary: chordal SLE_{8/3}(rho-2) in the uniformized slit domain,
    // force point 0+ (the eta^R side of the boundary)
    const MobiusTransform psi =
        build_left_coordinate_map(pair.v.value(T_right), pair.w.value(T_right));
    const MobiusTransform psi_inv = psi.inverse();
    const conformal::SlitMapChain g_right =
        loewner::hull_maps(pair.w, T_right, conformal::Domain::Disc);

    sle::SleParams cp;
    cp.kappa = kKappaRestriction;
    cp.rho = rho - 2.0;
    cp.force = sle::ForceKind::LimitRight;
    cp.T = T_radial;
    cp.dt = dt;
    cp.seed = seed;
    cp.stream = mix_keys(stream, kSaltChordal);
    const DriverPair lpair = sle::chordal_sle_driver(cp);
    const loewner::Trace left_h = loewner::extract_trace(lpair.w, conformal::Domain::HalfPlane, -1.0);

    k.left.domain = conformal::Domain::Disc;
    k.left.dt = dt;
    k.left.points.reserve(left_h.points.size());
    for (const auto& p : left_h.points) {
        const Complex z = g_right.eval_inverse(psi_inv.apply(p));
        k.left.points.push_back(z);
        if (std::abs(z) <= r_stop) break;
    }
    k.left.points.push_back(Complex(0, 0));

    // region between the boundaries: 1 -> eta^R -> 0 -> reversed eta^L -> 1^-
    std::vector<Complex> region = k.right.points;
    region.insert(region.end(), k.left.points.rbegin(), k.left.points.rend());
    k.region = geom::dedupe_polyline(region, 1e-6);
    return k;
}

SampleK sample_restriction(const restriction::RestrictionLaw& law, double dt, std::uint64_t seed,
                           std::uint64_t stream, double T_radial, double r_stop,
                           const soup::SoupConfig* soup_cfg) {
    if (!law.admissible())
        throw ValidationError("sample_restriction: law is not admissible");
    SampleK k = sample_max_restriction(law.beta, dt, seed, stream, T_radial, r_stop);
    const double c = law.soup_intensity();
    if (c > 1e-12) {
        soup::SoupConfig cfg;
        if (soup_cfg) cfg = *soup_cfg;
        cfg.intensity = c;
        soup::LoopSoupSampler sampler(cfg);
        Rng rng(seed, mix_keys(stream, kSaltSoup));
        k = attach_soup(std::move(k), sampler, rng);
    }
    return k;
}

SampleK attach_soup(SampleK k, const soup::LoopSoupSampler& sampler, Rng& rng) {
    auto loops = sampler.sample(rng);
    for (auto& l : loops) k.loops.push_back(std::move(l));
    return k;
}

bool hit_test(const SampleK& k, const HullGeometry& hull) {
    // 1 is always part of K
    if (geom::point_in_polygon(hull.polygon, Complex(1, 0), 1e-9) && !hull.is_slit) return true;
    const auto& body = k.region.empty() ? k.right.points : k.region;
    if (geom::polylines_cross(body, hull.arc)) return true;
    if (!k.region.empty()) {
        // boundary-attached hull reaching into the filled region
        for (const auto& p : hull.arc)
            if (std::abs(p) < 1.0 - 1e-9 && geom::point_in_polygon(k.region, p)) return true;
    }
    if (!hull.is_slit) {
        for (const auto& p : body)
            if (geom::point_in_polygon(hull.polygon, p)) return true;
    }
    const geom::BoundingBox hb = geom::bounding_box(hull.arc);
    for (const auto& loop : k.loops) {
        if (loop_hits_hull(loop, hull, hb)) return true;
    }
    return false;
}

// ---- martingale -------------------------------------------------------------

namespace {

// M_t from the zipper chain of the flowed hull image: boundary attachment
// angle first, then the interior points.
double martingale_value(double att_angle, const std::vector<Complex>& interior, double w_ang,
                        double v_ang, double phi, int sgn,
                        const restriction::ExponentTriple& exps, double rho) {
    std::vector<Complex> arc;
    arc.reserve(interior.size() + 1);
    arc.push_back(std::polar(1.0, att_angle));
    for (const auto& p : interior)
        if (std::abs(p) < 1.0 - 1e-9) arc.push_back(p);
    arc = geom::dedupe_polyline(arc, 1e-8);
    if (arc.size() < 3) return 1.0; // image hull shrunk below resolution
    auto zr = conformal::zipper_encode(arc, conformal::Domain::Disc, 0.25);
    const double cap = zr.chain.capacity();
    Complex dw(1, 0), dv(1, 0);
    const Complex hw = zr.chain.eval(std::polar(1.0, w_ang), &dw);
    const Complex hv = zr.chain.eval(std::polar(1.0, v_ang), &dv);
    const double two_theta_img = wrap_two_pi(sgn * (std::arg(hw) - std::arg(hv)));
    const double logz = std::log(std::sin(0.5 * two_theta_img)) - std::log(std::sin(phi));
    const double logm = exps.alpha * cap + 0.625 * std::log(std::abs(dw)) +
                        exps.gamma * std::log(std::abs(dv)) + 0.375 * rho * logz;
    return std::exp(logm);
}

} // namespace

MartingaleReport verify_martingale(double rho, const HullGeometry& hull, double dt, double T,
                                   long n_paths, std::uint64_t seed, int workers,
                                   int n_checkpoints) {
    if (!(rho > 0)) throw ValidationError("verify_martingale: rho must be > 0");
    const double t_start = now_ms();
    const auto exps = restriction::exponents_of_rho(rho);
    MartingaleReport rep;
    rep.rho = rho;
    rep.hull = hull.id;
    rep.n = n_paths;
    rep.dt = dt;
    rep.T = T;
    rep.seed = seed;
    rep.m0 = restriction::avoidance_probability(hull.d0, hull.d1, {exps.alpha, exps.beta});

    const std::vector<Complex> arc0 = interior_arc(hull);
    const double att0 = std::arg(hull.arc.front());
    {
        const double phi0 = kPi - 0.5 * sle::kForceEps0;
        rep.m0_chain = martingale_value(att0, arc0, 0.0, kTwoPi - sle::kForceEps0, phi0, -1, exps, rho);
    }

    const long nsteps = std::llround(T / dt);
    const int nc = n_checkpoints;
    std::vector<double> sums(nc, 0.0), sumsq(nc, 0.0);
    std::vector<double> m_hit_values(static_cast<std::size_t>(n_paths), -1.0);
    std::vector<std::vector<double>> contrib(static_cast<std::size_t>(n_paths));

    parallel_for(n_paths, workers, [&](long path) {
        std::vector<double> vals(nc, 0.0);
        sle::SleParams rp;
        rp.kappa = kKappaRestriction;
        rp.rho = rho;
        rp.force = sle::ForceKind::LimitLeft;
        rp.T = T;
        rp.dt = dt;
        rp.seed = seed;
        rp.stream = mix_keys(static_cast<std::uint64_t>(path), kSaltRadial);
        sle::RadialSleStepper stepper(rp);
        std::vector<Complex> pts = arc0;
        double att = att0;
        double att_logd = 0.0;
        const double tol = loewner::swallow_tolerance(1.0);
        double wprev = stepper.w();
        bool hit = false;
        int cp = 0;
        for (long k = 0; k < nsteps && !hit; ++k) {
            stepper.step();
            const double wnext = stepper.w();
            const double t = dt * static_cast<double>(k);
            const SegmentDriver seg{t, dt, wprev, wnext};
            double tau = 0.0;
            if (!loewner::detail::radial_boundary_advance(seg, att, att_logd, false, t, dt, tol, 0,
                                                          &tau))
                hit = true;
            if (!hit) {
                for (auto& p : pts) {
                    PointState st{p, {0, 0}, false};
                    if (!loewner::detail::radial_advance(seg, st, t, dt, tol, 0, &tau)) {
                        hit = true;
                        break;
                    }
                    p = st.g;
                }
            }
            wprev = wnext;
            if (hit) {
                double mh = 0.0;
                try {
                    mh = martingale_value(att, pts, stepper.w(), stepper.v(), stepper.phi(),
                                          stepper.sgn(), exps, rho);
                } catch (const NumericError&) {
                    mh = 0.0;
                }
                m_hit_values[static_cast<std::size_t>(path)] = mh;
                break; // stopped: remaining checkpoints contribute 0
            }
            const double t_next = dt * static_cast<double>(k + 1);
            while (cp < nc && t_next >= T * (cp + 1) / nc - 1e-12) {
                double m = 0.0;
                try {
                    m = martingale_value(att, pts, stepper.w(), stepper.v(), stepper.phi(),
                                         stepper.sgn(), exps, rho);
                } catch (const NumericError&) {
                    m = 0.0;
                }
                vals[cp] = m;
                ++cp;
            }
        }
        contrib[static_cast<std::size_t>(path)] = std::move(vals);
    });

    long hits = 0;
    double m_hit_sum = 0.0;
    for (long p = 0; p < n_paths; ++p) {
        for (int j = 0; j < nc; ++j) {
            sums[j] += contrib[static_cast<std::size_t>(p)][j];
            sumsq[j] += sqr(contrib[static_cast<std::size_t>(p)][j]);
        }
        if (m_hit_values[static_cast<std::size_t>(p)] >= 0.0) {
            ++hits;
            m_hit_sum += m_hit_values[static_cast<std::size_t>(p)];
        }
    }
    rep.hit_fraction = static_cast<double>(hits) / static_cast<double>(n_paths);
    rep.mean_m_at_hit = hits > 0 ? m_hit_sum / static_cast<double>(hits) : 0.0;
    rep.max_abs_z = 0.0;
    for (int j = 0; j < nc; ++j) {
        MartingaleCheckpoint c;
        c.t = T * (j + 1) / nc;
        c.mean = sums[j] / static_cast<double>(n_paths);
        const double var =
            (sumsq[j] - sums[j] * sums[j] / static_cast<double>(n_paths)) /
            (static_cast<double>(n_paths) - 1.0);
        c.se = std::sqrt(std::max(var, 1e-300) / static_cast<double>(n_paths));
        c.z = (c.mean - rep.m0) / c.se;
        rep.max_abs_z = std::max(rep.max_abs_z, std::abs(c.z));
        rep.checkpoints.push_back(c);
    }
    rep.wall_ms = now_ms() - t_start;
    return rep;
}

// ---- chordal limit ----------------------------------------------------------

namespace {

MobiusTransform blaschke(const Complex& a) {
    return MobiusTransform{{1, 0}, -a, -std::conj(a), {1, 0}};
}

// Disc automorphism fixing 1 with m(p) = q.
MobiusTransform disc_auto_fix1(const Complex& p, const Complex& q) {
    const MobiusTransform hp = blaschke(p);
    const MobiusTransform hq = blaschke(q);
    const Complex rot = hq.apply(Complex(1, 0)) / hp.apply(Complex(1, 0));
    const MobiusTransform r{rot, {0, 0}, {0, 0}, {1, 0}};
    return hq.inverse().compose(r).compose(hp);
}

} // namespace

ChordalLimitReport chordal_limit_experiment(const restriction::RestrictionLaw& law,
                                            const HullGeometry& hull,
                                            const std::vector<double>& eps_ladder,
                                            const McOptions& opts) {
    if (eps_ladder.empty())
        throw ValidationError("chordal_limit_experiment: empty ladder");
    const double t0_ms = now_ms();
    ChordalLimitReport rep;
    rep.law = law;
    rep.hull = hull.id;

    const conformal::SlitMapChain g = hull_phi_chain(hull, 1e-4);

    // limit value Psi_A'(1)^beta through the half-plane coordinate:
    // Psi'_A(1) = (c1 / r^2) * Phi_A'(1) with r = mu(Phi_A(-1)) and
    // c1 = lim w^2 * (mu o Phi_A o mu^{-1})'(w).
    const Complex g_m1 = g.eval(Complex(-1, 0));
    const double r = conformal::cayley_disc_to_halfplane(g_m1).real();
    auto ghat_deriv = [&](const Complex& w) {
        const Complex z = conformal::cayley_halfplane_to_disc(w);
        Complex dz(1, 0);
        const Complex val = g.eval(z, &dz);
        // mu'(s) = -2i/(1+s)^2 ; (mu^{-1})'(w) = 1/mu'(z)
        const Complex mu_d_val = Complex(0, -2) / ((1.0 + val) * (1.0 + val));
        const Complex mu_d_z = Complex(0, -2) / ((1.0 + z) * (1.0 + z));
        return mu_d_val * dz / mu_d_z;
    };
    auto c1_at = [&](double y) {
        const Complex w(0, y);
        return (w * w * ghat_deriv(w)).real();
    };
    const double c1 = 2.0 * c1_at(400.0) - c1_at(200.0);
    Complex d1c(1, 0);
    g.eval(Complex(1, 0), &d1c);
    const double d1 = std::abs(d1c);
    const double psi_d1 = (c1 / (r * r)) * d1;
    if (!(psi_d1 > 0))
        throw NumericError("chordal_limit_experiment: nonpositive limit derivative");
    rep.limit_value = std::pow(psi_d1, law.beta);

    auto analytic_at = [&](double eps, double alpha) {
        const Complex q(-1.0 + eps, 0.0);
        Complex dg(1, 0);
        const Complex p = g.eval(q, &dg);
        const MobiusTransform m = disc_auto_fix1(p, q);
        const double phi_d_q = std::abs(m.derivative(p) * dg);
        const double phi_d_1 = std::abs(m.derivative(Complex(1, 0)) * d1c);
        return std::pow(phi_d_q, alpha) * std::pow(phi_d_1, law.beta);
    };

    // pullback hulls f_eps^{-1}(A) and their Monte Carlo estimates
    std::vector<HullGeometry> pullbacks;
    pullbacks.reserve(eps_ladder.size());
    for (double eps : eps_ladder) {
        const double a = 1.0 - eps;
        std::vector<Complex> arc;
        arc.reserve(hull.arc.size());
        for (const auto& z : hull.arc) arc.push_back((z + a) / (1.0 + a * z));
        char buf[64];
        std::snprintf(buf, sizeof(buf), "pullback:eps=%g", eps);
        HullGeometry b = hull_from_polyline(std::move(arc), buf);
        pullbacks.push_back(std::move(b));
    }
    const auto masks = mc_hit_masks(law, pullbacks, opts);

    double prev_gap = -1.0;
    rep.gaps_decreasing = true;
    for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
        ChordalLimitRung rung;
        rung.eps = eps_ladder[i];
        rung.analytic = analytic_at(rung.eps, law.alpha);
        long hits = 0;
        for (const auto m : masks) hits += (m >> i) & 1u;
        rung.p_hat = 1.0 - static_cast<double>(hits) / static_cast<double>(opts.n);
        rung.se = std::sqrt(std::max(rung.p_hat * (1.0 - rung.p_hat), 1e-12) /
                            static_cast<double>(opts.n));
        rung.z = (rung.p_hat - rung.analytic) / rung.se;
        const double gap = std::abs(rung.analytic - rep.limit_value);
        if (prev_gap >= 0.0 && gap > prev_gap) rep.gaps_decreasing = false;
        prev_gap = gap;
        rep.rungs.push_back(rung);
    }
    const double eps_min = eps_ladder.back();
    rep.alpha_gap = std::abs(analytic_at(eps_min, law.alpha) -
                             analytic_at(eps_min, law.alpha - 0.5));
    rep.wall_ms = now_ms() - t0_ms;
    return rep;
}

// ---- JSON -------------------------------------------------------------------

namespace {

json report_to_json(const EstimateReport& r) {
    json j;
    j["law"] = {{"alpha", r.law.alpha}, {"beta", r.law.beta}};
    j["hull"] = r.hull;
    j["n"] = r.n;
    j["p_hat"] = r.p_hat;
    j["se"] = r.se;
    j["target"] = r.target;
    j["z"] = r.z;
    j["dt"] = r.dt;
    j["seed"] = r.seed;
    j["wall_ms"] = r.wall_ms;
    return j;
}

} // namespace

std::string reports_json(const std::vector<EstimateReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    return arr.dump(2);
}

std::string sample_json(const SampleK& k) {
    json j;
    auto trace_to_json = [](const loewner::Trace& t) {
        json pts = json::array();
        for (const auto& p : t.points) pts.push_back({p.real(), p.imag()});
        return pts;
    };
    j["right"] = trace_to_json(k.right);
    j["left"] = trace_to_json(k.left);
    json region = json::array();
    for (const auto& p : k.region) region.push_back({p.real(), p.imag()});
    j["region"] = region;
    json loops = json::array();
    for (const auto& l : k.loops) {
        json lj;
        lj["root"] = {l.root.real(), l.root.imag()};
        lj["duration"] = l.duration;
        json pts = json::array();
        for (const auto& p : l.points) pts.push_back({p.real(), p.imag()});
        lj["points"] = pts;
        loops.push_back(lj);
    }
    j["loops"] = loops;
    return j.dump();
}

std::string martingale_json(const MartingaleReport& r) {
    json j;
    j["rho"] = r.rho;
    j["hull"] = r.hull;
    j["n"] = r.n;
    j["dt"] = r.dt;
    j["T"] = r.T;
    j["seed"] = r.seed;
    j["m0"] = r.m0;
    j["m0_chain"] = r.m0_chain;
    json cps = json::array();
    for (const auto& c : r.checkpoints)
        cps.push_back({{"t", c.t}, {"mean", c.mean}, {"se", c.se}, {"z", c.z}});
    j["checkpoints"] = cps;
    j["max_abs_z"] = r.max_abs_z;
    j["hit_fraction"] = r.hit_fraction;
    j["mean_m_at_hit"] = r.mean_m_at_hit;
    j["wall_ms"] = r.wall_ms;
    return j.dump(2);
}

std::string chordal_limit_json(const ChordalLimitReport& r) {
    json j;
    j["law"] = {{"alpha", r.law.alpha}, {"beta", r.law.beta}};
    j["hull"] = r.hull;
    j["limit_value"] = r.limit_value;
    json rungs = json::array();
    for (const auto& g : r.rungs)
        rungs.push_back({{"eps", g.eps},
                         {"analytic", g.analytic},
                         {"p_hat", g.p_hat},
                         {"se", g.se},
                         {"z", g.z}});
    j["rungs"] = rungs;
    j["gaps_decreasing"] = r.gaps_decreasing;
    j["alpha_gap"] = r.alpha_gap;
    j["wall_ms"] = r.wall_ms;
    return j.dump(2);
}

} // namespace rcr::sampler
