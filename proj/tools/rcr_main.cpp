// rcr: radial conformal restriction simulator
//
// Subcommands: exponents | trace | estimate | martingale | soup | kernels |
// chordal-limit. Outputs are deterministic for fixed (argv, seed), modulo
// the wall_ms fields.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rcr/conformal.hpp"
#include "rcr/hulls.hpp"
#include "rcr/loewner.hpp"
#include "rcr/loopsoup.hpp"
#include "rcr/restriction.hpp"
#include "rcr/sampler.hpp"
#include "rcr/sle.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace rcr;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw ValidationError("cannot open output file: " + out_path);
    f << text << "\n";
}

int cmd_exponents(double beta, double rho, bool have_rho, const std::string& out) {
    json j;
    if (have_rho) {
        const auto e = restriction::exponents_of_rho(rho);
        j["rho"] = rho;
        j["alpha"] = e.alpha;
        j["gamma"] = e.gamma;
        j["beta"] = e.beta;
        j["xi_beta"] = restriction::xi(e.beta);
    } else {
        j["beta"] = beta;
        j["xi"] = restriction::xi(beta);
        j["rho"] = restriction::rho_of_beta(beta);
    }
    emit(j.dump(2), out);
    return 0;
}

int cmd_kernels_check(const std::string& out) {
    // residual report over admissible grids plus negative controls
    const std::vector<double> xs = {-3.0, -1.0, -0.3, 0.3, 1.0, 3.0};
    const std::vector<std::pair<double, double>> laws = {{5.0 / 48.0, 5.0 / 8.0}, {2.0 / 3.0, 2.0}};
    double max_comm = 0.0, max_ode = 0.0, max_eq6 = 0.0;
    for (const auto& [alpha, beta] : laws) {
        const auto lam = restriction::LambdaParams::from_law({alpha, beta});
        for (double x : xs) {
            max_ode = std::max(max_ode, std::abs(restriction::lambda_ode_residual(x, lam)));
            for (double y : xs) {
                if (x == y) continue;
                max_comm =
                    std::max(max_comm, std::abs(restriction::commutation_residual(x, y, lam)));
            }
        }
        for (int k = 1; k < 16; ++k) {
            const double theta = kPi * k / 16.0;
            const double x = std::sin(theta) / (1.0 + std::cos(theta));
            const double lhs = restriction::lambda(x, lam);
            const double rhs = restriction::nu(theta, {alpha, beta}) * sqr(1.0 + std::cos(theta));
            max_eq6 = std::max(max_eq6, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
    }
    restriction::LambdaGeneral odd{{2.0 * 5.0 / 8.0, 0.1, 2.0 * 5.0 / 8.0 - 4.0 * 5.0 / 48.0, 0.0}};
    restriction::LambdaGeneral cubic{{1.0, 0.0, 1.0, 0.5}};
    const double neg_comm = std::abs(restriction::commutation_residual(1.0, -2.0, odd));
    const double neg_ode = std::abs(restriction::lambda_ode_residual(1.0, cubic));
    json j;
    j["max_commutation_residual"] = max_comm;
    j["max_lambda_ode_residual"] = max_ode;
    j["max_identity_residual"] = max_eq6;
    j["negative_control_commutation"] = neg_comm;
    j["negative_control_ode"] = neg_ode;
    const bool ok = max_comm < 1e-9 && max_ode < 1e-9 && max_eq6 < 1e-12 && neg_comm > 1e-3 &&
                    neg_ode > 1e-3;
    j["pass"] = ok;
    emit(j.dump(2), out);
    return ok ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"radial conformal restriction simulator"};
    app.require_subcommand(1);

    // exponents
    auto* sc_exp = app.add_subcommand("exponents", "exponent arithmetic for (alpha, beta) laws");
    double beta = 5.0 / 8.0, rho = 0.0;
    bool have_rho = false;
    sc_exp->add_option("--beta", beta, "half-plane exponent beta");
    auto* rho_opt = sc_exp->add_option("--rho", rho, "SLE_{8/3}(rho) parameter");

    // kernels
    auto* sc_ker = app.add_subcommand("kernels", "kernel and ODE residual checks");
    bool check = false;
    sc_ker->add_flag("--check", check, "run the residual report");

    // trace
    auto* sc_trace = app.add_subcommand("trace", "emit a Loewner trace as CSV");
    std::string driver_spec = "perfect:pi/2,0.5";
    double tr_dt = 1e-3, tr_T = -1.0, tr_kappa = 8.0 / 3.0, tr_rho = 0.0;
    std::uint64_t tr_seed = 0;
    std::string tr_force = "none";
    sc_trace->add_option("--driver", driver_spec,
                         "perfect:<theta>,<t> | radial-sle | chordal-sle");
    sc_trace->add_option("--dt", tr_dt, "grid step");
    sc_trace->add_option("--T", tr_T, "horizon (driver-specific default)");
    sc_trace->add_option("--kappa", tr_kappa, "SLE kappa");
    sc_trace->add_option("--rho", tr_rho, "SLE rho");
    sc_trace->add_option("--force", tr_force, "none | 1- | 1+ | 0- | 0+ | <angle>");
    sc_trace->add_option("--seed", tr_seed, "RNG seed");

    // estimate
    auto* sc_est = app.add_subcommand("estimate", "Monte Carlo avoidance estimates");
    double est_alpha = 5.0 / 48.0, est_beta = 5.0 / 8.0;
    long est_n = 10000;
    double est_dt = 1e-4;
    std::uint64_t est_seed = 0;
    int workers = 0;
    bool allow_inadmissible = false;
    std::vector<std::string> hull_specs;
    sc_est->add_option("--alpha", est_alpha, "law exponent alpha");
    sc_est->add_option("--beta", est_beta, "law exponent beta");
    sc_est->add_option("--hull", hull_specs, "hull descriptors (repeatable)")->required();
    sc_est->add_option("--n", est_n, "sample count");
    sc_est->add_option("--dt", est_dt, "SDE step");
    sc_est->add_option("--seed", est_seed, "RNG seed");
    sc_est->add_option("--workers", workers, "parallel workers (0 = all cores)");
    sc_est->add_flag("--allow-inadmissible", allow_inadmissible,
                     "evaluate targets for inadmissible laws");

    // martingale
    auto* sc_mart = app.add_subcommand("martingale", "martingale flatness verification");
    double mart_rho = 2.0, mart_T = 0.5, mart_dt = 1e-3;
    long mart_n = 2000;
    std::uint64_t mart_seed = 0;
    std::string mart_hull = "perfect:pi,0.15";
    int mart_checkpoints = 5;
    sc_mart->add_option("--rho", mart_rho, "SLE_{8/3}(rho) parameter (> 0)");
    sc_mart->add_option("--hull", mart_hull, "hull descriptor");
    sc_mart->add_option("--n", mart_n, "path count");
    sc_mart->add_option("--T", mart_T, "horizon");
    sc_mart->add_option("--dt", mart_dt, "SDE step");
    sc_mart->add_option("--checkpoints", mart_checkpoints, "checkpoint count");
    sc_mart->add_option("--seed", mart_seed, "RNG seed");
    sc_mart->add_option("--workers", workers, "parallel workers");

    // soup
    auto* sc_soup = app.add_subcommand("soup", "sample the truncated Brownian loop soup");
    double soup_c = 1.0, soup_tmin = 1e-3, soup_tmax = 10.0;
    int soup_m = 256;
    long soup_n = 1;
    std::uint64_t soup_seed = 0;
    sc_soup->add_option("--c", soup_c, "intensity");
    sc_soup->add_option("--tmin", soup_tmin, "duration cutoff");
    sc_soup->add_option("--tmax", soup_tmax, "duration cap");
    sc_soup->add_option("--M", soup_m, "bridge resolution");
    sc_soup->add_option("--n", soup_n, "number of soup draws");
    sc_soup->add_option("--seed", soup_seed, "RNG seed");

    // chordal-limit
    auto* sc_cl = app.add_subcommand("chordal-limit", "chordal limit experiment");
    double cl_alpha = 5.0 / 48.0, cl_beta = 5.0 / 8.0, cl_dt = 1e-4;
    long cl_n = 5000;
    std::uint64_t cl_seed = 0;
    std::string cl_hull = "perfect:pi/2,0.2";
    std::vector<double> cl_eps = {0.5, 0.25, 0.1};
    sc_cl->add_option("--alpha", cl_alpha, "law exponent alpha");
    sc_cl->add_option("--beta", cl_beta, "law exponent beta");
    sc_cl->add_option("--hull", cl_hull, "hull descriptor (must avoid +-1)");
    sc_cl->add_option("--eps", cl_eps, "ladder of eps values");
    sc_cl->add_option("--n", cl_n, "sample count per rung");
    sc_cl->add_option("--dt", cl_dt, "SDE step");
    sc_cl->add_option("--seed", cl_seed, "RNG seed");
    sc_cl->add_option("--workers", workers, "parallel workers");

    std::string out_path;
    app.add_option("--out", out_path, "output file (stdout default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sc_exp->parsed()) {
            have_rho = rho_opt->count() > 0;
            return cmd_exponents(beta, rho, have_rho, out_path);
        }
        if (sc_ker->parsed()) {
            if (!check) throw ValidationError("kernels: use --check");
            return cmd_kernels_check(out_path);
        }
        if (sc_trace->parsed()) {
            DrivingPath w(1e-3, {0, 0});
            loewner::Trace tr;
            if (driver_spec.rfind("perfect:", 0) == 0) {
                const auto comma = driver_spec.find(',');
                const double theta = sampler::parse_angle(driver_spec.substr(8, comma - 8));
                const double t = std::stod(driver_spec.substr(comma + 1));
                w = sle::perfect_driver(theta, t, tr_dt);
                tr = loewner::extract_trace(w, conformal::Domain::Disc, -1.0);
            } else {
                sle::SleParams p;
                p.kappa = tr_kappa;
                p.rho = tr_rho;
                p.dt = tr_dt;
                p.T = tr_T > 0 ? tr_T : 1.0;
                p.seed = tr_seed;
                if (tr_force == "none") p.force = sle::ForceKind::None;
                else if (tr_force == "1-" || tr_force == "0-") p.force = sle::ForceKind::LimitLeft;
                else if (tr_force == "1+" || tr_force == "0+") p.force = sle::ForceKind::LimitRight;
                else {
                    p.force = sle::ForceKind::Angle;
                    p.force_value = sampler::parse_angle(tr_force);
                }
                if (driver_spec == "radial-sle") {
                    const auto pair = sle::radial_sle_driver(p);
                    tr = loewner::extract_trace(pair.w, conformal::Domain::Disc, -1.0);
                } else if (driver_spec == "chordal-sle") {
                    const auto pair = sle::chordal_sle_driver(p);
                    tr = loewner::extract_trace(pair.w, conformal::Domain::HalfPlane, -1.0);
                } else {
                    throw ValidationError("unknown driver spec: " + driver_spec);
                }
            }
            if (out_path.empty()) throw ValidationError("trace: --out <file.csv> is required");
            loewner::write_trace_csv(tr, out_path);
            return 0;
        }
        if (sc_est->parsed()) {
            restriction::RestrictionLaw law{est_alpha, est_beta};
            if (!law.admissible() && !allow_inadmissible)
                throw ValidationError("inadmissible law (use --allow-inadmissible to evaluate)");
            if (!law.admissible()) {
                // formula-layer evaluation only: report analytic targets
                json arr = json::array();
                for (const auto& spec : hull_specs) {
                    const auto h = sampler::parse_hull(spec);
                    json j;
                    j["law"] = {{"alpha", law.alpha}, {"beta", law.beta}};
                    j["hull"] = h.id;
                    j["target"] = restriction::avoidance_probability(h.d0, h.d1, law);
                    j["admissible"] = false;
                    arr.push_back(j);
                }
                emit(arr.dump(2), out_path);
                return 0;
            }
            std::vector<sampler::HullGeometry> hulls;
            for (const auto& spec : hull_specs) hulls.push_back(sampler::parse_hull(spec));
            sampler::McOptions opts;
            opts.n = est_n;
            opts.dt = est_dt;
            opts.seed = est_seed;
            opts.workers = workers;
            const auto reports = sampler::mc_estimate_avoidance(law, hulls, opts);
            emit(sampler::reports_json(reports), out_path);
            return 0;
        }
        if (sc_mart->parsed()) {
            const auto hull = sampler::parse_hull(mart_hull);
            const auto rep = sampler::verify_martingale(mart_rho, hull, mart_dt, mart_T, mart_n,
                                                        mart_seed, workers, mart_checkpoints);
            emit(sampler::martingale_json(rep), out_path);
            return 0;
        }
        if (sc_soup->parsed()) {
            soup::SoupConfig cfg;
            cfg.intensity = soup_c;
            cfg.t_min = soup_tmin;
            cfg.t_max = soup_tmax;
            cfg.bridge_points = soup_m;
            soup::LoopSoupSampler smp(cfg);
            json draws = json::array();
            for (long i = 0; i < soup_n; ++i) {
                Rng rng(soup_seed, static_cast<std::uint64_t>(i));
                json arr = json::array();
                for (const auto& l : smp.sample(rng)) {
                    json lj;
                    lj["root"] = {l.root.real(), l.root.imag()};
                    lj["duration"] = l.duration;
                    json pts = json::array();
                    for (const auto& p : l.points) pts.push_back({p.real(), p.imag()});
                    lj["points"] = pts;
                    arr.push_back(lj);
                }
                draws.push_back(arr);
            }
            json j;
            j["truncated_mass"] = smp.truncated_mass();
            j["expected_count"] = smp.expected_count();
            j["draws"] = draws;
            emit(j.dump(), out_path);
            return 0;
        }
        if (sc_cl->parsed()) {
            const auto hull = sampler::parse_hull(cl_hull);
            restriction::RestrictionLaw law{cl_alpha, cl_beta};
            sampler::McOptions opts;
            opts.n = cl_n;
            opts.dt = cl_dt;
            opts.seed = cl_seed;
            opts.workers = workers;
            const auto rep = sampler::chordal_limit_experiment(law, hull, cl_eps, opts);
            emit(sampler::chordal_limit_json(rep), out_path);
            return 0;
        }
        throw ValidationError("no subcommand selected");
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        json diag;
        diag["error"] = "numeric";
        diag["detail"] = e.what();
        std::cerr << diag.dump() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
