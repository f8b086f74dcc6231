#include "mmheat/analysis.hpp"
#include "mmheat/cli.hpp"
#include "mmheat/csv.hpp"
#include "mmheat/errors.hpp"
#include "mmheat/numeric.hpp"
#include "mmheat/solver.hpp"

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>

namespace mmheat::cli {

namespace {

struct Row {
    std::string check;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = true;
    std::string paper_ref;
};

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
}

bool write_report(const std::filesystem::path& dir, const std::vector<Row>& rows) {
    auto out = open_output(dir, "report.csv");
    out << "check,value,threshold,pass,paper_ref\n";
    bool all = true;
    for (const auto& r : rows) {
        out << r.check << ',' << csv::fmt(r.value) << ',' << csv::fmt(r.threshold) << ',' << csv::fmt_bool(r.pass)
            << ',' << r.paper_ref << '\n';
        all = all && r.pass;
    }
    return all;
}

std::string join(const std::vector<std::string>& items) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ";" : "") + items[i];
    return s;
}

ProblemSpec make_problem(const ExperimentConfig& cfg, double p) {
    ProblemSpec pb{cfg.kernel, cfg.space, cfg.phi.sample(*cfg.space), cfg.f.sample(*cfg.space), p};
    validate_problem(pb);
    return pb;
}

TimeGrid time_grid(const ExperimentConfig& cfg) {
    return TimeGrid::uniform(cfg.time.t_max, static_cast<std::size_t>(cfg.time.nodes));
}

SolveOptions solve_options(const ExperimentConfig& cfg) {
    SolveOptions o;
    o.tol = cfg.solver.tol;
    o.max_iter = cfg.solver.max_iter;
    o.blowup_cap = cfg.solver.blowup_cap;
    return o;
}

// Points sorted by distance to x0, thinned to `count` within `max_distance`.
std::vector<int> spread_samples(const MetricMeasureGrid& space, int count, double max_distance) {
    std::vector<int> idx;
    for (int i = 0; i < space.size(); ++i)
        if (space.dist(i, space.x0()) <= max_distance) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return space.dist(a, space.x0()) < space.dist(b, space.x0()); });
    if (static_cast<int>(idx.size()) <= count) return idx;
    std::vector<int> out;
    for (int k = 0; k < count; ++k)
        out.push_back(idx[static_cast<std::size_t>(k) * (idx.size() - 1) / static_cast<std::size_t>(count - 1)]);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct SmallDataCertificate {
    SmallDataConstants constants;
    ContractionReport contraction;
    double delta = 0.0;
};

SmallDataCertificate certify_small_data(const ExperimentConfig& cfg, const HeatSemigroup& sg) {
    SmallDataCertificate c;
    c.constants = measure_small_data_constants(sg, time_grid(cfg), cfg.p, cfg.small_data->lambda);
    c.contraction = contraction_feasibility(c.constants.C1, c.constants.C3, cfg.p);
    c.delta = cfg.small_data->delta_fraction * c.contraction.delta_max;
    return c;
}

void certificate_rows(const SmallDataCertificate& c, std::vector<Row>& rows) {
    rows.push_back({"small_data_C1", c.constants.C1, 0.0, c.constants.C1 > 0.0, "thm3.4"});
    rows.push_back({"small_data_C3", c.constants.C3, 0.0, c.constants.C3 > 0.0, "thm3.4"});
    rows.push_back({"epsilon_star", c.contraction.epsilon_star, 0.0, c.contraction.epsilon_star > 0.0, "thm3.4"});
    rows.push_back({"delta_max", c.contraction.delta_max, 0.0, c.contraction.feasible, "thm3.4"});
    rows.push_back({"delta_certified", c.delta, c.contraction.delta_max, c.contraction.feasible, "thm3.4"});
}

int cmd_classify(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& log) {
    const double alpha = cfg.kernel.alpha(), beta = cfg.kernel.beta();
    const auto pred = check_profile_conditions(cfg.profiles.first, cfg.profiles.second, cfg.p, alpha);
    const auto conds = RegimeConditions::from(pred, cfg.kernel.conservative_claim());
    const auto v = classify_regime(alpha, beta, cfg.p, cfg.phi.nonzero(), cfg.f.nonzero(), conds);

    auto out = open_output(opt.out_dir, "verdict.csv");
    out << "verdict,cited_case,also_cited,conditional,required_conditions\n";
    out << to_string(v.verdict) << ',' << v.cited_case << ',' << join(v.also_cited) << ','
        << csv::fmt_bool(v.conditional) << ',' << join(v.required_conditions) << '\n';

    std::vector<Row> rows;
    rows.push_back({"general1", pred.general1.min_slack, 0.0, pred.general1.holds, "general1"});
    rows.push_back({"general4", pred.general4.min_slack, 0.0, pred.general4.holds, "general4"});
    rows.push_back({"general2", pred.general2.min_slack, 0.0, pred.general2.holds, "general2"});
    rows.push_back({"phi_integrable", pred.phi.value, 0.0, pred.phi.finite, "phi"});
    rows.push_back({"general5", pred.general5.value, 0.0, pred.general5.finite, "general5"});
    if (v.verdict == Verdict::GlobalExistenceSmallData && cfg.small_data) {
        HeatSemigroup sg(cfg.kernel, *cfg.space);
        certificate_rows(certify_small_data(cfg, sg), rows);
    }
    write_report(opt.out_dir, rows);
    log << to_string(v.verdict) << ' ' << v.cited_case << '\n';
    // Profile conditions are informational here; the verdict already encodes them.
    return kExitOk;
}

int cmd_solve(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& log) {
    const auto problem = make_problem(cfg, cfg.p);
    const auto grid = time_grid(cfg);
    HeatSemigroup sg(cfg.kernel, *cfg.space);
    const auto rep = picard_solve(problem, sg, grid, solve_options(cfg));

    auto traj = open_output(opt.out_dir, "trajectory.csv");
    write_trajectory_csv(traj, rep.trajectory);

    std::vector<Row> rows;
    rows.push_back({"status_" + to_string(rep.status), static_cast<double>(rep.total_iterations),
                    static_cast<double>(cfg.solver.max_iter), rep.status != SolveStatus::MaxIter, "picard"});
    rows.push_back({"t_blow", rep.t_blow, cfg.time.t_max, true, "picard"});
    rows.push_back({"residual", rep.residual, cfg.solver.tol, rep.status != SolveStatus::MaxIter, "picard"});
    rows.push_back({"monotone", rep.monotone ? 1.0 : 0.0, 1.0, rep.monotone, "picard"});
    rows.push_back({"time_increment_ratio", rep.time_increment_ratio, 0.0, true, "lipschitz_in_time"});
    if (cfg.small_data && cfg.kernel.alpha() > cfg.kernel.beta() && !rep.trajectory.values.empty()) {
        const auto cert = certify_small_data(cfg, sg);
        certificate_rows(cert, rows);
        const auto env = envelope_check(rep.trajectory, cert.contraction.epsilon_star, cfg.kernel.alpha(),
                                        cfg.kernel.beta(), cfg.space->x0(), *cfg.space);
        rows.push_back({"envelope_margin", env.worst_margin, 0.0, env.pass, "thm3.4"});
    }
    write_report(opt.out_dir, rows);
    log << "status " << to_string(rep.status) << " iterations " << rep.total_iterations << '\n';
    return rep.status == SolveStatus::MaxIter ? kExitNumerical : kExitOk;
}

int cmd_horizon(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& log) {
    const auto problem = make_problem(cfg, cfg.p);
    HorizonOptions ho;
    ho.t_max = cfg.horizon.t_max;
    const auto rep = local_horizon(problem, cfg.horizon.ode_step, cfg.horizon.blowup_cap, ho);
    auto out = open_output(opt.out_dir, "horizon.csv");
    out << "t,a,b\n";
    for (std::size_t i = 0; i < rep.t_samples.size(); ++i)
        out << csv::fmt(rep.t_samples[i]) << ',' << csv::fmt(rep.a_samples[i]) << ',' << csv::fmt(rep.b_samples[i])
            << '\n';
    std::vector<Row> rows;
    rows.push_back({"T0_estimate", rep.T0_estimate, cfg.horizon.t_max, true, "b-ode"});
    rows.push_back({"blew_up", rep.blew_up ? 1.0 : 0.0, 0.0, true, "b-ode"});
    rows.push_back({"existence_condition", rep.existence_condition_value, 1.0 / (cfg.p - 1.0), rep.condition_met,
                    "existence-estimate"});
    write_report(opt.out_dir, rows);
    log << "T0 " << csv::fmt(rep.T0_estimate) << '\n';
    return kExitOk;
}

WitnessReport run_witness(const ExperimentConfig& cfg, double p) {
    const auto hc = harnack_constants(cfg.witness.a1, cfg.witness.a2, cfg.kernel.alpha(), cfg.kernel.beta());
    WitnessOptions wo;
    wo.t_min_ratio = cfg.witness.t_min_ratio;
    return nonexistence_witness(make_problem(cfg, p), hc, cfg.witness.t_max, cfg.witness.t_count, wo);
}

int cmd_witness(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& log) {
    const auto rep = run_witness(cfg, cfg.p);
    auto out = open_output(opt.out_dir, "witness.csv");
    out << "t,sup_W\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        out << csv::fmt(rep.times[i]) << ',' << csv::fmt(rep.sup_values[i]) << '\n';
    std::vector<Row> rows;
    rows.push_back({"growth_exponent", rep.growth_exponent, 0.0, true, "nonexistence-bound"});
    rows.push_back({"growth_exponent_stderr", rep.exponent_stderr, 0.0, true, "nonexistence-bound"});
    rows.push_back({"witness", rep.witness ? 1.0 : 0.0, 0.0, true, "nonexistence-bound"});
    write_report(opt.out_dir, rows);
    log << "growth exponent " << csv::fmt(rep.growth_exponent) << '\n';
    return kExitOk;
}

int cmd_verify_kernel(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& log) {
    const auto& space = *cfg.space;
    const auto t_samples = logspace(1e-2 * cfg.time.t_max, cfg.time.t_max, 8);
    std::vector<int> x_samples;
    for (int i : spread_samples(space, 64, space.truncation_radius()))
        if (space.boundary_distance(i) >= 0.5 * space.truncation_radius()) x_samples.push_back(i);
    if (x_samples.empty()) x_samples.push_back(space.x0());
    AxiomOptions ao;
    ao.profiles = cfg.profiles;
    ao.fit_holder = true;
    const auto rep = verify_kernel_axioms(cfg.kernel, space, t_samples, x_samples, ao);

    std::vector<Row> rows;
    rows.push_back({"markov_mass", rep.markov_mass, 1.0 + ao.boundary_tolerance,
                    rep.markov_mass <= 1.0 + ao.boundary_tolerance, "k3"});
    rows.push_back({"symmetry_residual", rep.symmetry_residual, 0.0, rep.symmetry_residual == 0.0, "k2"});
    rows.push_back({"semigroup_residual", rep.semigroup_residual, 1e-3, rep.semigroup_residual < 1e-3, "k4"});
    if (cfg.kernel.conservative_claim())
        rows.push_back({"conservative_deficit", rep.conservative_deficit, ao.boundary_tolerance,
                        rep.conservative_deficit < ao.boundary_tolerance, "k5"});
    if (rep.two_sided)
        rows.push_back({"two_sided_margin", rep.two_sided->worst_margin, 0.0, rep.two_sided->ok, "k6"});
    if (rep.holder_estimates) {
        rows.push_back({"holder_L", rep.holder_estimates->L, 0.0, true, "k7"});
        rows.push_back({"holder_nu", rep.holder_estimates->nu, 0.0, true, "k7"});
        rows.push_back({"holder_sigma", rep.holder_estimates->sigma, 0.0, true, "k7"});
    }
    rows.push_back({"boundary_mass", rep.boundary_mass, ao.boundary_tolerance, !rep.boundary_warning, "truncation"});
    const bool ok = write_report(opt.out_dir, rows);
    log << (ok ? "kernel axioms hold\n" : "kernel axiom check failed\n");
    return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_harnack(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& log) {
    const auto hc = harnack_constants(cfg.harnack.a1, cfg.harnack.a2, cfg.kernel.alpha(), cfg.kernel.beta());
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n = cfg.space->size();
    Eigen::MatrixXd g(n, cfg.harnack.samples);
    for (int c = 0; c < g.cols(); ++c)
        for (int i = 0; i < n; ++i) g(i, c) = unif(rng);
    HeatSemigroup sg(cfg.kernel, *cfg.space, 0);
    HarnackOptions ho;
    std::vector<Row> rows;
    for (double t : cfg.harnack.t) {
        const auto rep = verify_harnack(sg, g, t, hc, ho);
        const std::string suffix = "_t=" + csv::fmt(t);
        rows.push_back({"harnack1" + suffix, rep.margin1, -ho.tol, rep.pass1, "harnack1"});
        rows.push_back({"harnack2" + suffix, rep.margin2, -ho.tol, rep.pass2, "harnack2"});
        rows.push_back({"harnack3" + suffix, rep.margin3, -ho.tol, rep.pass3, "eqn-3"});
    }
    const bool ok = write_report(opt.out_dir, rows);
    log << (ok ? "Harnack inequalities hold\n" : "Harnack check failed\n");
    return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_integrals(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& log) {
    const auto& space = *cfg.space;
    const double alpha = space.alpha_hint();
    const auto& in = cfg.integrals;
    const auto xs = spread_samples(space, in.samples, 0.5 * space.truncation_radius());
    const auto rep = check_weighted_integrals(space, in.lambda1, in.lambda2, space.x0(), xs);
    const bool predicted_divergent = in.lambda1 + in.lambda2 <= alpha;
    std::vector<Row> rows;
    rows.push_back({"sup_I", rep.sup_I, 0.0, std::isfinite(rep.sup_I), "sup-dis"});
    if (rep.sup_normalized)
        rows.push_back({"sup_normalized", *rep.sup_normalized, 0.0, std::isfinite(*rep.sup_normalized), "eqn-10"});
    rows.push_back({"tail_exponent", rep.tail_exponent, alpha - in.lambda1 - in.lambda2,
                    rep.divergent == predicted_divergent, "sup-dis"});
    if (in.moment_lambda) {
        const auto m = check_moment_bound(space, cfg.profiles.second, alpha, cfg.kernel.beta(), *in.moment_lambda,
                                          in.moment_t);
        rows.push_back({"moment_ratio_spread", m.spread, 1.05, m.bounded && m.spread <= 1.05, "int"});
    }
    const bool ok = write_report(opt.out_dir, rows);
    log << (ok ? "weighted integrals behave as predicted\n" : "weighted integral check failed\n");
    return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_holder(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& log) {
    const auto& space = *cfg.space;
    const auto problem = make_problem(cfg, cfg.p);
    HeatSemigroup sg(cfg.kernel, space);
    const auto sol = picard_solve(problem, sg, time_grid(cfg), solve_options(cfg));
    if (sol.trajectory.values.size() < 2) throw NumericalError("holder: solution blew up before the first node");

    const auto fit = estimate_holder_kernel(cfg.kernel, space, logspace(1e-2, 10.0, 32),
                                            holder_pairs(space, 128, cfg.holder.max_distance));
    HolderParams hp;
    hp.theta1 = cfg.holder.theta1;
    hp.theta2 = cfg.holder.theta2;
    hp.sigma = fit.sigma;
    hp.nu = fit.nu;
    hp.L = fit.L;
    hp.beta = cfg.kernel.beta();
    HolderOptions ho;
    ho.max_distance = cfg.holder.max_distance;
    const auto est = holder_estimate(sol.trajectory.values.back(), space, hp, ho);

    std::vector<Row> rows;
    rows.push_back({"kernel_sigma", fit.sigma, 0.0, true, "k7"});
    rows.push_back({"kernel_nu", fit.nu, 0.0, true, "k7"});
    rows.push_back({"theta_hat", est.theta_hat, est.theoretical_theta - ho.fit_tolerance, est.pass, "u-cts"});
    rows.push_back({"C_hat", est.C_hat, 0.0, true, "u-cts"});
    rows.push_back({"time_increment_ratio", sol.time_increment_ratio, 0.0, true, "lipschitz_in_time"});
    const bool ok = write_report(opt.out_dir, rows);
    log << "theta_hat " << csv::fmt(est.theta_hat) << " theory " << csv::fmt(est.theoretical_theta) << '\n';
    return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_fujita_scan(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& log) {
    if (cfg.scan_p.empty()) throw ConfigError("fujita-scan: scan.p_values is required");
    const double alpha = cfg.kernel.alpha(), beta = cfg.kernel.beta();
    auto out = open_output(opt.out_dir, "scan.csv");
    out << "p,growth_exponent,verdict\n";
    for (double p : cfg.scan_p) {
        const auto w = run_witness(cfg, p);
        const auto pred = check_profile_conditions(cfg.profiles.first, cfg.profiles.second, p, alpha);
        const auto v = classify_regime(alpha, beta, p, cfg.phi.nonzero(), cfg.f.nonzero(),
                                       RegimeConditions::from(pred, cfg.kernel.conservative_claim()));
        out << csv::fmt(p) << ',' << csv::fmt(w.growth_exponent) << ',' << to_string(v.verdict) << '\n';
        log << "p " << csv::fmt(p) << " exponent " << csv::fmt(w.growth_exponent) << '\n';
    }
    return kExitOk;
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"classify", "solve",    "horizon",   "witness",    "verify-kernel",
                                                "harnack",  "integrals", "holder",   "fujita-scan"};
    return names;
}

int run(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& log) {
    if (opt.threads > 0) {
#ifdef _OPENMP
        omp_set_num_threads(opt.threads);
#endif
        Eigen::setNbThreads(opt.threads);
    }
    const auto& s = opt.subcommand;
    try {
        if (s == "classify") return cmd_classify(cfg, opt, log);
        if (s == "solve") return cmd_solve(cfg, opt, log);
        if (s == "horizon") return cmd_horizon(cfg, opt, log);
        if (s == "witness") return cmd_witness(cfg, opt, log);
        if (s == "verify-kernel") return cmd_verify_kernel(cfg, opt, log);
        if (s == "harnack") return cmd_harnack(cfg, opt, log);
        if (s == "integrals") return cmd_integrals(cfg, opt, log);
        if (s == "holder") return cmd_holder(cfg, opt, log);
        if (s == "fujita-scan") return cmd_fujita_scan(cfg, opt, log);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        // A precondition of the requested computation fails for this config.
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        log << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    log << "unknown subcommand '" << s << "'\n";
    return kExitConfig;
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Semilinear heat equations on discretized metric measure spaces"};
    RunOptions opt;
    std::string config_path;
    std::string out_dir = ".";
    app.add_option("subcommand", opt.subcommand, "What to run")
        ->required()
        ->check(CLI::IsMember(subcommands()));
    app.add_option("--config", config_path, "Experiment config (JSON)")->required();
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--threads", opt.threads, "Worker threads (0 keeps the default)");
    app.add_option("--seed", opt.seed, "Seed for sampled test functions");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    opt.out_dir = out_dir;
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return run(cfg, opt, std::cerr);
}

}  // namespace mmheat::cli
