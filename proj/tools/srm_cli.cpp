// srm: command-line front end for the estimators, bounds and experiment drivers.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "srm/bandit.hpp"
#include "srm/bounds.hpp"
#include "srm/dist_models.hpp"
#include "srm/errors.hpp"
#include "srm/estimators.hpp"
#include "srm/format.hpp"
#include "srm/harness.hpp"
#include "srm/results.hpp"
#include "srm/samples.hpp"
#include "srm/spectrum.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

struct Globals {
    std::uint64_t seed = 0;
    std::string out = "-";
    std::string format = "csv";
    std::string trunc;  // empty: experiment default
    std::size_t threads = 0;
};

std::vector<double> read_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw srm::IoError("cannot read samples from " + path);
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        std::istringstream is(line);
        double v;
        std::string rest;
        if (!(is >> v) || (is >> rest))
            throw srm::ConfigError(path + ":" + std::to_string(lineno) + ": expected one real per line");
        values.push_back(v);
    }
    return values;
}

std::string json_number(double v) { return std::isfinite(v) ? srm::fmt_real(v) : "null"; }

void write_text(const std::string& out, const std::string& text) {
    if (out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw srm::IoError("cannot write " + out);
    f << text;
    if (!f) throw srm::IoError("write failed for " + out);
}

std::vector<srm::DistModel> parse_dists(const std::vector<std::string>& specs) {
    std::vector<srm::DistModel> out;
    for (const auto& s : specs) out.push_back(srm::parse_dist(s));
    return out;
}

void apply_globals(srm::ExperimentConfig& cfg, const Globals& g) {
    cfg.seed = g.seed;
    cfg.out = g.out;
    cfg.format = srm::parse_format(g.format);
    cfg.threads = g.threads;
    if (!g.trunc.empty()) cfg.truncation = srm::parse_truncation(g.trunc);
}

struct EstimateArgs {
    std::string samples;
    std::string dist;
    std::size_t n = 0;
    std::size_t reps = 1;
    std::string estimator = "srm";
    std::string spectrum = "expk:5";
    double level = 0.95;
    std::size_t m = 1000;
    std::string metric = "value";
    double epsilon = 0;
};

srm::EstimateSpec estimate_spec(const EstimateArgs& a, const Globals& g) {
    srm::EstimateSpec spec;
    spec.estimator = srm::parse_estimator(a.estimator);
    spec.spectrum = srm::parse_spectrum(a.spectrum);
    spec.level = a.level;
    spec.m = a.m;
    spec.metric = srm::parse_metric(a.metric);
    spec.epsilon = a.epsilon;
    if (!g.trunc.empty()) spec.truncation = srm::parse_truncation(g.trunc);
    return spec;
}

void run_estimate(const EstimateArgs& a, const Globals& g) {
    const srm::EstimateSpec spec = estimate_spec(a, g);
    std::vector<srm::ResultRow> rows;
    if (!a.samples.empty()) {
        if (!a.dist.empty()) throw srm::ConfigError("give either --samples or --dist, not both");
        if (spec.metric != srm::Metric::Value) throw srm::ConfigError("sample files support only --metric value");
        if (spec.truncation) throw srm::ConfigError("truncation needs a generating --dist");
        const srm::OrderedSamples s(read_samples(a.samples));
        srm::ResultRow row;
        row.experiment = "estimate";
        row.params = {{"samples", a.samples},
                      {"n", static_cast<std::int64_t>(s.size())},
                      {"estimator", srm::to_string(spec.estimator)}};
        if (spec.estimator == srm::EstimatorKind::Srm) row.params.emplace_back("spectrum", spec.spectrum.describe());
        if (spec.estimator != srm::EstimatorKind::Srm && spec.estimator != srm::EstimatorKind::Mean)
            row.params.emplace_back("level", spec.level);
        if (spec.estimator == srm::EstimatorKind::Srm || spec.estimator == srm::EstimatorKind::CvarTrapz)
            row.params.emplace_back("m", static_cast<std::int64_t>(spec.m));
        row.estimate = srm::apply_estimator(spec, s);
        row.replications = 1;
        row.seed = g.seed;
        rows.push_back(std::move(row));
    } else {
        if (a.dist.empty()) throw srm::ConfigError("estimate needs --samples FILE or --dist SPEC with --n");
        if (a.n < 1) throw srm::ConfigError("--n must be >= 1");
        rows.push_back(srm::estimate_row("estimate", srm::parse_dist(a.dist), a.n, spec, a.reps, g.seed, g.threads));
    }
    srm::emit(rows, srm::parse_format(g.format), g.out);
}

struct OracleArgs {
    std::vector<std::string> dists;
    std::string estimator = "srm";
    std::string spectrum = "expk:5";
    double level = 0.95;
    double tol = 1e-9;
};

void run_oracle(const OracleArgs& a, const Globals& g) {
    srm::EstimateSpec spec;
    spec.estimator = srm::parse_estimator(a.estimator);
    spec.spectrum = srm::parse_spectrum(a.spectrum);
    spec.level = a.level;
    std::vector<srm::ResultRow> rows;
    for (const auto& d : parse_dists(a.dists)) {
        srm::ResultRow row;
        row.experiment = "oracle";
        row.params = {{"dist", d.describe()}, {"estimator", srm::to_string(spec.estimator)}};
        if (spec.estimator == srm::EstimatorKind::Srm) row.params.emplace_back("spectrum", spec.spectrum.describe());
        else if (spec.estimator != srm::EstimatorKind::Mean) row.params.emplace_back("level", spec.level);
        row.estimate = srm::oracle_value(spec, d, a.tol);
        row.replications = 1;
        row.seed = g.seed;
        rows.push_back(std::move(row));
    }
    srm::emit(rows, srm::parse_format(g.format), g.out);
}

struct BoundArgs {
    std::string which;
    std::vector<std::size_t> n;
    std::vector<double> eps;
    std::string dist;
    std::string spectrum = "expk:5";
    double alpha = 0.95;
    std::optional<std::size_t> m;
    std::optional<double> support_hi;
    std::optional<double> c;
};

srm::TailBoundReport evaluate_bound(const BoundArgs& a, std::size_t n, double eps) {
    const srm::DistModel d = srm::parse_dist(a.dist);
    const bool srm_case = a.which.rfind("srm-", 0) == 0;
    double hi = 0;
    if (a.support_hi) {
        hi = *a.support_hi;
    } else if (d.is<srm::Uniform>()) {
        hi = std::get<srm::Uniform>(d.family()).hi;
    } else {
        hi = srm::truncation_threshold(srm::truncation_family_for(d), n);
    }
    const auto sigma_of = [&] {
        if (!d.is<srm::Gaussian>()) throw srm::ConfigError(a.which + " needs a gaussian --dist");
        return std::get<srm::Gaussian>(d.family()).sigma;
    };
    const auto lambda_of = [&] {
        if (!d.is<srm::Exponential>()) throw srm::ConfigError(a.which + " needs an exponential --dist");
        return std::get<srm::Exponential>(d.family()).lambda;
    };

    if (srm_case) {
        const srm::Spectrum phi = srm::parse_spectrum(a.spectrum);
        srm::BoundConstants k = srm::compute_constants(d, phi, hi, a.which == "srm-ii");
        if (a.c) k.c = *a.c;
        if (a.which == "srm-i") return srm::srm_bound_bounded(srm::BoundedKind::FirstDeriv, n, eps, k, a.m);
        if (a.which == "srm-ii") return srm::srm_bound_bounded(srm::BoundedKind::SecondDeriv, n, eps, k, a.m);
        if (a.which == "srm-gauss") return srm::srm_bound_gaussian(n, eps, sigma_of(), k, std::nullopt, a.m);
        if (a.which == "srm-exp") return srm::srm_bound_exponential(n, eps, lambda_of(), k, std::nullopt, a.m);
        throw srm::ConfigError("unknown bound case '" + a.which + "'");
    }
    const srm::BoundConstants k = srm::compute_cvar_constants(d, a.alpha, hi);
    srm::CvarBoundParams p;
    p.k1 = k.k1;
    p.k2 = k.k2;
    p.c = a.c.value_or(k.c);
    if (a.which == "cvar-i") return srm::cvar_bound(srm::CvarCase::BoundedFirst, a.alpha, n, eps, p, a.m);
    if (a.which == "cvar-ii") return srm::cvar_bound(srm::CvarCase::BoundedSecond, a.alpha, n, eps, p, a.m);
    if (a.which == "cvar-gauss") {
        p.sigma = sigma_of();
        return srm::cvar_bound(srm::CvarCase::Gaussian, a.alpha, n, eps, p, a.m);
    }
    if (a.which == "cvar-exp") {
        p.lambda = lambda_of();
        return srm::cvar_bound(srm::CvarCase::Exponential, a.alpha, n, eps, p, a.m);
    }
    throw srm::ConfigError("unknown bound case '" + a.which + "'");
}

void run_bound(const BoundArgs& a, const Globals& g) {
    std::string text;
    for (auto n : a.n) {
        for (double eps : a.eps) {
            const auto r = evaluate_bound(a, n, eps);
            text += "{\"case\":\"" + r.name + "\",\"n\":" + std::to_string(r.n) + ",\"epsilon\":" +
                    json_number(r.epsilon) + ",\"bound\":" + json_number(r.bound) +
                    ",\"valid\":" + (r.valid ? "true" : "false") + ",\"min_m\":" + std::to_string(r.min_m) + "}\n";
        }
    }
    write_text(g.out, text);
}

struct SweepArgs {
    std::vector<std::string> dists;
    std::vector<std::size_t> n;
    std::vector<std::size_t> m;
    std::vector<double> eps;
    std::optional<std::size_t> reps;
    std::string spectrum;
    std::optional<double> target;
};

srm::ExperimentConfig sweep_config(srm::Experiment e, const SweepArgs& a, const Globals& g) {
    srm::ExperimentConfig cfg = srm::default_config(e);
    apply_globals(cfg, g);
    if (!a.dists.empty()) cfg.dists = parse_dists(a.dists);
    if (!a.n.empty()) cfg.n_list = a.n;
    if (!a.m.empty()) cfg.m_list = a.m;
    if (!a.eps.empty()) cfg.epsilons = a.eps;
    if (a.reps) cfg.replications = *a.reps;
    if (!a.spectrum.empty()) cfg.spectrum = srm::parse_spectrum(a.spectrum);
    if (a.target) cfg.target_bound = *a.target;
    return cfg;
}

struct BaiArgs {
    std::size_t budget = 1000;
    std::size_t m = 100;
    std::string functional = "srm:expk:5";
    std::size_t runs = 500;
    std::string env = "route";
    std::optional<std::size_t> best;
};

void run_bai_cmd(const BaiArgs& a, const Globals& g) {
    srm::ExperimentConfig cfg = srm::default_config(srm::Experiment::Bai);
    apply_globals(cfg, g);
    cfg.budget = a.budget;
    cfg.m_list = {a.m};
    cfg.functional = srm::parse_functional(a.functional);
    cfg.replications = a.runs;
    if (a.env == "route") {
        cfg.env = srm::route_env(g.seed);
        cfg.best_arm = a.best.value_or(1);
    } else {
        cfg.env = srm::load_env(a.env, g.seed);
        cfg.best_arm = a.best;
    }
    const srm::BaiSummary s = srm::run_bai(cfg);
    std::string text;
    for (std::size_t r = 0; r < s.winners.size(); ++r)
        text += "run " + std::to_string(r) + " winner " + std::to_string(s.winners[r]) + "\n";
    text += "histogram";
    for (auto h : s.histogram) text += " " + std::to_string(h);
    text += "\n";
    text += std::string("budget_ok=") + (s.budget_ok ? "true" : "false") + "\n";
    if (s.p_correct) text += "P(correct)=" + srm::fmt_real(*s.p_correct) + "\n";
    std::cout << text;
    if (g.out != "-") srm::emit(s.rows, cfg.format, cfg.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral risk measure estimation, bounds and best-arm identification"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Base 64-bit seed");
    app.add_option("--out", g.out, "Output path, - for stdout");
    app.add_option("--format", g.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    app.add_option("--trunc", g.trunc, "zero, clip or off")->check(CLI::IsMember({"zero", "clip", "off"}));
    app.add_option("--threads", g.threads, "Worker threads, 0 for all cores");

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "One estimate from a sample file or R generated batches");
    estimate->add_option("--samples", est.samples, "File with one real per line");
    estimate->add_option("--dist", est.dist, "Generating law, e.g. gaussian:0,10");
    estimate->add_option("--n", est.n, "Batch size");
    estimate->add_option("--reps", est.reps, "Replications");
    estimate->add_option("--estimator", est.estimator, "srm, cvar, classic_cvar, var or mean");
    estimate->add_option("--spectrum", est.spectrum, "expk:k, cvar:alpha or custom:FILE");
    estimate->add_option("--level", est.level, "alpha for CVaR, beta for VaR");
    estimate->add_option("--m", est.m, "Trapezoid subdivisions");
    estimate->add_option("--metric", est.metric, "value, abs-error or exceeds");
    estimate->add_option("--epsilon", est.epsilon, "Threshold for --metric exceeds");

    OracleArgs orc;
    auto* oracle = app.add_subcommand("oracle", "Analytic SRM, CVaR, VaR or mean of a law");
    oracle->add_option("--dist", orc.dists, "Law (repeatable)")->required();
    oracle->add_option("--estimator", orc.estimator, "srm, cvar, var or mean");
    oracle->add_option("--spectrum", orc.spectrum, "expk:k, cvar:alpha or custom:FILE");
    oracle->add_option("--level", orc.level, "alpha for CVaR, beta for VaR");
    oracle->add_option("--tol", orc.tol, "Absolute quadrature tolerance");

    BoundArgs bnd;
    auto* bound = app.add_subcommand("bound", "Evaluate a concentration bound, one JSON object per line");
    bound->add_option("--case", bnd.which, "srm-i, srm-ii, srm-gauss, srm-exp, cvar-i, cvar-ii, cvar-gauss, cvar-exp")
        ->required();
    bound->add_option("--n", bnd.n, "Sample sizes")->required();
    bound->add_option("--epsilon", bnd.eps, "Deviations")->required();
    bound->add_option("--dist", bnd.dist, "Law supplying the density constants")->required();
    bound->add_option("--spectrum", bnd.spectrum, "Spectrum for srm cases");
    bound->add_option("--alpha", bnd.alpha, "CVaR level for cvar cases");
    bound->add_option("--m", bnd.m, "Subdivisions to check against min_m");
    bound->add_option("--support-hi", bnd.support_hi, "Upper support bound B (default: law's upper end or B_n)");
    bound->add_option("--c", bnd.c, "Override the exponent constant");

    SweepArgs sweep;
    const auto add_sweep = [&](CLI::App* sub) {
        sub->add_option("--dist", sweep.dists, "Laws (repeatable)");
        sub->add_option("--n", sweep.n, "Sample sizes");
        sub->add_option("--m", sweep.m, "Subdivisions");
        sub->add_option("--reps", sweep.reps, "Replications");
        sub->add_option("--spectrum", sweep.spectrum, "Spectrum");
    };
    auto* curve = app.add_subcommand("curve", "Mean |error| against n for each m");
    add_sweep(curve);
    auto* table = app.add_subcommand("table", "Oracle and Monte Carlo SRM estimates per law");
    add_sweep(table);
    auto* coverage = app.add_subcommand("coverage", "Empirical tail frequency against the concentration bounds");
    add_sweep(coverage);
    coverage->add_option("--epsilon", sweep.eps, "Deviations (default: solved from --target)");
    coverage->add_option("--target", sweep.target, "Bound value used to pick epsilon");

    BaiArgs bai;
    auto* bai_cmd = app.add_subcommand("bai", "Successive rejects best-arm identification");
    bai_cmd->add_option("--budget", bai.budget, "Total pulls n");
    bai_cmd->add_option("--subdivisions", bai.m, "Trapezoid subdivisions m");
    bai_cmd->add_option("--functional", bai.functional, "mean, cvar:alpha or srm:expk:k");
    bai_cmd->add_option("--runs", bai.runs, "Independent runs");
    bai_cmd->add_option("--env", bai.env, "Arm file (one law per line) or 'route'");
    bai_cmd->add_option("--best", bai.best, "Declared best arm (0-based)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigExit;
    }

    try {
        if (estimate->parsed()) run_estimate(est, g);
        else if (oracle->parsed()) run_oracle(orc, g);
        else if (bound->parsed()) run_bound(bnd, g);
        else if (curve->parsed()) srm::emit(srm::run_curve(sweep_config(srm::Experiment::Curve, sweep, g)),
                                            srm::parse_format(g.format), g.out);
        else if (table->parsed()) srm::emit(srm::run_table(sweep_config(srm::Experiment::Table, sweep, g)),
                                            srm::parse_format(g.format), g.out);
        else if (coverage->parsed()) srm::emit(srm::run_coverage(sweep_config(srm::Experiment::Coverage, sweep, g)),
                                               srm::parse_format(g.format), g.out);
        else if (bai_cmd->parsed()) run_bai_cmd(bai, g);
    } catch (const srm::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumericalExit;
    } catch (const srm::SingularityError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumericalExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigExit;
    }
    return 0;
}
