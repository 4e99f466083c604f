#include "srm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "srm/errors.hpp"
#include "srm/rng.hpp"

namespace srm {
namespace {

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

std::string join_dists(const std::vector<DistModel>& arms) {
    std::string out;
    for (const auto& d : arms) {
        if (!out.empty()) out += ';';
        out += d.describe();
    }
    return out;
}

bool uses_spectrum(EstimatorKind k) { return k == EstimatorKind::Srm; }
bool uses_level(EstimatorKind k) {
    return k == EstimatorKind::CvarTrapz || k == EstimatorKind::ClassicCvar || k == EstimatorKind::Var;
}
bool uses_m(EstimatorKind k) { return k == EstimatorKind::Srm || k == EstimatorKind::CvarTrapz; }

double oracle_risk(const RiskFunctional& f, const DistModel& d) {
    if (std::holds_alternative<MeanFunctional>(f)) return mean(d);
    if (const auto* c = std::get_if<CVaRFunctional>(&f)) return analytic_cvar(d, c->alpha);
    return analytic_srm(d, std::get<SRMFunctional>(f).spectrum, 1e-9);
}

}  // namespace

EstimatorKind parse_estimator(std::string_view s) {
    if (s == "srm") return EstimatorKind::Srm;
    if (s == "cvar") return EstimatorKind::CvarTrapz;
    if (s == "classic_cvar") return EstimatorKind::ClassicCvar;
    if (s == "var") return EstimatorKind::Var;
    if (s == "mean") return EstimatorKind::Mean;
    throw ConfigError("unknown estimator '" + std::string(s) + "'");
}

std::string to_string(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::Srm: return "srm";
        case EstimatorKind::CvarTrapz: return "cvar";
        case EstimatorKind::ClassicCvar: return "classic_cvar";
        case EstimatorKind::Var: return "var";
        case EstimatorKind::Mean: return "mean";
    }
    return "?";
}

Metric parse_metric(std::string_view s) {
    if (s == "value") return Metric::Value;
    if (s == "abs-error") return Metric::AbsError;
    if (s == "exceeds") return Metric::Exceeds;
    throw ConfigError("unknown metric '" + std::string(s) + "'");
}

std::string to_string(Metric m) {
    switch (m) {
        case Metric::Value: return "value";
        case Metric::AbsError: return "abs-error";
        case Metric::Exceeds: return "exceeds";
    }
    return "?";
}

std::optional<TruncationMode> parse_truncation(std::string_view s) {
    if (s == "zero") return TruncationMode::ZeroOut;
    if (s == "clip") return TruncationMode::Clip;
    if (s == "off") return std::nullopt;
    throw ConfigError("unknown truncation mode '" + std::string(s) + "'");
}

std::string truncation_text(std::optional<TruncationMode> mode) {
    if (!mode) return "off";
    return *mode == TruncationMode::ZeroOut ? "zero" : "clip";
}

double apply_estimator(const EstimateSpec& spec, const OrderedSamples& s) {
    if (spec.truncation) {
        if (!spec.truncation_family) throw ConfigError("truncation requested without a truncation family");
        const double b = truncation_threshold(*spec.truncation_family, s.size());
        EstimateSpec plain = spec;
        plain.truncation.reset();
        return apply_estimator(plain, truncate_samples(s, b, *spec.truncation));
    }
    switch (spec.estimator) {
        case EstimatorKind::Srm: return srm_trapz(s, spec.spectrum, spec.m);
        case EstimatorKind::CvarTrapz: return cvar_trapz(s, spec.level, spec.m);
        case EstimatorKind::ClassicCvar: return classic_cvar(s, spec.level);
        case EstimatorKind::Var: return empirical_var(s, spec.level);
        case EstimatorKind::Mean: return sample_mean(s);
    }
    throw ConfigError("unknown estimator");
}

double oracle_value(const EstimateSpec& spec, const DistModel& dist, double tol) {
    switch (spec.estimator) {
        case EstimatorKind::Srm: return analytic_srm(dist, spec.spectrum, tol);
        case EstimatorKind::CvarTrapz:
        case EstimatorKind::ClassicCvar: return analytic_cvar(dist, spec.level);
        case EstimatorKind::Var: return quantile(dist, spec.level);
        case EstimatorKind::Mean: return mean(dist);
    }
    throw ConfigError("unknown estimator");
}

Summary summarize(std::span<const double> values) {
    Summary out;
    out.count = values.size();
    if (values.empty()) return out;
    double sum = 0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.spread = std::sqrt(ss / static_cast<double>(values.size() - 1));
        out.std_error = out.spread / std::sqrt(static_cast<double>(values.size()));
    }
    return out;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += threads) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<double> replicate(std::size_t replications, std::uint64_t seed, std::size_t threads,
                              const std::function<double(std::uint64_t)>& fn) {
    std::vector<double> values(replications);
    parallel_for(replications, threads, [&](std::size_t r) { values[r] = fn(child_seed(seed, r)); });
    return values;
}

ResultRow estimate_row(const std::string& experiment, const DistModel& dist, std::size_t n, const EstimateSpec& spec,
                       std::size_t replications, std::uint64_t seed, std::size_t threads) {
    if (replications < 1) throw ConfigError("replications must be >= 1");
    if (n < 1) throw ConfigError("n must be >= 1");
    EstimateSpec run = spec;
    if (run.truncation && !run.truncation_family) run.truncation_family = truncation_family_for(dist);

    const double oracle = oracle_value(run, dist);
    const auto values = replicate(replications, seed, threads, [&](std::uint64_t s) {
        const double est = apply_estimator(run, sample(dist, n, s));
        switch (run.metric) {
            case Metric::Value: return est;
            case Metric::AbsError: return std::abs(oracle - est);
            case Metric::Exceeds: return std::abs(oracle - est) > run.epsilon ? 1.0 : 0.0;
        }
        return est;
    });
    const Summary sum = summarize(values);

    ResultRow row;
    row.experiment = experiment;
    row.params.emplace_back("dist", dist.describe());
    row.params.emplace_back("n", as_int(n));
    row.params.emplace_back("estimator", to_string(run.estimator));
    if (uses_spectrum(run.estimator)) row.params.emplace_back("spectrum", run.spectrum.describe());
    if (uses_level(run.estimator)) row.params.emplace_back("level", run.level);
    if (uses_m(run.estimator)) row.params.emplace_back("m", as_int(run.m));
    row.params.emplace_back("trunc", truncation_text(run.truncation));
    row.params.emplace_back("metric", to_string(run.metric));
    if (run.metric == Metric::Exceeds) row.params.emplace_back("epsilon", run.epsilon);
    row.estimate = sum.mean;
    row.std_error = sum.std_error;
    row.spread = sum.spread;
    row.replications = replications;
    row.seed = seed;
    row.metrics.emplace_back("oracle", oracle);
    return row;
}

ExperimentConfig default_config(Experiment e) {
    ExperimentConfig cfg;
    cfg.experiment = e;
    switch (e) {
        case Experiment::Curve:
            cfg.dists = {DistModel::gaussian(0.5, 5)};
            cfg.m_list = {150, 500};
            cfg.n_list = {100, 250, 500, 1000, 2500, 5000, 10000};
            cfg.replications = 1000;
            break;
        case Experiment::Table:
            cfg.dists = {DistModel::exponential(0.2), DistModel::gaussian(0, 100), DistModel::exponential(0.01),
                         DistModel::uniform(-1000, 1000)};
            cfg.n_list = {10000};
            cfg.m_list = {1000};
            cfg.replications = 1000;
            break;
        case Experiment::Coverage:
            cfg.dists = {DistModel::uniform(0, 1), DistModel::gaussian(0, 1), DistModel::exponential(1)};
            cfg.n_list = {1000, 10000};
            cfg.m_list = {1000};
            cfg.replications = 10000;
            cfg.truncation = TruncationMode::ZeroOut;
            break;
        case Experiment::Bai:
            cfg.env = route_env();
            cfg.budget = 1000;
            cfg.m_list = {100};
            cfg.replications = 500;
            cfg.best_arm = 1;
            break;
        default:
            cfg.n_list = {1000};
            cfg.m_list = {1000};
            cfg.replications = 1;
            break;
    }
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
    if (cfg.m_list.empty()) throw ConfigError("m list is empty");
    for (auto m : cfg.m_list)
        if (m < 1) throw ConfigError("m must be >= 1");
    if (cfg.experiment == Experiment::Bai) {
        if (!cfg.env) throw ConfigError("bai needs an arm environment");
        if (cfg.budget < cfg.env->size()) throw ConfigError("budget must be at least the number of arms");
        if (cfg.best_arm && *cfg.best_arm >= cfg.env->size()) throw ConfigError("best arm index out of range");
        return;
    }
    if (cfg.dists.empty()) throw ConfigError("distribution list is empty");
    if (cfg.n_list.empty()) throw ConfigError("n list is empty");
    for (auto n : cfg.n_list)
        if (n < 1) throw ConfigError("n must be >= 1");
    if (cfg.experiment == Experiment::Coverage) {
        for (auto n : cfg.n_list)
            if (n < 2) throw ConfigError("coverage needs n >= 2");
        for (double e : cfg.epsilons)
            if (!(e > 0)) throw ConfigError("epsilon must be > 0");
        if (!(cfg.target_bound > 0 && cfg.target_bound < 1)) throw ConfigError("target bound must be in (0, 1)");
    }
}

std::vector<ResultRow> run_curve(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<ResultRow> rows;
    for (const auto& dist : cfg.dists) {
        for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
            const std::uint64_t seed = child_seed(cfg.seed, i);
            for (auto m : cfg.m_list) {
                EstimateSpec spec;
                spec.spectrum = cfg.spectrum;
                spec.m = m;
                spec.truncation = cfg.truncation;
                spec.metric = Metric::AbsError;
                rows.push_back(estimate_row("curve", dist, cfg.n_list[i], spec, cfg.replications, seed, cfg.threads));
            }
        }
    }
    return rows;
}

std::vector<ResultRow> run_table(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<ResultRow> rows;
    for (std::size_t i = 0; i < cfg.dists.size(); ++i) {
        EstimateSpec spec;
        spec.spectrum = cfg.spectrum;
        spec.m = cfg.m_list.front();
        spec.truncation = cfg.truncation;
        rows.push_back(estimate_row("table", cfg.dists[i], cfg.n_list.front(), spec, cfg.replications,
                                    child_seed(cfg.seed, i), cfg.threads));
    }
    return rows;
}

std::optional<double> epsilon_for_bound(const std::function<TailBoundReport(double)>& bound_at, double threshold,
                                        double target) {
    const auto below = [&](double eps) {
        const auto r = bound_at(eps);
        return r.valid && r.bound <= target;
    };
    double lo = std::max(threshold, 0.0);
    double hi = lo > 0 ? 2 * lo : 1e-6;
    int steps = 0;
    while (!below(hi)) {
        lo = hi;
        hi *= 2;
        if (++steps > 400 || !std::isfinite(hi)) return std::nullopt;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (below(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::vector<ResultRow> run_coverage(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<ResultRow> rows;
    std::uint64_t row_index = 0;
    const std::size_t base_m = cfg.m_list.front();

    for (const auto& dist : cfg.dists) {
        const bool bounded = dist.is<Uniform>();
        const bool gaussian = dist.is<Gaussian>();
        const bool exponential = dist.is<Exponential>();
        if (!bounded && !gaussian && !exponential)
            throw ConfigError("coverage supports uniform, gaussian and exponential laws, got " + dist.describe());
        if (gaussian && std::get<Gaussian>(dist.family()).mean != 0)
            throw ConfigError("the Gaussian bound assumes a zero-mean law, got " + dist.describe());

        for (auto n : cfg.n_list) {
            std::optional<TruncationFamily> family;
            double support_hi = 0;
            if (bounded) {
                support_hi = std::get<Uniform>(dist.family()).hi;
            } else {
                family = truncation_family_for(dist);
                support_hi = truncation_threshold(*family, n);
            }
            const BoundConstants k = compute_constants(dist, cfg.spectrum, support_hi, bounded);

            struct Case {
                std::string name;
                std::function<TailBoundReport(double, std::optional<std::size_t>)> bound;
                double threshold;
            };
            std::vector<Case> cases;
            if (bounded) {
                cases.push_back({"srm-i",
                                 [&](double e, std::optional<std::size_t> m) {
                                     return srm_bound_bounded(BoundedKind::FirstDeriv, n, e, k, m);
                                 },
                                 0.0});
                cases.push_back({"srm-ii",
                                 [&](double e, std::optional<std::size_t> m) {
                                     return srm_bound_bounded(BoundedKind::SecondDeriv, n, e, k, m);
                                 },
                                 0.0});
            } else if (gaussian) {
                const double sigma = std::get<Gaussian>(dist.family()).sigma;
                cases.push_back({"srm-gauss",
                                 [&, sigma](double e, std::optional<std::size_t> m) {
                                     return srm_bound_gaussian(n, e, sigma, k, std::nullopt, m);
                                 },
                                 2 * sigma * k.c1 / std::sqrt(static_cast<double>(n))});
            } else {
                const double lambda = std::get<Exponential>(dist.family()).lambda;
                const double nd = static_cast<double>(n);
                cases.push_back({"srm-exp",
                                 [&, lambda](double e, std::optional<std::size_t> m) {
                                     return srm_bound_exponential(n, e, lambda, k, std::nullopt, m);
                                 },
                                 k.c1 * (nd + 1) / (lambda * nd)});
            }

            for (const auto& c : cases) {
                std::vector<std::optional<double>> eps_list;
                if (cfg.epsilons.empty()) {
                    eps_list.push_back(epsilon_for_bound([&](double e) { return c.bound(e, std::nullopt); },
                                                         c.threshold, cfg.target_bound));
                } else {
                    for (double e : cfg.epsilons) eps_list.emplace_back(e);
                }

                for (const auto& eps : eps_list) {
                    const std::uint64_t seed = child_seed(cfg.seed, row_index++);
                    const std::string trunc = bounded ? std::string("off")
                                                      : truncation_text(cfg.truncation.value_or(TruncationMode::ZeroOut));
                    ResultRow row;
                    TailBoundReport report;
                    std::string note;
                    bool valid = false;
                    bool feasible = false;
                    std::size_t m = base_m;
                    if (!eps) {
                        note = "bound never reaches the target";
                    } else {
                        report = c.bound(*eps, std::nullopt);
                        valid = report.valid;
                        note = report.validity_note;
                        if (valid) {
                            feasible = report.min_m <= cfg.max_m;
                            if (feasible) {
                                m = std::max<std::size_t>(base_m, static_cast<std::size_t>(report.min_m));
                                report = c.bound(*eps, m);
                            } else {
                                note = "min_m exceeds " + std::to_string(cfg.max_m);
                            }
                        }
                    }

                    if (valid && feasible) {
                        EstimateSpec spec;
                        spec.spectrum = cfg.spectrum;
                        spec.m = m;
                        spec.metric = Metric::Exceeds;
                        spec.epsilon = *eps;
                        if (!bounded) {
                            spec.truncation = cfg.truncation.value_or(TruncationMode::ZeroOut);
                            spec.truncation_family = family;
                        }
                        row = estimate_row("coverage", dist, n, spec, cfg.replications, seed, cfg.threads);
                    } else {
                        const double nan = std::numeric_limits<double>::quiet_NaN();
                        row.experiment = "coverage";
                        row.params = {{"dist", dist.describe()},
                                      {"n", as_int(n)},
                                      {"estimator", std::string("srm")},
                                      {"spectrum", cfg.spectrum.describe()},
                                      {"m", as_int(m)},
                                      {"trunc", trunc},
                                      {"metric", std::string("exceeds")},
                                      {"epsilon", eps.value_or(nan)}};
                        row.estimate = row.std_error = row.spread = nan;
                        row.replications = 0;
                        row.seed = seed;
                    }
                    row.metrics.emplace_back("case", c.name);
                    row.metrics.emplace_back("bound", eps ? report.bound : std::numeric_limits<double>::quiet_NaN());
                    row.metrics.emplace_back("valid", valid);
                    row.metrics.emplace_back("feasible", feasible);
                    row.metrics.emplace_back("trivial", !eps || report.trivial);
                    row.metrics.emplace_back("min_m", static_cast<std::int64_t>(std::min<std::uint64_t>(
                                                          report.min_m, std::numeric_limits<std::int64_t>::max())));
                    row.metrics.emplace_back("note", note);
                    if (valid && feasible) row.metrics.emplace_back("pass", row.estimate <= report.bound);
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

BaiSummary run_bai(const ExperimentConfig& cfg) {
    validate(cfg);
    const ArmEnv& env = *cfg.env;
    const std::size_t m = cfg.m_list.front();
    const std::size_t runs = cfg.replications;

    std::optional<std::size_t> best = cfg.best_arm;
    if (!best) {
        try {
            std::vector<double> risk;
            for (const auto& arm : env.arms) risk.push_back(oracle_risk(cfg.functional, arm));
            best = static_cast<std::size_t>(std::min_element(risk.begin(), risk.end()) - risk.begin());
        } catch (const UnsupportedOperation&) {
            best.reset();
        }
    }

    std::vector<SRTrace> traces(runs);
    parallel_for(runs, cfg.threads, [&](std::size_t r) {
        traces[r] = successive_rejects(env, cfg.budget, m, cfg.functional, child_seed(cfg.seed, r));
    });

    BaiSummary out;
    out.histogram.assign(env.size(), 0);
    const std::string env_text = join_dists(env.arms);
    const std::string functional_text = describe(cfg.functional);
    for (std::size_t r = 0; r < runs; ++r) {
        const auto& t = traces[r];
        out.winners.push_back(t.winner);
        ++out.histogram[t.winner];
        const bool within = t.total_pulls <= cfg.budget;
        out.budget_ok = out.budget_ok && within;

        ResultRow row;
        row.experiment = "bai";
        row.params = {{"env", env_text},
                      {"functional", functional_text},
                      {"budget", as_int(cfg.budget)},
                      {"m", as_int(m)},
                      {"run", as_int(r)}};
        row.estimate = static_cast<double>(t.winner);
        row.replications = 1;
        row.seed = child_seed(cfg.seed, r);
        row.metrics.emplace_back("total_pulls", as_int(t.total_pulls));
        row.metrics.emplace_back("budget_ok", within);
        if (best) row.metrics.emplace_back("correct", t.winner == *best);
        out.rows.push_back(std::move(row));
    }

    ResultRow summary;
    summary.experiment = "bai-summary";
    summary.params = {{"env", env_text},
                      {"functional", functional_text},
                      {"budget", as_int(cfg.budget)},
                      {"m", as_int(m)},
                      {"runs", as_int(runs)}};
    summary.replications = runs;
    summary.seed = cfg.seed;
    if (best) {
        const double p = static_cast<double>(out.histogram[*best]) / static_cast<double>(runs);
        out.p_correct = p;
        summary.estimate = p;
        summary.spread = std::sqrt(p * (1 - p));
        summary.std_error = summary.spread / std::sqrt(static_cast<double>(runs));
        summary.metrics.emplace_back("best", as_int(*best));
    } else {
        summary.estimate = std::numeric_limits<double>::quiet_NaN();
        summary.std_error = std::numeric_limits<double>::quiet_NaN();
        summary.spread = std::numeric_limits<double>::quiet_NaN();
    }
    for (std::size_t a = 0; a < env.size(); ++a)
        summary.metrics.emplace_back("wins." + std::to_string(a), as_int(out.histogram[a]));
    summary.metrics.emplace_back("budget_ok", out.budget_ok);
    out.rows.push_back(std::move(summary));
    return out;
}

}  // namespace srm
