#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srm/bandit.hpp"
#include "srm/bounds.hpp"
#include "srm/dist_models.hpp"
#include "srm/estimators.hpp"
#include "srm/results.hpp"
#include "srm/spectrum.hpp"

namespace srm {

enum class EstimatorKind { Srm, CvarTrapz, ClassicCvar, Var, Mean };
// Value: the estimate itself; AbsError: |oracle - estimate|;
// Exceeds: 1{|oracle - estimate| > epsilon}.
enum class Metric { Value, AbsError, Exceeds };

EstimatorKind parse_estimator(std::string_view s);
std::string to_string(EstimatorKind k);
Metric parse_metric(std::string_view s);
std::string to_string(Metric m);
// "zero", "clip", "off" (nullopt).
std::optional<TruncationMode> parse_truncation(std::string_view s);
std::string truncation_text(std::optional<TruncationMode> mode);

// What one replication computes from its samples.
struct EstimateSpec {
    EstimatorKind estimator = EstimatorKind::Srm;
    Spectrum spectrum = exponential_spectrum(5);
    double level = 0.95;  // alpha (CVaR) or beta (VaR)
    std::size_t m = 1000;
    std::optional<TruncationMode> truncation;
    std::optional<TruncationFamily> truncation_family;  // default: from the sampling law
    Metric metric = Metric::Value;
    double epsilon = 0;
};

// The estimator named by `spec` on `s` (truncated first when requested).
double apply_estimator(const EstimateSpec& spec, const OrderedSamples& s);

// The quantity the estimator targets under `dist`: analytic SRM / CVaR,
// the exact quantile, or the mean.
double oracle_value(const EstimateSpec& spec, const DistModel& dist, double tol = 1e-9);

struct Summary {
    double mean = 0;
    double spread = 0;     // sample standard deviation (n - 1)
    double std_error = 0;  // spread / sqrt(count)
    std::size_t count = 0;
};
Summary summarize(std::span<const double> values);

// body(i) for i in [0, count) on up to `threads` workers (0: hardware
// concurrency). Callers write only to slot i, so results do not depend on
// scheduling.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

// values[r] = fn(child_seed(seed, r)).
std::vector<double> replicate(std::size_t replications, std::uint64_t seed, std::size_t threads,
                              const std::function<double(std::uint64_t)>& fn);

// R replications of `spec` on n-sample batches drawn from `dist`, replication
// r using seed child_seed(seed, r). The row's params are the estimate
// subcommand's flags, so the row reproduces in isolation.
ResultRow estimate_row(const std::string& experiment, const DistModel& dist, std::size_t n, const EstimateSpec& spec,
                       std::size_t replications, std::uint64_t seed, std::size_t threads = 0);

enum class Experiment { Curve, Table, Coverage, Bai, Bound, Estimate, Oracle };

struct ExperimentConfig {
    Experiment experiment = Experiment::Estimate;
    std::vector<DistModel> dists;
    Spectrum spectrum = exponential_spectrum(5);
    std::vector<std::size_t> n_list;
    std::vector<std::size_t> m_list;
    std::vector<double> epsilons;  // coverage: empty selects epsilon automatically
    std::size_t replications = 1000;
    std::uint64_t seed = 0;
    std::filesystem::path out = "-";
    OutputFormat format = OutputFormat::Csv;
    std::optional<TruncationMode> truncation;
    std::size_t threads = 0;

    // bai
    std::optional<ArmEnv> env;
    RiskFunctional functional = SRMFunctional{exponential_spectrum(5)};
    std::size_t budget = 1000;
    std::optional<std::size_t> best_arm;

    // coverage
    double target_bound = 0.25;
    std::size_t max_m = 1000000;
};

// Defaults per experiment:
//   Curve    gaussian:0.5,5; m {150, 500}; n {100, 250, 500, 1000, 2500, 5000, 10000}; R = 1000
//   Table    exp:0.2, gaussian:0,100, exp:0.01, uniform:-1000,1000; n = 10^4; m = 1000; R = 1000
//   Coverage uniform:0,1, gaussian:0,1, exp:1; n {1000, 10000}; m = 1000; R = 10^4; ZeroOut truncation
//   Bai      route_env(); budget 1000; m = 100; srm:expk:5; R = 500; best arm 1
ExperimentConfig default_config(Experiment e);

// ConfigError unless R >= 1 and the lists the experiment uses are non-empty.
void validate(const ExperimentConfig& cfg);

// Rows per (n, m): mean |analytic_srm - srm_trapz| across R replications.
// Both m share the replication seeds for a given n.
std::vector<ResultRow> run_curve(const ExperimentConfig& cfg);

// Rows per distribution: Monte Carlo mean / std error / spread of the SRM
// estimate plus the oracle (computed once per distribution) as a metric.
std::vector<ResultRow> run_table(const ExperimentConfig& cfg);

// Finds the epsilon at which `bound_at` reports `target` (bisection on the
// valid region, where the bound decreases in epsilon). nullopt if the bound
// never drops to the target.
std::optional<double> epsilon_for_bound(const std::function<TailBoundReport(double)>& bound_at, double threshold,
                                        double target);

// Rows per (distribution, n, theorem, epsilon): empirical frequency of
// |S - estimate| > epsilon alongside the bound. Bounded laws use srm_trapz and
// both bounded-case bounds; Gaussian / exponential laws use the truncated
// estimator and their own theorems. m = max(min_m, m_list[0]); tuples whose
// min_m exceeds max_m are reported infeasible and not simulated.
std::vector<ResultRow> run_coverage(const ExperimentConfig& cfg);

struct BaiSummary {
    std::vector<std::size_t> winners;  // per run
    std::vector<std::size_t> histogram;
    std::optional<double> p_correct;
    bool budget_ok = true;
    std::vector<ResultRow> rows;  // one per run, then a "bai-summary" row
};

BaiSummary run_bai(const ExperimentConfig& cfg);

}  // namespace srm
