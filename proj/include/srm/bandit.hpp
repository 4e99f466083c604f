#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "srm/dist_models.hpp"
#include "srm/samples.hpp"
#include "srm/spectrum.hpp"

namespace srm {

// K >= 2 arms with loss (delay) distributions.
struct ArmEnv {
    std::vector<DistModel> arms;
    std::uint64_t rng_seed = 0;

    ArmEnv(std::vector<DistModel> arms_, std::uint64_t seed = 0);
    std::size_t size() const { return arms.size(); }
};

// One "family:params" per line; blank lines and '#' comments ignored.
ArmEnv load_env(const std::filesystem::path& file, std::uint64_t seed = 0);

// Five Gaussian arms whose means and exact SRMs (expk:5) reproduce the
// route table of the traffic experiment: arm 3 has the lowest mean, arm 1
// the lowest SRM.
ArmEnv route_env(std::uint64_t seed = 0);

struct MeanFunctional {};
struct CVaRFunctional {
    double alpha;
};
struct SRMFunctional {
    Spectrum spectrum;
};
using RiskFunctional = std::variant<MeanFunctional, CVaRFunctional, SRMFunctional>;

// "mean", "cvar:<alpha>", "srm:<spectrum spec>" (e.g. "srm:expk:5").
RiskFunctional parse_functional(std::string_view spec);
std::string describe(const RiskFunctional& f);

// Mean: sample mean; CVaR: cvar_trapz with m; SRM: srm_trapz with m.
double estimate_risk(const RiskFunctional& f, const OrderedSamples& s, std::size_t m);

// 1/2 + sum_{i=2}^K 1/i.
double log_bar(std::size_t k);

// Cumulative per-arm pull counts n_1 <= ... <= n_{K-1},
// n_k = ceil((n - K) / (log_bar(K) (K + 1 - k))). If the resulting schedule
// would spend more than n pulls, the last phase is trimmed until it fits.
// DomainError when n <= K.
std::vector<std::size_t> phase_lengths(std::size_t n, std::size_t k);

// Total pulls spent by a schedule on K arms.
std::size_t schedule_pulls(const std::vector<std::size_t>& lengths, std::size_t k);

struct SRTrace {
    std::vector<std::size_t> phase_lengths;
    std::vector<std::size_t> eliminated;  // in elimination order
    std::map<std::pair<std::size_t, std::size_t>, double> per_phase_estimates;  // (phase, arm), phase is 1-based
    std::vector<std::size_t> pulls;  // per arm
    std::size_t winner = 0;
    std::size_t total_pulls = 0;

    friend bool operator==(const SRTrace&, const SRTrace&) = default;
};

// Successive rejects on losses: after phase k the surviving arm with the
// largest estimate (computed on all of its samples so far) is removed, ties
// broken uniformly at random. Arm i draws from the stream
// child_seed(seed, i); tie-breaks draw from a separate child stream.
SRTrace successive_rejects(const ArmEnv& env, std::size_t n, std::size_t m, const RiskFunctional& functional,
                           std::uint64_t seed);

}  // namespace srm
