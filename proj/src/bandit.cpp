#include "srm/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "srm/errors.hpp"
#include "srm/estimators.hpp"
#include "srm/format.hpp"
#include "srm/rng.hpp"

namespace srm {
namespace {

// Stream index reserved for tie-breaking; arm ids stay far below it.
constexpr std::uint64_t kTieBreakStream = 0xFFFF'FFFF'0000'0001ULL;

}  // namespace

ArmEnv::ArmEnv(std::vector<DistModel> arms_, std::uint64_t seed) : arms(std::move(arms_)), rng_seed(seed) {
    if (arms.size() < 2) throw DomainError("ArmEnv: need at least two arms");
}

ArmEnv load_env(const std::filesystem::path& file, std::uint64_t seed) {
    std::ifstream in(file);
    if (!in) throw ConfigError("environment: cannot open " + file.string());
    std::vector<DistModel> arms;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        arms.push_back(parse_dist(line.substr(first, last - first + 1)));
    }
    if (arms.size() < 2) throw ConfigError("environment " + file.string() + ": need at least two arms");
    return ArmEnv(std::move(arms), seed);
}

ArmEnv route_env(std::uint64_t seed) {
    // Mean and target SRM per route; sigma = (SRM - mean) / int phi V_std,
    // the standard-normal SRM of expk:5.
    static constexpr std::pair<double, double> kRoutes[] = {
        {283.81, 431.28}, {287.15, 361.81}, {306.80, 455.83}, {266.85, 378.68}, {325.86, 390.95}};
    const double unit_srm = analytic_srm(DistModel::gaussian(0, 1), exponential_spectrum(5), 1e-10);
    std::vector<DistModel> arms;
    for (auto [mu, target] : kRoutes) arms.push_back(DistModel::gaussian(mu, (target - mu) / unit_srm));
    return ArmEnv(std::move(arms), seed);
}

RiskFunctional parse_functional(std::string_view spec) {
    if (spec == "mean") return MeanFunctional{};
    const auto colon = spec.find(':');
    if (colon != std::string_view::npos) {
        const std::string_view head = spec.substr(0, colon);
        const std::string_view rest = spec.substr(colon + 1);
        if (head == "cvar") {
            Spectrum s = parse_spectrum(spec);  // validates alpha
            return CVaRFunctional{std::get<CVaRIndicator>(s.kind()).alpha};
        }
        if (head == "srm") return SRMFunctional{parse_spectrum(rest)};
    }
    throw ConfigError("functional must be mean, cvar:<alpha> or srm:<spectrum>, got '" + std::string(spec) + "'");
}

std::string describe(const RiskFunctional& f) {
    if (std::holds_alternative<MeanFunctional>(f)) return "mean";
    if (const auto* c = std::get_if<CVaRFunctional>(&f)) return "cvar:" + fmt_real(c->alpha);
    return "srm:" + std::get<SRMFunctional>(f).spectrum.describe();
}

double estimate_risk(const RiskFunctional& f, const OrderedSamples& s, std::size_t m) {
    if (std::holds_alternative<MeanFunctional>(f)) return sample_mean(s);
    if (const auto* c = std::get_if<CVaRFunctional>(&f)) return cvar_trapz(s, c->alpha, m);
    return srm_trapz(s, std::get<SRMFunctional>(f).spectrum, m);
}

double log_bar(std::size_t k) {
    double sum = 0.5;
    for (std::size_t i = 2; i <= k; ++i) sum += 1.0 / static_cast<double>(i);
    return sum;
}

std::size_t schedule_pulls(const std::vector<std::size_t>& lengths, std::size_t k) {
    std::size_t total = 0;
    std::size_t previous = 0;
    for (std::size_t phase = 1; phase <= lengths.size(); ++phase) {
        const std::size_t surviving = k + 1 - phase;
        total += (lengths[phase - 1] - previous) * surviving;
        previous = lengths[phase - 1];
    }
    return total;
}

std::vector<std::size_t> phase_lengths(std::size_t n, std::size_t k) {
    if (k < 2) throw DomainError("phase_lengths: need K >= 2");
    if (n <= k) throw DomainError("phase_lengths: need budget n > K");
    const double scale = static_cast<double>(n - k) / log_bar(k);
    std::vector<std::size_t> lengths(k - 1);
    for (std::size_t phase = 1; phase < k; ++phase)
        lengths[phase - 1] = static_cast<std::size_t>(std::ceil(scale / static_cast<double>(k + 1 - phase)));
    const std::size_t floor_last = lengths.size() > 1 ? lengths[lengths.size() - 2] : 0;
    while (schedule_pulls(lengths, k) > n && lengths.back() > floor_last) --lengths.back();
    if (schedule_pulls(lengths, k) > n) throw DomainError("phase_lengths: schedule cannot fit the budget");
    return lengths;
}

SRTrace successive_rejects(const ArmEnv& env, std::size_t n, std::size_t m, const RiskFunctional& functional,
                           std::uint64_t seed) {
    const std::size_t k = env.size();
    SRTrace trace;
    trace.phase_lengths = phase_lengths(n, k);
    trace.pulls.assign(k, 0);

    std::vector<RandomStream> streams;
    streams.reserve(k);
    for (std::size_t arm = 0; arm < k; ++arm) streams.emplace_back(child_seed(seed, arm));
    RandomStream tie_break(child_seed(seed, kTieBreakStream));

    std::vector<std::vector<double>> draws(k);
    std::vector<std::size_t> active(k);
    for (std::size_t arm = 0; arm < k; ++arm) active[arm] = arm;

    std::size_t previous = 0;
    for (std::size_t phase = 1; phase < k; ++phase) {
        const std::size_t target = trace.phase_lengths[phase - 1];
        for (std::size_t arm : active) {
            for (std::size_t t = previous; t < target; ++t) draws[arm].push_back(draw(env.arms[arm], streams[arm]));
            trace.pulls[arm] = draws[arm].size();
        }
        previous = target;

        double worst = -INFINITY;
        std::vector<std::size_t> worst_arms;
        for (std::size_t arm : active) {
            const double est = estimate_risk(functional, OrderedSamples(draws[arm]), m);
            trace.per_phase_estimates[{phase, arm}] = est;
            if (est > worst) {
                worst = est;
                worst_arms.assign(1, arm);
            } else if (est == worst) {
                worst_arms.push_back(arm);
            }
        }
        const std::size_t loser =
            worst_arms.size() == 1 ? worst_arms.front() : worst_arms[tie_break.below(worst_arms.size())];
        trace.eliminated.push_back(loser);
        active.erase(std::find(active.begin(), active.end(), loser));
    }
    trace.winner = active.front();
    trace.total_pulls = 0;
    for (std::size_t p : trace.pulls) trace.total_pulls += p;
    return trace;
}

}  // namespace srm
