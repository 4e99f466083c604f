#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "srm/bandit.hpp"
#include "srm/dist_models.hpp"
#include "srm/errors.hpp"
#include "srm/spectrum.hpp"

using namespace srm;

namespace {

const RiskFunctional kSrm = SRMFunctional{exponential_spectrum(5)};

ArmEnv points(std::vector<double> values) {
    std::vector<DistModel> arms;
    for (double v : values) arms.push_back(DistModel::point(v));
    return ArmEnv(arms);
}

}  // namespace

TEST(PhaseLengths, LogBar) {
    EXPECT_DOUBLE_EQ(log_bar(2), 1.0);
    EXPECT_NEAR(log_bar(5), 0.5 + 0.5 + 1.0 / 3 + 0.25 + 0.2, 1e-15);
    EXPECT_NEAR(log_bar(5), 1.78333, 5e-6);
}

TEST(PhaseLengths, TwoArms) {
    // ceil((12 - 2) / (1 * 2)) = 5; both arms pulled 5 times.
    EXPECT_EQ(phase_lengths(12, 2), std::vector<std::size_t>{5});
    EXPECT_EQ(schedule_pulls(phase_lengths(12, 2), 2), 10u);
}

TEST(PhaseLengths, FiveArmsThousandPulls) {
    const double lb = 0.5 + 0.5 + 1.0 / 3 + 0.25 + 0.2;
    std::vector<std::size_t> want;
    for (int k = 1; k <= 4; ++k) want.push_back(static_cast<std::size_t>(std::ceil(995 / (lb * (6 - k)))));
    EXPECT_EQ(want, (std::vector<std::size_t>{112, 140, 186, 279}));
    EXPECT_EQ(phase_lengths(1000, 5), want);
    // n_1 pulls for all five, then increments for the survivors.
    EXPECT_EQ(schedule_pulls(want, 5), 5 * 112u + 4 * 28u + 3 * 46u + 2 * 93u);
    EXPECT_LE(schedule_pulls(want, 5), 1000u);
}

TEST(PhaseLengths, Errors) {
    EXPECT_THROW(phase_lengths(5, 5), DomainError);
    EXPECT_THROW(phase_lengths(4, 5), DomainError);
    EXPECT_THROW(phase_lengths(100, 1), DomainError);
}

TEST(PhaseLengths, BudgetHoldsOnGrid) {
    for (std::size_t k = 2; k <= 10; ++k) {
        for (std::size_t n = 50; n <= 5000; ++n) {
            const auto l = phase_lengths(n, k);
            ASSERT_EQ(l.size(), k - 1);
            ASSERT_TRUE(std::is_sorted(l.begin(), l.end()));
            ASSERT_GE(l.front(), 1u);
            ASSERT_LE(schedule_pulls(l, k), n) << "n=" << n << " K=" << k;
        }
    }
}

TEST(SuccessiveRejects, PointMassSeparation) {
    const auto env = points({1, 5});
    for (const auto& f : {RiskFunctional{MeanFunctional{}}, RiskFunctional{CVaRFunctional{0.9}}, kSrm})
        for (std::uint64_t seed = 0; seed < 20; ++seed) EXPECT_EQ(successive_rejects(env, 50, 20, f, seed).winner, 0u);
}

TEST(SuccessiveRejects, MeanRanksWellSeparatedPointMasses) {
    const auto env = points({4, 2, 9, 1, 7, 3});
    const auto t = successive_rejects(env, 600, 10, MeanFunctional{}, 3);
    EXPECT_EQ(t.eliminated, (std::vector<std::size_t>{2, 4, 0, 5, 1}));
    EXPECT_EQ(t.winner, 3u);
}

TEST(SuccessiveRejects, TraceInvariants) {
    const ArmEnv env({DistModel::gaussian(1, 2), DistModel::gaussian(0, 3), DistModel::exponential(0.5),
                      DistModel::uniform(-1, 4), DistModel::gaussian(2, 0.5)});
    for (std::size_t n : {50u, 333u, 1000u, 4999u}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto t = successive_rejects(env, n, 50, kSrm, seed);
            const auto l = phase_lengths(n, env.size());
            EXPECT_EQ(t.phase_lengths, l);
            EXPECT_LE(t.total_pulls, n);
            ASSERT_EQ(t.eliminated.size(), env.size() - 1);
            const std::set<std::size_t> gone(t.eliminated.begin(), t.eliminated.end());
            EXPECT_EQ(gone.size(), env.size() - 1);
            EXPECT_EQ(gone.count(t.winner), 0u);
            // An arm eliminated in phase k stops at n_k pulls.
            for (std::size_t k = 0; k < t.eliminated.size(); ++k) EXPECT_EQ(t.pulls[t.eliminated[k]], l[k]);
            EXPECT_EQ(t.pulls[t.winner], l.back());
            std::size_t sum = 0;
            for (auto p : t.pulls) sum += p;
            EXPECT_EQ(sum, t.total_pulls);
            // Every surviving arm has an estimate in every phase it took part in.
            for (std::size_t k = 0; k < l.size(); ++k)
                for (std::size_t a = 0; a < env.size(); ++a) {
                    const bool alive = std::find(t.eliminated.begin(), t.eliminated.begin() + k, a) ==
                                       t.eliminated.begin() + k;
                    EXPECT_EQ(t.per_phase_estimates.count({k + 1, a}), alive ? 1u : 0u);
                }
            // The loser of each phase had the largest estimate among that phase's survivors.
            for (std::size_t k = 0; k < l.size(); ++k) {
                const double lost = t.per_phase_estimates.at({k + 1, t.eliminated[k]});
                for (const auto& [key, v] : t.per_phase_estimates)
                    if (key.first == k + 1) EXPECT_LE(v, lost);
            }
        }
    }
}

TEST(SuccessiveRejects, Deterministic) {
    const auto env = route_env();
    const auto a = successive_rejects(env, 1000, 100, kSrm, 77);
    const auto b = successive_rejects(env, 1000, 100, kSrm, 77);
    EXPECT_TRUE(a == b);
    int differ = 0;
    for (std::uint64_t s = 0; s < 10; ++s)
        differ += !(successive_rejects(env, 1000, 100, kSrm, s).per_phase_estimates == a.per_phase_estimates);
    EXPECT_EQ(differ, 10);
}

TEST(SuccessiveRejects, IdenticalArmsWinUniformly) {
    const ArmEnv env({DistModel::gaussian(0, 1), DistModel::gaussian(0, 1), DistModel::gaussian(0, 1)});
    const int runs = 10000;
    std::vector<int> wins(3, 0);
    for (int r = 0; r < runs; ++r) ++wins[successive_rejects(env, 40, 10, kSrm, r).winner];
    const double p = 1.0 / 3, sd = std::sqrt(runs * p * (1 - p));
    for (int w : wins) EXPECT_NEAR(w, runs * p, 3 * sd);
}

TEST(SuccessiveRejects, TiesBrokenFromSeededStream) {
    const auto env = points({2, 2, 2, 2});
    std::vector<int> wins(4, 0);
    for (int r = 0; r < 4000; ++r) ++wins[successive_rejects(env, 40, 5, MeanFunctional{}, r).winner];
    for (int w : wins) EXPECT_NEAR(w, 1000, 3 * std::sqrt(4000 * 0.25 * 0.75));
}

TEST(RouteEnv, MeanAndSrmMinimisersDiffer) {
    const auto env = route_env();
    ASSERT_EQ(env.size(), 5u);
    std::vector<double> means, srms;
    for (const auto& a : env.arms) {
        means.push_back(mean(a));
        srms.push_back(analytic_srm(a, exponential_spectrum(5)));
    }
    const auto argmin = [](const std::vector<double>& v) { return std::min_element(v.begin(), v.end()) - v.begin(); };
    EXPECT_EQ(argmin(means), 3);
    EXPECT_EQ(argmin(srms), 1);
    EXPECT_NEAR(means[3], 266.85, 1e-9);
    EXPECT_NEAR(srms[1], 361.81, 1e-6);
}

TEST(RouteEnv, SrmFunctionalFindsSrmMinimiser) {
    const auto env = route_env();
    int correct = 0;
    for (int r = 0; r < 500; ++r) correct += successive_rejects(env, 1000, 100, kSrm, r).winner == 1;
    EXPECT_GE(correct / 500.0, 0.8);
}

TEST(ArmEnv, Construction) {
    EXPECT_THROW(ArmEnv({DistModel::point(1)}), DomainError);
    const auto path = std::filesystem::temp_directory_path() / "srm_env.txt";
    std::ofstream(path) << "gaussian:1,2\n\nexp:0.5\nuniform:0,3\n";
    const auto env = load_env(path, 9);
    ASSERT_EQ(env.size(), 3u);
    EXPECT_EQ(env.arms[1].describe(), "exp:0.5");
    EXPECT_EQ(env.rng_seed, 9u);
    std::ofstream(path) << "gaussian:1,2\n";
    EXPECT_THROW(load_env(path), ConfigError);
    std::ofstream(path) << "gaussian:1,2\nbogus\n";
    EXPECT_THROW(load_env(path), ConfigError);
    EXPECT_THROW(load_env("/nonexistent/env.txt"), ConfigError);
}

TEST(Functional, ParseAndDescribe) {
    for (const char* s : {"mean", "cvar:0.95", "srm:expk:5"}) EXPECT_EQ(describe(parse_functional(s)), s);
    EXPECT_TRUE(std::holds_alternative<MeanFunctional>(parse_functional("mean")));
    EXPECT_THROW(parse_functional("median"), ConfigError);
    EXPECT_THROW(parse_functional("cvar:2"), ConfigError);
    const OrderedSamples s({1, 2, 3, 4});
    EXPECT_DOUBLE_EQ(estimate_risk(MeanFunctional{}, s, 10), 2.5);
}
