// Randomised algebraic properties of the estimators, 10^3 inputs each.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "srm/estimators.hpp"
#include "srm/rng.hpp"
#include "srm/spectrum.hpp"

using namespace srm;

namespace {

constexpr int kTrials = 1000;

struct Input {
    OrderedSamples s;
    std::size_t m;
};

Input random_input(RandomStream& r) {
    const std::size_t n = 1 + r.below(200);
    std::vector<double> v(n);
    const double scale = std::pow(10.0, 4 * r.uniform_open() - 2);
    for (auto& x : v) {
        x = scale * (2 * r.uniform_open() - 1);
        if (r.uniform_open() < 0.1) x = std::round(x);  // ties
    }
    return {OrderedSamples(v), 1 + r.below(300)};
}

std::vector<Spectrum> spectra() {
    return {exponential_spectrum(5), exponential_spectrum(0.3), cvar_spectrum(0.9),
            Spectrum::custom([](double) { return 1.0; }, 1, 0.0, 0.0, true, "one"),
            Spectrum::custom([](double b) { return 2 * b; }, 2, 2.0, 0.0, true, "linear")};
}

double scale_of(const OrderedSamples& s) { return std::max(std::abs(s.min()), std::abs(s.max())); }

}  // namespace

TEST(Property, PositiveHomogeneityPowerOfTwoIsExact) {
    RandomStream r(101);
    const auto phis = spectra();
    for (int t = 0; t < kTrials; ++t) {
        const auto in = random_input(r);
        const auto& phi = phis[t % phis.size()];
        const double lambda = std::ldexp(1.0, static_cast<int>(r.below(21)) - 10);
        ASSERT_EQ(srm_trapz(in.s.affine(lambda, 0), phi, in.m), lambda * srm_trapz(in.s, phi, in.m));
    }
}

TEST(Property, PositiveHomogeneity) {
    RandomStream r(102);
    const auto phis = spectra();
    for (int t = 0; t < kTrials; ++t) {
        const auto in = random_input(r);
        const auto& phi = phis[t % phis.size()];
        const double lambda = std::pow(10.0, 6 * r.uniform_open() - 3);
        const double lhs = srm_trapz(in.s.affine(lambda, 0), phi, in.m);
        const double rhs = lambda * srm_trapz(in.s, phi, in.m);
        ASSERT_NEAR(lhs, rhs, 1e-12 * lambda * scale_of(in.s) * phi.c1());
        const double alpha = 0.05 + 0.9 * r.uniform_open();
        ASSERT_NEAR(cvar_trapz(in.s.affine(lambda, 0), alpha, in.m), lambda * cvar_trapz(in.s, alpha, in.m),
                    1e-12 * lambda * scale_of(in.s) / (1 - alpha));
    }
}

TEST(Property, TranslationUnitSpectrum) {
    RandomStream r(103);
    const auto one = Spectrum::custom([](double) { return 1.0; }, 1, 0.0, 0.0, true, "one");
    for (int t = 0; t < kTrials; ++t) {
        const auto in = random_input(r);
        const double shift = std::ldexp(std::round(2000 * r.uniform_open() - 1000), -4);
        const double lhs = srm_trapz(in.s.affine(1, shift), one, in.m);
        const double rhs = srm_trapz(in.s, one, in.m) + shift;
        ASSERT_NEAR(lhs, rhs, 1e-12 * (scale_of(in.s) + std::abs(shift)));
    }
}

TEST(Property, TranslationGeneralSpectrum) {
    RandomStream r(104);
    const auto phis = spectra();
    for (int t = 0; t < kTrials; ++t) {
        const auto in = random_input(r);
        const auto& phi = phis[t % phis.size()];
        const double shift = 100 * (2 * r.uniform_open() - 1);
        const double lhs = srm_trapz(in.s.affine(1, shift), phi, in.m);
        const double rhs = srm_trapz(in.s, phi, in.m) + shift * spectrum_trapz_weight(phi, in.m);
        ASSERT_NEAR(lhs, rhs, 1e-11 * (scale_of(in.s) + std::abs(shift)) * phi.c1());
    }
}

TEST(Property, Monotonicity) {
    RandomStream r(105);
    const auto phis = spectra();
    for (int t = 0; t < kTrials; ++t) {
        const auto in = random_input(r);
        const auto& phi = phis[t % phis.size()];
        std::vector<double> bigger(in.s.values().begin(), in.s.values().end());
        for (auto& x : bigger)
            if (r.uniform_open() < 0.5) x += scale_of(in.s) * r.uniform_open();
        const OrderedSamples s2(bigger);
        for (std::size_t i = 0; i < s2.size(); ++i) ASSERT_LE(in.s[i], s2[i]);
        ASSERT_LE(srm_trapz(in.s, phi, in.m), srm_trapz(s2, phi, in.m) + 1e-12 * scale_of(s2) * phi.c1());
    }
}

TEST(Property, EmpiricalVarNondecreasingInBeta) {
    RandomStream r(106);
    for (int t = 0; t < kTrials; ++t) {
        const auto in = random_input(r);
        double b1 = r.uniform_open(), b2 = r.uniform_open();
        if (b1 > b2) std::swap(b1, b2);
        if (t % 10 == 0) b1 = 0;
        if (t % 10 == 1) b2 = 1;
        ASSERT_LE(empirical_var(in.s, b1), empirical_var(in.s, b2));
        ASSERT_GE(var_index(in.s.size(), b1), 1u);
        ASSERT_LE(var_index(in.s.size(), b2), in.s.size());
    }
}

TEST(Property, EstimatorsBetweenSampleExtremes) {
    RandomStream r(107);
    const auto phis = spectra();
    for (int t = 0; t < kTrials; ++t) {
        const auto in = random_input(r);
        const auto& phi = phis[t % phis.size()];
        const double w = spectrum_trapz_weight(phi, in.m);
        const double est = srm_trapz(in.s, phi, in.m);
        const double tol = 1e-12 * scale_of(in.s) * phi.c1();
        ASSERT_GE(est, std::min(w * in.s.min(), w * in.s.max()) - tol);
        ASSERT_LE(est, std::max(w * in.s.min(), w * in.s.max()) + tol);
        const double alpha = 0.05 + 0.9 * r.uniform_open();
        for (double c : {classic_cvar(in.s, alpha), cvar_trapz(in.s, alpha, in.m)}) {
            ASSERT_GE(c, in.s.min() - 1e-9 * scale_of(in.s));
            ASSERT_LE(c, in.s.max() + 1e-9 * scale_of(in.s));
        }
    }
}
