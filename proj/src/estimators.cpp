#include "srm/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "srm/errors.hpp"
#include "srm/format.hpp"
#include "srm/numeric.hpp"

namespace srm {
namespace {

void require_level(double alpha, const char* what) {
    if (!(alpha > 0 && alpha < 1)) throw DomainError(std::string(what) + ": need 0 < alpha < 1");
}

}  // namespace

std::size_t var_index(std::size_t n, double beta) {
    if (!(beta >= 0 && beta <= 1)) throw DomainError("empirical_var: need 0 <= beta <= 1, got " + fmt_real(beta));
    const double k = snapped_ceil(static_cast<double>(n) * beta);
    return std::clamp<std::size_t>(static_cast<std::size_t>(k), 1, n);
}

double empirical_var(const OrderedSamples& s, double beta) { return s.order_statistic(var_index(s.size(), beta)); }

double sample_mean(const OrderedSamples& s) {
    const auto v = s.values();
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double weighted_trapz(const OrderedSamples& s, const std::function<double(double)>& weight,
                      const Partition& grid) {
    double sum = 0;
    double left = weight(grid.lo) * empirical_var(s, grid.lo);
    for (std::size_t k = 1; k <= grid.m; ++k) {
        const double beta = grid.point(k);
        const double right = weight(beta) * empirical_var(s, beta);
        sum += left + right;
        left = right;
    }
    return sum * grid.step() / 2;
}

double srm_trapz(const OrderedSamples& s, const Spectrum& phi, std::size_t m) {
    return weighted_trapz(s, std::cref(phi), Partition(0, 1, m));
}

double spectrum_trapz_weight(const Spectrum& phi, std::size_t m) {
    const Partition grid(0, 1, m);
    double sum = 0;
    for (std::size_t k = 1; k <= m; ++k) sum += phi(grid.point(k - 1)) + phi(grid.point(k));
    return sum * grid.step() / 2;
}

double classic_cvar(const OrderedSamples& s, double alpha) {
    require_level(alpha, "classic_cvar");
    const double v = empirical_var(s, alpha);
    double excess = 0;
    for (double x : s.values()) excess += std::max(0.0, x - v);
    return v + excess / (static_cast<double>(s.size()) * (1 - alpha));
}

double cvar_trapz(const OrderedSamples& s, double alpha, std::size_t m) {
    require_level(alpha, "cvar_trapz");
    const auto one = [](double) { return 1.0; };
    return weighted_trapz(s, one, Partition(alpha, 1, m)) / (1 - alpha);
}

TruncationFamily truncation_family_for(const DistModel& dist) {
    if (const auto* g = std::get_if<Gaussian>(&dist.family())) return GaussianTruncation{g->sigma};
    if (const auto* e = std::get_if<Exponential>(&dist.family())) return ExponentialTruncation{e->lambda};
    throw DomainError("truncation: only gaussian and exponential families have a threshold, got " + dist.describe());
}

double truncation_threshold(const TruncationFamily& family, std::size_t n) {
    if (n < 2) throw DomainError("truncation_threshold: need n >= 2");
    const double log_n = std::log(static_cast<double>(n));
    if (const auto* g = std::get_if<GaussianTruncation>(&family)) {
        if (!(g->sigma > 0)) throw DomainError("truncation_threshold: need sigma > 0");
        return std::sqrt(2 * g->sigma * g->sigma * log_n);
    }
    const auto& e = std::get<ExponentialTruncation>(family);
    if (!(e.lambda > 0)) throw DomainError("truncation_threshold: need lambda > 0");
    return log_n / e.lambda;
}

OrderedSamples truncate_samples(const OrderedSamples& s, double b, TruncationMode mode) {
    std::vector<double> out(s.values().begin(), s.values().end());
    for (double& x : out) {
        if (x <= b) continue;
        x = mode == TruncationMode::ZeroOut ? 0.0 : b;
    }
    return OrderedSamples(std::move(out));
}

double srm_trapz_truncated(const OrderedSamples& s, const Spectrum& phi, std::size_t m,
                           const TruncationFamily& family, TruncationMode mode) {
    const double b = truncation_threshold(family, s.size());
    return srm_trapz(truncate_samples(s, b, mode), phi, m);
}

double cvar_trapz_truncated(const OrderedSamples& s, double alpha, std::size_t m,
                            const TruncationFamily& family, TruncationMode mode) {
    const double b = truncation_threshold(family, s.size());
    return cvar_trapz(truncate_samples(s, b, mode), alpha, m);
}

}  // namespace srm
