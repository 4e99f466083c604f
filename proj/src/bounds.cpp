#include "srm/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "srm/errors.hpp"
#include "srm/format.hpp"
#include "srm/numeric.hpp"

namespace srm {
namespace {

constexpr std::size_t kGridPoints = 10000;

struct DensityExtremes {
    double min_f = INFINITY;
    double max_ratio = 0;  // |f'| / f^3
};

DensityExtremes scan_density(const DistModel& dist, double beta_lo, double support_hi) {
    DensityExtremes out;
    std::size_t used = 0;
    auto visit = [&](double x) {
        const double f = pdf(dist, x);
        ++used;
        if (!(f > 0)) {
            out.min_f = 0;
            out.max_ratio = INFINITY;
            return;
        }
        out.min_f = std::min(out.min_f, f);
        out.max_ratio = std::max(out.max_ratio, std::abs(pdf_derivative(dist, x)) / (f * f * f));
    };
    for (std::size_t j = 1; j <= kGridPoints; ++j) {
        const double beta = beta_lo + (1 - beta_lo) * (static_cast<double>(j) - 0.5) / kGridPoints;
        const double x = quantile(dist, beta);
        if (x <= support_hi) visit(x);
    }
    if (cdf(dist, support_hi) > 0 && pdf(dist, support_hi) > 0) visit(support_hi);
    if (used == 0)
        throw DomainError("compute_constants: no grid quantile lies at or below support_hi=" + fmt_real(support_hi));
    return out;
}

void require_epsilon(double epsilon) {
    if (!(epsilon > 0)) throw DomainError("bound: need epsilon > 0");
}

void finish(TailBoundReport& r, std::optional<std::size_t> m) {
    if (r.valid && m && *m < r.min_m) {
        r.valid = false;
        r.validity_note = "m=" + std::to_string(*m) + " below min_m=" + std::to_string(r.min_m);
    }
    if (!r.valid) r.bound = 1;
    r.trivial = !r.valid || r.bound >= 1;
}

// Shared shape of the unbounded-law bounds: prefactor/(eps - t) * exp(-rate (eps - t)^2).
TailBoundReport shifted_bound(std::string name, std::size_t n, double epsilon, double threshold, double prefactor,
                              double rate, double min_m_raw, std::optional<std::size_t> m) {
    TailBoundReport r;
    r.name = std::move(name);
    r.n = n;
    r.epsilon = epsilon;
    r.min_m = saturating_count(min_m_raw);
    if (!(epsilon > threshold)) {
        r.valid = false;
        r.validity_note = "epsilon must exceed " + fmt_real(threshold);
    } else {
        const double slack = epsilon - threshold;
        r.valid = true;
        r.bound = prefactor / slack * std::exp(-rate * slack * slack);
    }
    finish(r, m);
    return r;
}

double require_count(std::size_t n) {
    if (n == 0) throw DomainError("bound: need n >= 1");
    return static_cast<double>(n);
}

}  // namespace

BoundConstants compute_constants(const DistModel& dist, const Spectrum& phi, double support_hi,
                                 bool require_second) {
    if (!phi.c2()) throw MissingConstantError("compute_constants: spectrum " + phi.describe() + " declares no C2");
    if (require_second && !phi.c3())
        throw MissingConstantError("compute_constants: spectrum " + phi.describe() + " declares no C3");
    const DensityExtremes ext = scan_density(dist, 0.0, support_hi);
    BoundConstants k;
    k.c1 = phi.c1();
    k.c2 = *phi.c2();
    k.c3 = phi.c3();
    k.support_hi = support_hi;
    k.delta1 = 1 / ext.min_f;
    k.delta2 = ext.max_ratio;
    k.k1 = std::abs(support_hi * k.c2 + k.delta1 * k.c1);
    if (k.c3) k.k2 = std::abs(support_hi * *k.c3 + 2 * k.delta1 * k.c2 + k.delta2 * k.c1);
    k.c = ext.min_f * ext.min_f;
    return k;
}

BoundConstants compute_cvar_constants(const DistModel& dist, double alpha, double support_hi) {
    if (!(alpha > 0 && alpha < 1)) throw DomainError("compute_cvar_constants: need 0 < alpha < 1");
    const DensityExtremes ext = scan_density(dist, alpha, support_hi);
    BoundConstants k;
    k.c1 = 1;
    k.c2 = 0;
    k.c3 = 0.0;
    k.support_hi = support_hi;
    k.delta1 = 1 / ext.min_f;
    k.delta2 = ext.max_ratio;
    k.k1 = k.delta1;
    k.k2 = k.delta2;
    k.c = ext.min_f * ext.min_f;
    return k;
}

double trapz_error_first(double k1, double a, double b, std::size_t m) {
    if (m == 0) throw DomainError("trapz_error_first: need m >= 1");
    return k1 * (b - a) * (b - a) / (4 * static_cast<double>(m));
}

double trapz_error_second(double k2, double a, double b, std::size_t m) {
    if (m == 0) throw DomainError("trapz_error_second: need m >= 1");
    const double md = static_cast<double>(m);
    return k2 * (b - a) * (b - a) * (b - a) / (12 * md * md);
}

TailBoundReport srm_bound_bounded(BoundedKind kind, std::size_t n, double epsilon, const BoundConstants& k,
                                  std::optional<std::size_t> m) {
    require_epsilon(epsilon);
    const double nd = require_count(n);
    TailBoundReport r;
    r.n = n;
    r.epsilon = epsilon;
    r.valid = true;
    const double decay = std::exp(-nd * k.c * epsilon * epsilon / (2 * k.c1 * k.c1));
    if (kind == BoundedKind::FirstDeriv) {
        r.name = "srm-i";
        r.bound = 2 * k.k1 / epsilon * decay;
        r.min_m = saturating_count(k.k1 / (2 * epsilon));
    } else {
        if (!k.k2) throw MissingConstantError("srm_bound_bounded: second-derivative bound needs K2");
        r.name = "srm-ii";
        r.bound = std::sqrt(8 * *k.k2 / (3 * epsilon)) * decay;
        r.min_m = saturating_count(std::sqrt(*k.k2 / (6 * epsilon)));
    }
    finish(r, m);
    return r;
}

TailBoundReport srm_bound_gaussian(std::size_t n, double epsilon, double sigma, const BoundConstants& k,
                                   std::optional<double> sigma_max, std::optional<std::size_t> m) {
    require_epsilon(epsilon);
    const double nd = require_count(n);
    if (!(sigma > 0)) throw DomainError("srm_bound_gaussian: need sigma > 0");
    const double smax = sigma_max.value_or(sigma);
    const double c1sq = k.c1 * k.c1;
    const double threshold = 2 * sigma * k.c1 / std::sqrt(nd);
    const double prefactor =
        2 * sigma * (std::sqrt(2 * std::log(nd)) * k.c2 + std::sqrt(2 * std::numbers::pi) * nd * k.c1);
    const double min_m = 0.2 * std::sqrt(smax / epsilon) * std::exp(nd * k.c * epsilon * epsilon / (4 * c1sq));
    return shifted_bound("srm-gauss", n, epsilon, threshold, prefactor, nd * k.c / (2 * c1sq), min_m, m);
}

TailBoundReport srm_bound_exponential(std::size_t n, double epsilon, double lambda, const BoundConstants& k,
                                      std::optional<double> lambda_min, std::optional<std::size_t> m) {
    require_epsilon(epsilon);
    const double nd = require_count(n);
    if (!(lambda > 0)) throw DomainError("srm_bound_exponential: need lambda > 0");
    const double lmin = lambda_min.value_or(lambda);
    const double c1sq = k.c1 * k.c1;
    const double threshold = k.c1 * (nd + 1) / (lambda * nd);
    const double prefactor = 2 * (std::log(nd) * k.c2 / lambda + nd * k.c1);
    const double min_m =
        0.125 * std::sqrt(1 / (lmin * epsilon)) * std::exp(nd * k.c * epsilon * epsilon / (4 * c1sq));
    return shifted_bound("srm-exp", n, epsilon, threshold, prefactor, nd * k.c / (2 * c1sq), min_m, m);
}

TailBoundReport cvar_bound(CvarCase which, double alpha, std::size_t n, double epsilon, const CvarBoundParams& p,
                           std::optional<std::size_t> m) {
    require_epsilon(epsilon);
    if (!(alpha > 0 && alpha < 1)) throw DomainError("cvar_bound: need 0 < alpha < 1");
    const double nd = require_count(n);
    const double tail = 1 - alpha;
    const double rate = nd * p.c / 2;
    switch (which) {
        case CvarCase::BoundedFirst:
        case CvarCase::BoundedSecond: {
            TailBoundReport r;
            r.n = n;
            r.epsilon = epsilon;
            r.valid = true;
            const double decay = std::exp(-rate * epsilon * epsilon);
            if (which == CvarCase::BoundedFirst) {
                r.name = "cvar-i";
                r.bound = 2 * p.k1 * tail / epsilon * decay;
                r.min_m = saturating_count(p.k1 * tail / (2 * epsilon));
            } else {
                if (!p.k2) throw MissingConstantError("cvar_bound: second-derivative case needs K2");
                r.name = "cvar-ii";
                r.bound = std::sqrt(8 * *p.k2 * tail * tail / (3 * epsilon)) * decay;
                r.min_m = saturating_count(std::sqrt(*p.k2 * tail * tail / (6 * epsilon)));
            }
            finish(r, m);
            return r;
        }
        case CvarCase::Gaussian: {
            if (!(p.sigma > 0)) throw DomainError("cvar_bound: need sigma > 0");
            const double threshold = 2 * p.sigma / (tail * std::sqrt(nd));
            const double prefactor = 2 * tail * p.sigma * std::sqrt(2 * std::numbers::pi) * nd;
            const double min_m = 0.2 * std::sqrt(p.sigma_max.value_or(p.sigma) * tail / epsilon) *
                                 std::exp(nd * p.c * epsilon * epsilon / 4);
            return shifted_bound("cvar-gauss", n, epsilon, threshold, prefactor, rate, min_m, m);
        }
        case CvarCase::Exponential: {
            if (!(p.lambda > 0)) throw DomainError("cvar_bound: need lambda > 0");
            const double threshold = (nd + 1) / (tail * p.lambda * nd);
            const double prefactor = 2 * tail * nd;
            const double min_m = 0.125 * std::sqrt(tail / (p.lambda_min.value_or(p.lambda) * epsilon)) *
                                 std::exp(nd * p.c * epsilon * epsilon / 4);
            return shifted_bound("cvar-exp", n, epsilon, threshold, prefactor, rate, min_m, m);
        }
    }
    throw DomainError("cvar_bound: unknown case");
}

double var_bound(std::size_t n, double epsilon, double c_bar) {
    require_epsilon(epsilon);
    if (!(c_bar > 0)) throw DomainError("var_bound: need c_bar > 0");
    return 2 * std::exp(-2 * static_cast<double>(n) * c_bar * epsilon * epsilon);
}

}  // namespace srm
