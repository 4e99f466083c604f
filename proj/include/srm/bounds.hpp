#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "srm/dist_models.hpp"
#include "srm/spectrum.hpp"

namespace srm {

// Constants consumed by the concentration bounds. K1 = |B C2 + delta1 C1|,
// K2 = |B C3 + 2 delta1 C2 + delta2 C1| (absent when the spectrum has no C3).
struct BoundConstants {
    double c1 = 0;
    double c2 = 0;
    std::optional<double> c3;
    double support_hi = 0;  // B
    double delta1 = 0;      // 1 / min density
    double delta2 = 0;      // max |f'| / f^3; +inf if unbounded on the grid
    double k1 = 0;
    std::optional<double> k2;
    double c = 1;  // exponent constant, overridable
};

// Density-derived constants on the quantile grid beta_j = (j - 1/2)/10^4,
// keeping points with V_beta <= support_hi, plus support_hi itself when the
// density there is positive. c defaults to the grid minimum of f(V_beta)^2,
// an interpretation of the exponent constant; callers may overwrite it.
// MissingConstantError when phi lacks C2, or lacks C3 and require_second.
BoundConstants compute_constants(const DistModel& dist, const Spectrum& phi, double support_hi,
                                 bool require_second = false);

// As above for the CVaR bounds: grid restricted to beta >= alpha and the
// indicator's 1/(1-alpha) factored out (C1 = 1, C2 = C3 = 0), so K1 = delta1
// and K2 = delta2.
BoundConstants compute_cvar_constants(const DistModel& dist, double alpha, double support_hi);

struct TailBoundReport {
    std::string name;  // "srm-i", "srm-gauss", "cvar-exp", ...
    std::size_t n = 0;
    double epsilon = 0;
    double bound = 1;  // raw right-hand side; 1 when not valid
    bool valid = false;
    bool trivial = true;  // bound >= 1, or not valid
    std::uint64_t min_m = 0;  // saturates at UINT64_MAX
    std::string validity_note;

    double reported() const { return bound < 1 ? bound : 1.0; }
};

// K1 (b-a)^2 / (4m).
double trapz_error_first(double k1, double a, double b, std::size_t m);
// K2 (b-a)^3 / (12 m^2).
double trapz_error_second(double k2, double a, double b, std::size_t m);

enum class BoundedKind { FirstDeriv, SecondDeriv };

// Bounded support. FirstDeriv: (2K1/eps) exp(-n c eps^2 / (2 C1^2)), min_m = ceil(K1/(2eps)).
// SecondDeriv: sqrt(8K2/(3eps)) exp(same), min_m = ceil(sqrt(K2/(6eps))).
// When `m` is given, m < min_m marks the report not valid.
TailBoundReport srm_bound_bounded(BoundedKind kind, std::size_t n, double epsilon, const BoundConstants& k,
                                  std::optional<std::size_t> m = std::nullopt);

// Zero-mean Gaussian with the truncated estimator; valid iff eps > 2 sigma C1 / sqrt(n).
TailBoundReport srm_bound_gaussian(std::size_t n, double epsilon, double sigma, const BoundConstants& k,
                                   std::optional<double> sigma_max = std::nullopt,
                                   std::optional<std::size_t> m = std::nullopt);

// Exponential(lambda) with the truncated estimator; valid iff eps > C1 (n+1) / (lambda n).
TailBoundReport srm_bound_exponential(std::size_t n, double epsilon, double lambda, const BoundConstants& k,
                                      std::optional<double> lambda_min = std::nullopt,
                                      std::optional<std::size_t> m = std::nullopt);

enum class CvarCase { BoundedFirst, BoundedSecond, Gaussian, Exponential };

struct CvarBoundParams {
    double k1 = 0;
    std::optional<double> k2;
    double c = 1;
    double sigma = 1;
    std::optional<double> sigma_max;
    double lambda = 1;
    std::optional<double> lambda_min;
};

TailBoundReport cvar_bound(CvarCase which, double alpha, std::size_t n, double epsilon, const CvarBoundParams& p,
                           std::optional<std::size_t> m = std::nullopt);

// 2 exp(-2 n c_bar eps^2).
double var_bound(std::size_t n, double epsilon, double c_bar);

}  // namespace srm
