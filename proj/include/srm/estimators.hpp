#pragma once

#include <cstddef>
#include <functional>
#include <variant>

#include "srm/dist_models.hpp"
#include "srm/samples.hpp"
#include "srm/spectrum.hpp"

namespace srm {

// 1-based order-statistic index max(1, ceil(n beta)) used by the EDF
// quantile. n*beta within 1e-9 (relative) of an integer is taken as that
// integer, so grid points such as 0.8 + 0.1 hit the intended index.
std::size_t var_index(std::size_t n, double beta);

// X_(max(1, ceil(n beta))), beta in [0,1].
double empirical_var(const OrderedSamples& s, double beta);

double sample_mean(const OrderedSamples& s);

// sum_{k=1}^m [w(b_{k-1}) V(b_{k-1}) + w(b_k) V(b_k)] db / 2 on `grid`, V = empirical_var.
double weighted_trapz(const OrderedSamples& s, const std::function<double(double)>& weight,
                      const Partition& grid);

// Trapezoidal SRM estimate on Partition(0, 1, m).
double srm_trapz(const OrderedSamples& s, const Spectrum& phi, std::size_t m);

// The trapezoid sum of phi alone on Partition(0, 1, m); translating every
// sample by t moves srm_trapz by exactly t times this.
double spectrum_trapz_weight(const Spectrum& phi, std::size_t m);

// V + (1/(n(1-alpha))) sum (X_i - V)^+ with V = empirical_var(s, alpha).
double classic_cvar(const OrderedSamples& s, double alpha);

// (1/(1-alpha)) times the trapezoid sum of empirical_var on Partition(alpha, 1, m).
double cvar_trapz(const OrderedSamples& s, double alpha, std::size_t m);

enum class TruncationMode { ZeroOut, Clip };

struct GaussianTruncation {
    double sigma;
};
struct ExponentialTruncation {
    double lambda;
};
using TruncationFamily = std::variant<GaussianTruncation, ExponentialTruncation>;

// Family parameters taken from a model; DomainError for uniform/point mass.
TruncationFamily truncation_family_for(const DistModel& dist);

// Gaussian: sqrt(2 sigma^2 ln n); exponential: ln(n)/lambda. n >= 2.
double truncation_threshold(const TruncationFamily& family, std::size_t n);

// ZeroOut: x -> x 1{x <= b}; Clip: x -> min(x, b). Result re-sorted.
OrderedSamples truncate_samples(const OrderedSamples& s, double b, TruncationMode mode);

double srm_trapz_truncated(const OrderedSamples& s, const Spectrum& phi, std::size_t m,
                           const TruncationFamily& family, TruncationMode mode);
double cvar_trapz_truncated(const OrderedSamples& s, double alpha, std::size_t m,
                            const TruncationFamily& family, TruncationMode mode);

}  // namespace srm
