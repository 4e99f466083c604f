#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "srm/rng.hpp"
#include "srm/samples.hpp"
#include "srm/spectrum.hpp"

namespace srm {

struct Gaussian {
    double mean;
    double sigma;  // standard deviation
};
struct Exponential {
    double lambda;  // rate; mean 1/lambda
};
struct Uniform {
    double lo;
    double hi;
};
struct PointMass {
    double c;
};

// One of the four parametric loss laws. Parameters are validated on
// construction; the value is immutable afterwards.
class DistModel {
public:
    using Family = std::variant<Gaussian, Exponential, Uniform, PointMass>;

    static DistModel gaussian(double mean, double sigma);
    static DistModel exponential(double lambda);
    static DistModel uniform(double lo, double hi);
    static DistModel point(double c);

    const Family& family() const { return family_; }

    template <class T>
    bool is() const { return std::holds_alternative<T>(family_); }

    // "gaussian:0,10", "exp:0.2", "uniform:-1000,1000", "point:3".
    std::string describe() const;

private:
    explicit DistModel(Family f) : family_(f) {}
    Family family_;
};

// Parses the describe() format. Throws ConfigError.
DistModel parse_dist(std::string_view spec);

// d/dbeta V_beta and d^2/dbeta^2 V_beta.
struct QuantileDerivatives {
    double first;
    double second;
};

double std_normal_pdf(double z);
double std_normal_cdf(double z);
// Acklam's rational approximation (relative error < 1.2e-9) followed by one
// Newton step on the erfc-based cdf; symmetric evaluation keeps both tails
// accurate.
double std_normal_quantile(double p);

// F^{-1}(beta), beta in (0,1). DomainError outside.
double quantile(const DistModel& dist, double beta);
double cdf(const DistModel& dist, double x);
// Density; UnsupportedOperation for PointMass.
double pdf(const DistModel& dist, double x);
// f'(x); one-sided at the left edge of the exponential's support.
double pdf_derivative(const DistModel& dist, double x);

double mean(const DistModel& dist);
double variance(const DistModel& dist);

// One inverse-transform draw.
double draw(const DistModel& dist, RandomStream& stream);

// n sorted i.i.d. draws from RandomStream(seed); n = 0 is a DomainError.
OrderedSamples sample(const DistModel& dist, std::size_t n, std::uint64_t seed);

// Closed-form partial integrals of the quantile function:
// lower: int_0^delta V_beta dbeta, upper: int_{1-delta}^1 V_beta dbeta.
double lower_quantile_integral(const DistModel& dist, double delta);
double upper_quantile_integral(const DistModel& dist, double delta);

// int_0^1 phi(beta) V_beta dbeta with absolute error <= tol.
//
// The integrand is integrated by adaptive Gauss-Kronrod on [delta, 1-delta]
// (split at the spectrum's jumps), widening with delta /= 10 from 1e-2 until
// the added slice contributes < tol/4. The two remaining tails are added as
// phi(endpoint) times the closed-form partial quantile integrals above, which
// is what keeps the unbounded Gaussian/exponential quantiles tractable.
// NumericalError (carrying the achieved estimate) if tol cannot be met.
double analytic_srm(const DistModel& dist, const Spectrum& phi, double tol = 1e-8);

// (1/(1-alpha)) int_alpha^1 V_beta dbeta in closed form:
//   uniform (V_alpha + hi)/2, exponential (1 - ln(1-alpha))/lambda,
//   gaussian mu + sigma pdf(z_alpha)/(1-alpha), point mass c.
double analytic_cvar(const DistModel& dist, double alpha);

// V' = 1/f(V), V'' = -f'(V)/f(V)^3. SingularityError where f(V) = 0,
// UnsupportedOperation for PointMass.
QuantileDerivatives quantile_derivatives(const DistModel& dist, double beta);

}  // namespace srm
