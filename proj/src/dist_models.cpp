#include "srm/dist_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "srm/errors.hpp"
#include "srm/format.hpp"
#include "srm/quadrature.hpp"

namespace srm {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_open_unit(double beta, const char* what) {
    if (!(beta > 0 && beta < 1)) throw DomainError(std::string(what) + ": need 0 < beta < 1, got " + fmt_real(beta));
}

// Acklam's approximation on the lower half, p in (0, 0.5].
double lower_normal_quantile(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    }
    // Newton step on Phi(x) - p.
    const double e = std_normal_cdf(x) - p;
    return x - e / std_normal_pdf(x);
}

}  // namespace

DistModel DistModel::gaussian(double mean, double sigma) {
    if (!std::isfinite(mean) || !(sigma > 0) || !std::isfinite(sigma))
        throw DomainError("gaussian: need finite mean and sigma > 0");
    return DistModel(Gaussian{mean, sigma});
}

DistModel DistModel::exponential(double lambda) {
    if (!(lambda > 0) || !std::isfinite(lambda)) throw DomainError("exponential: need lambda > 0");
    return DistModel(Exponential{lambda});
}

DistModel DistModel::uniform(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) throw DomainError("uniform: need finite lo < hi");
    return DistModel(Uniform{lo, hi});
}

DistModel DistModel::point(double c) {
    if (!std::isfinite(c)) throw DomainError("point: need finite c");
    return DistModel(PointMass{c});
}

std::string DistModel::describe() const {
    return std::visit(overloaded{
                          [](const Gaussian& g) { return "gaussian:" + fmt_real(g.mean) + "," + fmt_real(g.sigma); },
                          [](const Exponential& e) { return "exp:" + fmt_real(e.lambda); },
                          [](const Uniform& u) { return "uniform:" + fmt_real(u.lo) + "," + fmt_real(u.hi); },
                          [](const PointMass& p) { return "point:" + fmt_real(p.c); },
                      },
                      family_);
}

DistModel parse_dist(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw ConfigError("distribution spec needs 'family:params': '" + std::string(spec) + "'");
    const std::string family(spec.substr(0, colon));
    std::vector<double> params;
    std::string_view rest = spec.substr(colon + 1);
    while (true) {
        const auto comma = rest.find(',');
        const std::string field(rest.substr(0, comma));
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(field, &used);
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (used != field.size() || field.empty())
            throw ConfigError("distribution spec '" + std::string(spec) + "': bad parameter '" + field + "'");
        params.push_back(v);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    auto arity = [&](std::size_t k) {
        if (params.size() != k)
            throw ConfigError("distribution spec '" + std::string(spec) + "': " + family + " takes " +
                              std::to_string(k) + " parameter(s)");
    };
    try {
        if (family == "gaussian" || family == "normal") {
            arity(2);
            return DistModel::gaussian(params[0], params[1]);
        }
        if (family == "exp" || family == "exponential") {
            arity(1);
            return DistModel::exponential(params[0]);
        }
        if (family == "uniform") {
            arity(2);
            return DistModel::uniform(params[0], params[1]);
        }
        if (family == "point") {
            arity(1);
            return DistModel::point(params[0]);
        }
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown distribution family '" + family + "'");
}

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi); }

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double std_normal_quantile(double p) {
    require_open_unit(p, "std_normal_quantile");
    if (p <= 0.5) return lower_normal_quantile(p);
    return -lower_normal_quantile(1 - p);
}

double quantile(const DistModel& dist, double beta) {
    require_open_unit(beta, "quantile");
    return std::visit(overloaded{
                          [&](const Gaussian& g) { return g.mean + g.sigma * std_normal_quantile(beta); },
                          [&](const Exponential& e) { return -std::log1p(-beta) / e.lambda; },
                          [&](const Uniform& u) { return u.lo + beta * (u.hi - u.lo); },
                          [&](const PointMass& p) { return p.c; },
                      },
                      dist.family());
}

double cdf(const DistModel& dist, double x) {
    return std::visit(overloaded{
                          [&](const Gaussian& g) { return std_normal_cdf((x - g.mean) / g.sigma); },
                          [&](const Exponential& e) { return x <= 0 ? 0.0 : -std::expm1(-e.lambda * x); },
                          [&](const Uniform& u) { return std::clamp((x - u.lo) / (u.hi - u.lo), 0.0, 1.0); },
                          [&](const PointMass& p) { return x >= p.c ? 1.0 : 0.0; },
                      },
                      dist.family());
}

double pdf(const DistModel& dist, double x) {
    return std::visit(overloaded{
                          [&](const Gaussian& g) { return std_normal_pdf((x - g.mean) / g.sigma) / g.sigma; },
                          [&](const Exponential& e) { return x < 0 ? 0.0 : e.lambda * std::exp(-e.lambda * x); },
                          [&](const Uniform& u) { return (x < u.lo || x > u.hi) ? 0.0 : 1 / (u.hi - u.lo); },
                          [&](const PointMass&) -> double {
                              throw UnsupportedOperation("pdf: point mass has no density");
                          },
                      },
                      dist.family());
}

double pdf_derivative(const DistModel& dist, double x) {
    return std::visit(overloaded{
                          [&](const Gaussian& g) {
                              const double z = (x - g.mean) / g.sigma;
                              return -z / g.sigma * pdf(dist, x);
                          },
                          [&](const Exponential& e) { return -e.lambda * pdf(dist, x); },
                          [&](const Uniform&) { return 0.0; },
                          [&](const PointMass&) -> double {
                              throw UnsupportedOperation("pdf_derivative: point mass has no density");
                          },
                      },
                      dist.family());
}

double mean(const DistModel& dist) {
    return std::visit(overloaded{
                          [](const Gaussian& g) { return g.mean; },
                          [](const Exponential& e) { return 1 / e.lambda; },
                          [](const Uniform& u) { return 0.5 * (u.lo + u.hi); },
                          [](const PointMass& p) { return p.c; },
                      },
                      dist.family());
}

double variance(const DistModel& dist) {
    return std::visit(overloaded{
                          [](const Gaussian& g) { return g.sigma * g.sigma; },
                          [](const Exponential& e) { return 1 / (e.lambda * e.lambda); },
                          [](const Uniform& u) { return (u.hi - u.lo) * (u.hi - u.lo) / 12; },
                          [](const PointMass&) { return 0.0; },
                      },
                      dist.family());
}

double draw(const DistModel& dist, RandomStream& stream) { return quantile(dist, stream.uniform_open()); }

OrderedSamples sample(const DistModel& dist, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("sample: need n >= 1");
    RandomStream stream(seed);
    std::vector<double> values(n);
    for (auto& v : values) v = draw(dist, stream);
    return OrderedSamples(std::move(values));
}

double lower_quantile_integral(const DistModel& dist, double delta) {
    if (!(delta > 0 && delta < 1)) throw DomainError("lower_quantile_integral: need 0 < delta < 1");
    return std::visit(overloaded{
                          [&](const Gaussian& g) {
                              return g.mean * delta - g.sigma * std_normal_pdf(std_normal_quantile(delta));
                          },
                          [&](const Exponential& e) { return ((1 - delta) * std::log1p(-delta) + delta) / e.lambda; },
                          [&](const Uniform& u) { return u.lo * delta + (u.hi - u.lo) * delta * delta / 2; },
                          [&](const PointMass& p) { return p.c * delta; },
                      },
                      dist.family());
}

double upper_quantile_integral(const DistModel& dist, double delta) {
    if (!(delta > 0 && delta < 1)) throw DomainError("upper_quantile_integral: need 0 < delta < 1");
    return std::visit(overloaded{
                          [&](const Gaussian& g) {
                              return g.mean * delta + g.sigma * std_normal_pdf(std_normal_quantile(delta));
                          },
                          [&](const Exponential& e) { return delta * (1 - std::log(delta)) / e.lambda; },
                          [&](const Uniform& u) { return u.hi * delta - (u.hi - u.lo) * delta * delta / 2; },
                          [&](const PointMass& p) { return p.c * delta; },
                      },
                      dist.family());
}

double analytic_srm(const DistModel& dist, const Spectrum& phi, double tol) {
    if (!(tol > 0)) throw DomainError("analytic_srm: need tol > 0");
    const auto integrand = [&](double beta) { return phi(beta) * quantile(dist, beta); };
    const auto jumps = phi.jumps();
    constexpr double kSmallestDelta = 1e-15;

    double delta = 1e-2;
    quad::Result core = quad::gauss_kronrod_split(integrand, delta, 1 - delta, jumps, tol / 8);
    double value = core.value;
    double error = core.error;
    double budget = tol / 16;
    // The tail beyond delta is replaced by phi at the tail midpoint times the
    // closed-form quantile integral; its error is at most the variation of phi
    // over the tail times that integral.
    const auto tail_estimate = [&](double d) {
        return phi(d / 2) * lower_quantile_integral(dist, d) + phi(1 - d / 2) * upper_quantile_integral(dist, d);
    };
    const auto tail_error = [&](double d) {
        const double lo_var = std::max(std::abs(phi(d) - phi(d / 2)), std::abs(phi(d / 2) - phi(0)));
        const double hi_var = std::max(std::abs(phi(1 - d) - phi(1 - d / 2)), std::abs(phi(1 - d / 2) - phi(1)));
        return lo_var * std::abs(lower_quantile_integral(dist, d)) + hi_var * std::abs(upper_quantile_integral(dist, d));
    };
    double increment = INFINITY;
    while (std::abs(increment) >= tol / 4 && tail_error(delta) >= tol / 4) {
        const double next = delta / 10;
        if (next < kSmallestDelta)
            throw NumericalError("analytic_srm: tail did not settle before delta=1e-15",
                                 std::abs(increment) + tail_error(delta) + error);
        const quad::Result lo = quad::gauss_kronrod_split(integrand, next, delta, jumps, budget);
        const quad::Result hi = quad::gauss_kronrod_split(integrand, 1 - delta, 1 - next, jumps, budget);
        increment = lo.value + hi.value;
        value += increment;
        error += lo.error + hi.error;
        budget /= 2;
        delta = next;
    }
    const double tail = tail_estimate(delta);
    value += tail;
    if (!std::isfinite(value) || error > tol)
        throw NumericalError("analytic_srm: quadrature error estimate " + fmt_real(error) + " exceeds tol " +
                                 fmt_real(tol),
                             error);
    return value;
}

double analytic_cvar(const DistModel& dist, double alpha) {
    require_open_unit(alpha, "analytic_cvar");
    return std::visit(overloaded{
                          [&](const Gaussian& g) {
                              return g.mean + g.sigma * std_normal_pdf(std_normal_quantile(alpha)) / (1 - alpha);
                          },
                          [&](const Exponential& e) { return (1 - std::log1p(-alpha)) / e.lambda; },
                          [&](const Uniform& u) { return 0.5 * (quantile(dist, alpha) + u.hi); },
                          [&](const PointMass& p) { return p.c; },
                      },
                      dist.family());
}

QuantileDerivatives quantile_derivatives(const DistModel& dist, double beta) {
    if (dist.is<PointMass>()) throw UnsupportedOperation("quantile_derivatives: point mass has no density");
    const double v = quantile(dist, beta);
    const double f = pdf(dist, v);
    if (!(f > 0)) throw SingularityError("quantile_derivatives: zero density at V_beta=" + fmt_real(v));
    return {1 / f, -pdf_derivative(dist, v) / (f * f * f)};
}

}  // namespace srm
