#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace srm {

struct ExponentialRiskAversion {
    double k;
};
struct CVaRIndicator {
    double alpha;
};
struct CustomSpectrum {
    std::string label;
};
using SpectrumKind = std::variant<ExponentialRiskAversion, CVaRIndicator, CustomSpectrum>;

// A risk-aversion function phi on [0,1] together with its declared bounds
// C1 >= sup|phi|, C2 >= sup|phi'|, C3 >= sup|phi''|. C2/C3 are absent for
// non-differentiable spectra (the CVaR indicator). Construction validates C1
// against a 10^4-point grid and, for coherence-flagged spectra, checks
// phi >= 0, nondecreasing, and unit integral to 1e-6. C2/C3 are trusted.
class Spectrum {
public:
    using Fn = std::function<double(double)>;

    static Spectrum custom(Fn eval, double c1, std::optional<double> c2, std::optional<double> c3,
                           bool coherent, std::string label = "custom",
                           std::vector<double> jumps = {});

    double operator()(double beta) const { return eval_(beta); }

    double c1() const { return c1_; }
    std::optional<double> c2() const { return c2_; }
    std::optional<double> c3() const { return c3_; }
    bool coherent() const { return coherent_; }
    const SpectrumKind& kind() const { return kind_; }

    // Points in (0,1) where phi jumps; quadrature splits there.
    std::span<const double> jumps() const { return jumps_; }

    // Round-trippable spec string: "expk:5", "cvar:0.95", "custom:<label>".
    std::string describe() const;

private:
    friend Spectrum exponential_spectrum(double k);
    friend Spectrum cvar_spectrum(double alpha);

    Spectrum(Fn eval, double c1, std::optional<double> c2, std::optional<double> c3, bool coherent,
             SpectrumKind kind, std::vector<double> jumps);
    void validate() const;

    Fn eval_;
    double c1_;
    std::optional<double> c2_;
    std::optional<double> c3_;
    bool coherent_;
    SpectrumKind kind_;
    std::vector<double> jumps_;
};

// phi(beta) = k e^{-k(1-beta)} / (1 - e^{-k}); C1 = k/(1-e^{-k}), C2 = k C1, C3 = k^2 C1.
Spectrum exponential_spectrum(double k);

// phi(beta) = 1{beta > alpha} / (1 - alpha). phi(alpha) = 0.
Spectrum cvar_spectrum(double alpha);

// Plain-text table: "C1 <v>", "C2 <v>", "C3 <v>" lines, an optional
// "coherent" line, and "<beta> <phi>" pairs (ascending, covering [0,1]),
// '#' comments. phi is linearly interpolated.
Spectrum load_custom_spectrum(const std::filesystem::path& file);

// "expk:<k>", "cvar:<alpha>", "custom:<file>".
Spectrum parse_spectrum(std::string_view spec);

// Integral of phi over [0,1] by the composite trapezoid on `points` nodes per
// unit length, split at the spectrum's jumps (one-sided values at a jump).
double piecewise_trapezoid_integral(const Spectrum& phi, std::size_t points = 10000);

}  // namespace srm
