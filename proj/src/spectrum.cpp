#include "srm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "srm/errors.hpp"
#include "srm/format.hpp"

namespace srm {
namespace {

constexpr std::size_t kGridPoints = 10000;

double parse_real(std::string_view text, std::string_view what) {
    std::string s(text);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError(std::string(what) + ": not a number: '" + s + "'");
    }
    if (used != s.size()) throw ConfigError(std::string(what) + ": trailing characters in '" + s + "'");
    return v;
}

}  // namespace

Spectrum::Spectrum(Fn eval, double c1, std::optional<double> c2, std::optional<double> c3,
                   bool coherent, SpectrumKind kind, std::vector<double> jumps)
    : eval_(std::move(eval)),
      c1_(c1),
      c2_(c2),
      c3_(c3),
      coherent_(coherent),
      kind_(std::move(kind)),
      jumps_(std::move(jumps)) {
    std::sort(jumps_.begin(), jumps_.end());
    validate();
}

Spectrum Spectrum::custom(Fn eval, double c1, std::optional<double> c2, std::optional<double> c3,
                          bool coherent, std::string label, std::vector<double> jumps) {
    if (!eval) throw DomainError("custom spectrum: empty function");
    return Spectrum(std::move(eval), c1, c2, c3, coherent, CustomSpectrum{std::move(label)},
                    std::move(jumps));
}

void Spectrum::validate() const {
    if (!(c1_ >= 0) || (c2_ && !(*c2_ >= 0)) || (c3_ && !(*c3_ >= 0)))
        throw DomainError("spectrum: derivative bounds must be nonnegative");
    double max_abs = 0;
    double prev = -INFINITY;
    bool nonneg = true;
    bool nondecreasing = true;
    for (std::size_t j = 0; j < kGridPoints; ++j) {
        const double beta = static_cast<double>(j) / static_cast<double>(kGridPoints - 1);
        const double v = eval_(beta);
        if (!std::isfinite(v)) throw DomainError("spectrum: non-finite value at beta=" + fmt_real(beta));
        max_abs = std::max(max_abs, std::abs(v));
        nonneg = nonneg && v >= 0;
        nondecreasing = nondecreasing && v >= prev - 1e-12 * std::abs(prev);
        prev = v;
    }
    // Relative slack for the last bits of a closed-form C1.
    if (c1_ < max_abs * (1 - 1e-12))
        throw DomainError("spectrum: declared C1=" + fmt_real(c1_) + " below grid max |phi|=" +
                          fmt_real(max_abs));
    if (coherent_) {
        if (!nonneg) throw DomainError("spectrum flagged coherent but takes negative values");
        if (!nondecreasing) throw DomainError("spectrum flagged coherent but is not nondecreasing");
        // Built-in kinds are normalised in closed form; the grid trapezoid
        // itself is off by ~k^2/(12 * 10^8) for steep exponential spectra.
        const double total = piecewise_trapezoid_integral(*this, kGridPoints);
        if (std::holds_alternative<CustomSpectrum>(kind_) && std::abs(total - 1) > 1e-6)
            throw DomainError("spectrum flagged coherent but integrates to " + fmt_real(total));
    }
}

std::string Spectrum::describe() const {
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ExponentialRiskAversion>) return "expk:" + fmt_real(k.k);
            else if constexpr (std::is_same_v<T, CVaRIndicator>) return "cvar:" + fmt_real(k.alpha);
            else return "custom:" + k.label;
        },
        kind_);
}

Spectrum exponential_spectrum(double k) {
    if (!(k > 0) || !std::isfinite(k)) throw DomainError("exponential_spectrum: need k > 0");
    const double norm = -std::expm1(-k);  // 1 - e^{-k}
    const double c1 = k / norm;
    auto eval = [k, norm](double beta) { return k * std::exp(-k * (1 - beta)) / norm; };
    return Spectrum(eval, c1, k * c1, k * k * c1, true, ExponentialRiskAversion{k}, {});
}

Spectrum cvar_spectrum(double alpha) {
    if (!(alpha > 0 && alpha < 1)) throw DomainError("cvar_spectrum: need 0 < alpha < 1");
    const double height = 1 / (1 - alpha);
    auto eval = [alpha, height](double beta) { return beta > alpha ? height : 0.0; };
    return Spectrum(eval, height, std::nullopt, std::nullopt, true, CVaRIndicator{alpha}, {alpha});
}

double piecewise_trapezoid_integral(const Spectrum& phi, std::size_t points) {
    std::vector<double> edges{0.0};
    for (double j : phi.jumps())
        if (j > 0 && j < 1) edges.push_back(j);
    edges.push_back(1.0);
    double total = 0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p];
        const double b = edges[p + 1];
        const auto steps = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(static_cast<double>(points) * (b - a))));
        // One-sided limits at interior jumps.
        const double a_eval = p == 0 ? a : std::nextafter(a, b);
        const double b_eval = p + 2 == edges.size() ? b : std::nextafter(b, a);
        const double h = (b - a) / static_cast<double>(steps);
        double sum = 0.5 * (phi(a_eval) + phi(b_eval));
        for (std::size_t k = 1; k < steps; ++k) sum += phi(a + static_cast<double>(k) * h);
        total += sum * h;
    }
    return total;
}

Spectrum load_custom_spectrum(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("custom spectrum: cannot open " + file.string());
    std::optional<double> c1, c2, c3;
    bool coherent = false;
    std::vector<std::pair<double, double>> table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string a, b, extra;
        if (!(fields >> a)) continue;
        const std::string where = file.string() + ":" + std::to_string(lineno);
        if (a == "coherent") {
            coherent = true;
            continue;
        }
        if (!(fields >> b) || (fields >> extra)) throw ConfigError(where + ": expected two fields");
        if (a == "C1") c1 = parse_real(b, where);
        else if (a == "C2") c2 = parse_real(b, where);
        else if (a == "C3") c3 = parse_real(b, where);
        else table.emplace_back(parse_real(a, where), parse_real(b, where));
    }
    if (!c1 || !c2 || !c3) throw ConfigError("custom spectrum " + file.string() + ": C1, C2 and C3 must all be declared");
    if (table.size() < 2) throw ConfigError("custom spectrum " + file.string() + ": need at least two table rows");
    for (std::size_t i = 1; i < table.size(); ++i)
        if (!(table[i].first > table[i - 1].first))
            throw ConfigError("custom spectrum " + file.string() + ": beta column must be strictly increasing");
    if (table.front().first > 0 || table.back().first < 1)
        throw ConfigError("custom spectrum " + file.string() + ": table must cover [0,1]");

    auto eval = [table](double beta) {
        auto hi = std::lower_bound(table.begin(), table.end(), beta,
                                   [](const auto& row, double x) { return row.first < x; });
        if (hi == table.begin()) return hi->second;
        if (hi == table.end()) return table.back().second;
        auto lo = hi - 1;
        const double t = (beta - lo->first) / (hi->first - lo->first);
        return lo->second + t * (hi->second - lo->second);
    };
    return Spectrum::custom(eval, *c1, c2, c3, coherent, file.string());
}

Spectrum parse_spectrum(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw ConfigError("spectrum spec needs 'kind:value': '" + std::string(spec) + "'");
    const std::string_view kind = spec.substr(0, colon);
    const std::string_view arg = spec.substr(colon + 1);
    try {
        if (kind == "expk") return exponential_spectrum(parse_real(arg, "expk"));
        if (kind == "cvar") return cvar_spectrum(parse_real(arg, "cvar"));
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (kind == "custom") return load_custom_spectrum(std::filesystem::path(std::string(arg)));
    throw ConfigError("unknown spectrum kind '" + std::string(kind) + "'");
}

}  // namespace srm
