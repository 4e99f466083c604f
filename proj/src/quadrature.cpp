#include "srm/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace srm::quad {
namespace {

// Kronrod 15-point abscissae / weights, and the embedded Gauss 7-point weights
// (Gauss nodes are the odd-indexed Kronrod nodes).
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece rule15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = fc * kWk[7];
    double gauss = fc * kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = h * kXk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        kronrod += kWk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, std::size_t max_intervals) {
    if (!(b > a)) return {};
    std::priority_queue<Piece> heap;
    Piece first = rule15(f, a, b);
    double value = first.value;
    double error = first.error;
    heap.push(first);
    while (error > abs_tol && heap.size() < max_intervals) {
        const Piece worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
        heap.pop();
        const Piece left = rule15(f, worst.a, mid);
        const Piece right = rule15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    value = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    return {value, error};
}

Result gauss_kronrod_split(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, double abs_tol) {
    std::vector<double> edges{a};
    for (double p : breakpoints)
        if (p > a && p < b) edges.push_back(p);
    std::sort(edges.begin() + 1, edges.end());
    edges.push_back(b);
    const double piece_tol = abs_tol / static_cast<double>(edges.size() - 1);
    Result total;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const Result r = gauss_kronrod(f, edges[i], edges[i + 1], piece_tol);
        total.value += r.value;
        total.error += r.error;
    }
    return total;
}

}  // namespace srm::quad
