#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace srm {

// A sorted (ascending) batch of n >= 1 real samples. Ties are kept.
class OrderedSamples {
public:
    // Sorts `values`. Throws DomainError when empty.
    explicit OrderedSamples(std::vector<double> values);

    // Takes `values` as already sorted; throws DomainError if they are not.
    static OrderedSamples from_sorted(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    // 1-based order statistic X_(k).
    double order_statistic(std::size_t k) const { return values_[k - 1]; }

    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

    // New batch with every value x mapped to scale * x + shift (scale > 0 keeps order).
    OrderedSamples affine(double scale, double shift) const;

    friend bool operator==(const OrderedSamples&, const OrderedSamples&) = default;

private:
    struct Sorted {};
    OrderedSamples(Sorted, std::vector<double> values);
    std::vector<double> values_;
};

// Uniform grid beta_k = lo + k (hi - lo) / m, k = 0..m, with beta_m = hi exactly.
struct Partition {
    double lo;
    double hi;
    std::size_t m;

    Partition(double lo, double hi, std::size_t m);

    double step() const { return (hi - lo) / static_cast<double>(m); }
    double point(std::size_t k) const {
        return k == m ? hi : lo + static_cast<double>(k) * step();
    }
};

}  // namespace srm
