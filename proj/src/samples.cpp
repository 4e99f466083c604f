#include "srm/samples.hpp"

#include <algorithm>
#include <cmath>

#include "srm/errors.hpp"

namespace srm {

OrderedSamples::OrderedSamples(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("OrderedSamples: need at least one sample");
    for (double v : values_)
        if (std::isnan(v)) throw DomainError("OrderedSamples: NaN sample");
    std::sort(values_.begin(), values_.end());
}

OrderedSamples::OrderedSamples(Sorted, std::vector<double> values) : values_(std::move(values)) {}

OrderedSamples OrderedSamples::from_sorted(std::vector<double> values) {
    if (values.empty()) throw DomainError("OrderedSamples: need at least one sample");
    if (!std::is_sorted(values.begin(), values.end()))
        throw DomainError("OrderedSamples::from_sorted: values are not ascending");
    return OrderedSamples(Sorted{}, std::move(values));
}

OrderedSamples OrderedSamples::affine(double scale, double shift) const {
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(),
                   [&](double x) { return scale * x + shift; });
    if (scale < 0) return OrderedSamples(std::move(out));
    return OrderedSamples(Sorted{}, std::move(out));
}

Partition::Partition(double lo_, double hi_, std::size_t m_) : lo(lo_), hi(hi_), m(m_) {
    if (!(hi > lo)) throw DomainError("Partition: need hi > lo");
    if (m == 0) throw DomainError("Partition: need m >= 1");
}

}  // namespace srm
