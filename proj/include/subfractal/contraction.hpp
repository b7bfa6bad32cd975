#ifndef SUBFRACTAL_CONTRACTION_HPP
#define SUBFRACTAL_CONTRACTION_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "subfractal/errors.hpp"
#include "subfractal/symbolic.hpp"

namespace subfractal {

/// Per-letter contraction bounds for a hyperbolic IFS: lower[i] and
/// upper[i] bound the contraction of map i+1, with
/// 0 < lower[i] <= upper[i] < 1.
class ContractionSystem {
public:
    ContractionSystem(std::vector<double> lower, std::vector<double> upper)
        : lower_(std::move(lower)), upper_(std::move(upper)) {
        if (lower_.empty() || lower_.size() != upper_.size())
            throw InputError("contraction bounds need matching nonempty lower/upper lists");
        for (std::size_t i = 0; i < lower_.size(); ++i) {
            double lo = lower_[i], hi = upper_[i];
            if (!(lo > 0.0) || !(lo <= hi) || !(hi < 1.0))
                throw InputError("contraction bounds for letter " + std::to_string(i + 1) +
                                 " must satisfy 0 < lower <= upper < 1");
        }
    }

    /// Equal lower and upper bounds (exact similarity ratios).
    explicit ContractionSystem(const std::vector<double>& exact)
        : ContractionSystem(exact, exact) {}

    int alphabet_size() const { return static_cast<int>(lower_.size()); }

    double lower(int letter) const { return lower_[static_cast<std::size_t>(letter - 1)]; }
    double upper(int letter) const { return upper_[static_cast<std::size_t>(letter - 1)]; }

    double lower_product(const Word& w) const {
        double p = 1.0;
        for (int i = 0; i < w.length(); ++i)
            p *= lower(w[i]);
        return p;
    }

    double upper_product(const Word& w) const {
        double p = 1.0;
        for (int i = 0; i < w.length(); ++i)
            p *= upper(w[i]);
        return p;
    }

    double min_lower() const { return *std::min_element(lower_.begin(), lower_.end()); }
    double max_lower() const { return *std::max_element(lower_.begin(), lower_.end()); }
    double min_upper() const { return *std::min_element(upper_.begin(), upper_.end()); }
    double max_upper() const { return *std::max_element(upper_.begin(), upper_.end()); }

    const std::vector<double>& lower_bounds() const { return lower_; }
    const std::vector<double>& upper_bounds() const { return upper_; }

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

} // namespace subfractal

#endif
