#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vzcfo/error.hpp"

namespace vz::cfo {

// Box-bounded search region. The working bounds shrink during a run; the
// initial bounds and the principal-diagonal length never change.
class DecisionSpace {
public:
    DecisionSpace() = default;

    DecisionSpace(std::vector<double> lower, std::vector<double> upper)
        : lower_(std::move(lower)), upper_(std::move(upper)) {
        if (lower_.empty()) throw ConfigError("decision space needs at least one dimension");
        if (lower_.size() != upper_.size())
            throw ConfigError("decision space bound vectors differ in length");
        double sum = 0.0;
        for (std::size_t i = 0; i < lower_.size(); ++i) {
            if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]))
                throw ConfigError("non-finite bound in dimension " + std::to_string(i + 1));
            if (lower_[i] > upper_[i])
                throw ConfigError("lower bound exceeds upper bound in dimension " +
                                  std::to_string(i + 1));
            double w = upper_[i] - lower_[i];
            sum += w * w;
        }
        initial_lower_ = lower_;
        initial_upper_ = upper_;
        diag_ = std::sqrt(sum);
    }

    std::size_t dims() const noexcept { return lower_.size(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }
    double lower(std::size_t i) const { return lower_[i]; }
    double upper(std::size_t i) const { return upper_[i]; }
    const std::vector<double>& initial_lower() const noexcept { return initial_lower_; }
    const std::vector<double>& initial_upper() const noexcept { return initial_upper_; }
    double diag_length() const noexcept { return diag_; }

    bool contains(const std::vector<double>& x) const {
        if (x.size() != dims()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
        return true;
    }

    // Contract each dimension halfway toward `best`.
    void shrink(const std::vector<double>& best) {
        if (best.size() != dims()) throw ConfigError("shrink point has wrong dimensionality");
        for (std::size_t i = 0; i < dims(); ++i) {
            double lo = lower_[i] + (best[i] - lower_[i]) / 2.0;
            double hi = upper_[i] - (upper_[i] - best[i]) / 2.0;
            // keep nesting exact under rounding
            lo = std::max(lo, lower_[i]);
            hi = std::min(hi, upper_[i]);
            if (lo > hi) lo = hi = std::clamp(best[i], lower_[i], upper_[i]);
            lower_[i] = lo;
            upper_[i] = hi;
        }
    }

    void reset() noexcept {
        lower_ = initial_lower_;
        upper_ = initial_upper_;
    }

private:
    std::vector<double> lower_, upper_;
    std::vector<double> initial_lower_, initial_upper_;
    double diag_ = 0.0;
};

inline void shrink_space(DecisionSpace& space, const std::vector<double>& best) { space.shrink(best); }
inline void reset_space(DecisionSpace& space) noexcept { space.reset(); }

}  // namespace vz::cfo
