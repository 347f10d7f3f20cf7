#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace lpskew {

// Neumaier's variant of Kahan summation: tracks a running compensation term so
// long accumulations keep ~1 ulp accuracy regardless of term ordering.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_total(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

}  // namespace lpskew
