#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace jwave {

enum class Accel { none, partial_sum_average, wynn_epsilon };

inline constexpr std::size_t accel_window = 64;

namespace detail {

// Wynn epsilon on the window, even columns only. The table stops as soon as
// two neighbours agree to 1e-15 relative: past that point the reciprocal
// differences are pure roundoff and the higher columns diverge.
inline double wynn_epsilon_limit(std::span<const double> ps) {
    std::vector<double> cur(ps.begin(), ps.end());
    std::vector<double> prev(cur.size() + 1, 0.0);
    double best = cur.back();
    int col = 0;
    while (cur.size() >= 2) {
        ++col;
        std::vector<double> next;
        next.reserve(cur.size() - 1);
        bool usable = true;
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            double diff = cur[i + 1] - cur[i];
            double scale = std::max({std::fabs(cur[i]), std::fabs(cur[i + 1]), 1e-300});
            if (std::fabs(diff) <= 1e-15 * scale) {
                usable = false;
                break;
            }
            next.push_back(prev[i + 1] + 1.0 / diff);
        }
        if (!usable) break;
        prev = std::move(cur);
        cur = std::move(next);
        if (col % 2 == 0) best = cur.back();
    }
    return best;
}

}  // namespace detail

inline double accelerate(std::span<const double> partial_sums, Accel mode) {
    if (partial_sums.empty()) throw std::invalid_argument("accelerate: no partial sums");
    std::size_t w = std::min(accel_window, partial_sums.size());
    std::span<const double> tail = partial_sums.subspan(partial_sums.size() - w);
    switch (mode) {
        case Accel::none:
            return tail.back();
        case Accel::partial_sum_average: {
            double acc = 0.0;
            for (double v : tail) acc += v;
            return acc / static_cast<double>(w);
        }
        case Accel::wynn_epsilon:
            return detail::wynn_epsilon_limit(tail);
    }
    throw std::invalid_argument("accelerate: unknown mode");
}

}  // namespace jwave
