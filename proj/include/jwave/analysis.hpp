#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "series.hpp"
#include "waves1d.hpp"
#include "waves3d.hpp"

namespace jwave {

struct PhaseFitResult {
    double amplitude = 0.0;
    double phase = 0.0;  // in (-pi, pi]
    double rms_residual = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

struct DeadZoneResult {
    int start_n = 0;
    double epsilon = 0.0;
    double radius = 0.0;
};

struct ResidualReport {
    std::string check;
    std::vector<double> residuals;
    double max_abs = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline ResidualReport make_residual_report(std::string check, std::vector<double> residuals, double tolerance) {
    double mx = 0.0;
    for (double r : residuals) mx = std::max(mx, std::fabs(r));
    bool ok = mx <= tolerance;
    return {std::move(check), std::move(residuals), mx, tolerance, ok};
}

// Least squares against the fixed basis {sin(mu y), cos(mu y)}; the frequency
// is never fitted, so coefficient errors cannot hide in it.
inline PhaseFitResult phase_fit(std::span<const std::pair<double, double>> samples, double mu,
                                std::pair<double, double> window) {
    detail::check_mu(mu);
    auto [lo, hi] = window;
    if (!(lo < hi)) throw std::invalid_argument("phase_fit: empty window");
    if (hi - lo < 2.0 * std::numbers::pi / mu)
        throw std::invalid_argument("phase_fit: window narrower than one period");
    double ss = 0.0, sc = 0.0, cc = 0.0, sv = 0.0, cv = 0.0;
    std::size_t count = 0;
    for (const auto& [y, v] : samples) {
        if (y < lo || y > hi) continue;
        double s = std::sin(mu * y), c = std::cos(mu * y);
        ss += s * s;
        sc += s * c;
        cc += c * c;
        sv += s * v;
        cv += c * v;
        ++count;
    }
    if (count < 8) throw std::invalid_argument("phase_fit: fewer than 8 samples inside window");
    double tr = ss + cc;
    double det = ss * cc - sc * sc;
    double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    double lam_max = 0.5 * (tr + disc), lam_min = 0.5 * (tr - disc);
    if (!(lam_min > 0.0) || lam_max > 1e8 * lam_min) throw std::runtime_error("phase_fit: ill-conditioned normal matrix");
    double alpha = (cc * sv - sc * cv) / det;
    double beta = (ss * cv - sc * sv) / det;
    double sq = 0.0;
    for (const auto& [y, v] : samples) {
        if (y < lo || y > hi) continue;
        double r = v - alpha * std::sin(mu * y) - beta * std::cos(mu * y);
        sq += r * r;
    }
    return {std::hypot(alpha, beta), std::atan2(beta, alpha), std::sqrt(sq / static_cast<double>(count)), lo, hi};
}

// Scans y = 0, step, 2 step, ... y_max; the radius is the last grid point
// before the first |value| >= epsilon (0 if the origin already exceeds it).
template <class F>
inline DeadZoneResult dead_zone_radius(F&& evaluator, double epsilon, double y_max, double step, int start_n = 0) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("dead_zone_radius: epsilon <= 0");
    if (!(step > 0.0)) throw std::invalid_argument("dead_zone_radius: step <= 0");
    if (!(y_max >= 0.0)) throw std::invalid_argument("dead_zone_radius: y_max < 0");
    double y = 0.0;
    double last_quiet = 0.0;
    for (long k = 0;; ++k) {
        y = static_cast<double>(k) * step;
        if (y > y_max * (1.0 + 1e-12)) break;
        if (std::fabs(evaluator(y)) >= epsilon) return {start_n, epsilon, k == 0 ? 0.0 : (k - 1) * step};
        last_quiet = y;
    }
    return {start_n, epsilon, last_quiet};
}

inline ResidualReport recursion_residuals(const CoefficientVector& coeffs) {
    if (coeffs.values.size() < 3) throw std::invalid_argument("recursion_residuals: need at least 3 coefficients");
    std::vector<double> res;
    res.reserve(coeffs.values.size() - 2);
    for (std::size_t n = 1; n + 1 < coeffs.values.size(); ++n) {
        TridiagRow row = jmatrix_row_1d(static_cast<int>(n), coeffs.channel, coeffs.wavenumber.mu);
        double t_sub = row.sub * coeffs.values[n - 1];
        double t_diag = row.diag * coeffs.values[n];
        double t_sup = row.sup * coeffs.values[n + 1];
        double scale = std::max({std::fabs(t_sub), std::fabs(t_diag), std::fabs(t_sup), 1e-300});
        res.push_back((t_sub + t_diag + t_sup) / scale);
    }
    double tol = coeffs.kind == CoefficientKind::regular ? 1e-10 : 1e-9;
    std::string name = std::string("recursion residual 1d ") +
                       (coeffs.kind == CoefficientKind::regular ? "regular " : "complementary ") +
                       (coeffs.channel.parity == Parity::even ? "even" : "odd");
    return make_residual_report(std::move(name), std::move(res), tol);
}

inline ResidualReport recursion_residuals(const CoefficientVector3D& coeffs) {
    if (coeffs.values.size() < 3) throw std::invalid_argument("recursion_residuals: need at least 3 coefficients");
    std::vector<double> res;
    res.reserve(coeffs.values.size() - 2);
    for (std::size_t n = 1; n + 1 < coeffs.values.size(); ++n) {
        TridiagRow row = jmatrix_row_3d(static_cast<int>(n), coeffs.channel, coeffs.angle);
        double t_sub = row.sub * coeffs.values[n - 1];
        double t_diag = row.diag * coeffs.values[n];
        double t_sup = row.sup * coeffs.values[n + 1];
        double scale = std::max({std::fabs(t_sub), std::fabs(t_diag), std::fabs(t_sup), 1e-300});
        res.push_back((t_sub + t_diag + t_sup) / scale);
    }
    double tol = coeffs.kind == CoefficientKind::regular ? 1e-10 : 1e-9;
    std::string name = std::string("recursion residual 3d ") +
                       (coeffs.kind == CoefficientKind::regular ? "regular " : "complementary ") + "ell=" +
                       std::to_string(coeffs.channel.ell);
    return make_residual_report(std::move(name), std::move(res), tol);
}

struct SeriesQuery1D {
    CoefficientKind kind = CoefficientKind::regular;
    ParityChannel channel;
    double mu = 1.0;
    int start_n = 0;
    Accel accel = Accel::partial_sum_average;
};

struct SeriesQuery3D {
    CoefficientKind kind = CoefficientKind::regular;
    AngularChannel channel;
    double mu = 1.0;
    int start_n = 0;
    Accel accel = Accel::partial_sum_average;
};

using SeriesQuery = std::variant<SeriesQuery1D, SeriesQuery3D>;

inline std::vector<std::pair<int, double>> convergence_profile(const SeriesQuery& query, double y,
                                                               std::span<const int> n_max_list,
                                                               const std::function<double(double)>& oracle) {
    double target = oracle(y);
    std::vector<std::pair<int, double>> out;
    out.reserve(n_max_list.size());
    for (int n_max : n_max_list) {
        double value = std::visit(
            [&](const auto& q) {
                using T = std::decay_t<decltype(q)>;
                if constexpr (std::is_same_v<T, SeriesQuery1D>)
                    return eval_series_1d(q.kind, q.channel, q.mu, y, q.start_n, n_max, q.accel);
                else
                    return eval_series_3d(q.kind, q.channel, q.mu, y, q.start_n, n_max, q.accel);
            },
            query);
        out.emplace_back(n_max, std::fabs(value - target));
    }
    return out;
}

}  // namespace jwave
