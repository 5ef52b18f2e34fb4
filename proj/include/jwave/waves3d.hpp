#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "series.hpp"
#include "specfun.hpp"
#include "waves1d.hpp"

namespace jwave {

struct AngularChannel {
    int ell = 0;            // >= 0
    double amplitude = 1.0; // nonzero
};

struct EnergyAngle {
    double mu = 0.0;  // > 0; theta is always derived from mu, never set freely
    double theta = 0.0;
    double cos_theta = 0.0;
    double sin_theta = 0.0;
};

struct CoefficientVector3D {
    CoefficientKind kind = CoefficientKind::regular;
    AngularChannel channel;
    EnergyAngle angle;
    Provenance provenance = Provenance::recursion;
    std::vector<double> values;
};

namespace detail {

inline void check_channel(const AngularChannel& ch) {
    if (ch.ell < 0) throw std::invalid_argument("channel ell is negative");
    if (ch.amplitude == 0.0) throw std::invalid_argument("channel amplitude is zero");
}

}  // namespace detail

inline EnergyAngle energy_angle(double mu) {
    detail::check_mu(mu);
    double denom = mu * mu + 0.25;
    double ct = (mu * mu - 0.25) / denom;
    double st = mu / denom;
    return {mu, std::atan2(st, ct), ct, st};
}

inline double basis_fn_3d(int n, const AngularChannel& ch, double y) {
    if (n < 0) throw std::invalid_argument("basis_fn_3d: n < 0");
    detail::check_channel(ch);
    if (y < 0.0) throw std::invalid_argument("basis_fn_3d: y < 0");
    double lam = laguerre_norm_seq(n, 2 * ch.ell + 1, y).back();
    return lam * std::pow(y, ch.ell + 1) * std::exp(-0.5 * y);
}

inline double s_closed_3d(int n, const AngularChannel& ch, const EnergyAngle& angle) {
    if (n < 0) throw std::invalid_argument("s_closed_3d: n < 0");
    detail::check_channel(ch);
    double ell = ch.ell;
    double log_pref = (ell + 1.0) * std::numbers::ln2 + std::lgamma(ell + 1.0) - 0.5 * std::log(std::numbers::pi) +
                      (ell + 1.0) * std::log(angle.sin_theta) +
                      0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + 2.0 * ell + 2.0));
    return ch.amplitude * std::exp(log_pref) * gegenbauer_poly(n, ell + 1.0, angle.cos_theta);
}

inline double c_closed_3d(int n, const AngularChannel& ch, const EnergyAngle& angle) {
    if (n < 0) throw std::invalid_argument("c_closed_3d: n < 0");
    detail::check_channel(ch);
    double ell = ch.ell;
    double log_pref = (ell + 1.0) * std::numbers::ln2 + std::lgamma(ell + 0.5) - std::log(std::numbers::pi) -
                      ell * std::log(angle.sin_theta) +
                      0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + 2.0 * ell + 2.0));
    double z = 0.5 * (1.0 - angle.cos_theta);  // sin^2(theta/2)
    double f21 = hyp2f1_terminating(n + 2 * ch.ell + 1, n + 1.0, 0.5 - ell, z);
    return -ch.amplitude * std::exp(log_pref) * f21;
}

inline TridiagRow jmatrix_row_3d(int n, const AngularChannel& ch, const EnergyAngle& angle) {
    if (n < 0) throw std::invalid_argument("jmatrix_row_3d: n < 0");
    detail::check_channel(ch);
    double factor = angle.mu * angle.mu + 0.25;
    double ell = ch.ell;
    return {n == 0 ? 0.0 : -factor * std::sqrt(n * (n + 2.0 * ell + 1.0)),
            factor * 2.0 * (n + ell + 1.0) * angle.cos_theta,
            -factor * std::sqrt((n + 1.0) * (n + 2.0 * ell + 2.0))};
}

inline CoefficientVector3D propagate_3d(CoefficientKind kind, const AngularChannel& ch, const EnergyAngle& angle,
                                        int n_max) {
    if (n_max < 2) throw std::invalid_argument("propagate_3d: n_max < 2");
    detail::check_channel(ch);
    CoefficientVector3D out{kind, ch, angle, Provenance::recursion, {}};
    out.values.resize(static_cast<std::size_t>(n_max) + 1);
    double ell = ch.ell;
    if (kind == CoefficientKind::regular) {
        out.values[0] = s_closed_3d(0, ch, angle);
        out.values[1] = 2.0 * (ell + 1.0) * angle.cos_theta * out.values[0] / std::sqrt(2.0 * ell + 2.0);
    } else {
        out.values[0] = c_closed_3d(0, ch, angle);
        out.values[1] = c_closed_3d(1, ch, angle);
    }
    for (int n = 1; n < n_max; ++n) {
        out.values[static_cast<std::size_t>(n) + 1] =
            (2.0 * (n + ell + 1.0) * angle.cos_theta * out.values[static_cast<std::size_t>(n)] -
             std::sqrt(n * (n + 2.0 * ell + 1.0)) * out.values[static_cast<std::size_t>(n) - 1]) /
            std::sqrt((n + 1.0) * (n + 2.0 * ell + 2.0));
    }
    return out;
}

// Closed-form complementary coefficient where the terminating sum is still
// numerically trustworthy; recursion propagation past 60 terms.
inline double complementary_coefficient_3d(int n, const AngularChannel& ch, const EnergyAngle& angle) {
    if (n + 2 * ch.ell + 1 <= 60) return c_closed_3d(n, ch, angle);
    return propagate_3d(CoefficientKind::complementary, ch, angle, std::max(n, 2))
        .values[static_cast<std::size_t>(n)];
}

inline double reference_solution_3d(BesselKind kind, const AngularChannel& ch, double mu, double y) {
    detail::check_channel(ch);
    detail::check_mu(mu);
    if (!(y > 0.0)) throw std::invalid_argument("reference_solution_3d: y <= 0");
    double z = mu * y;
    return 2.0 * ch.amplitude / std::sqrt(std::numbers::pi) * z * spherical_bessel(ch.ell, kind, z);
}

inline double eval_series_3d(const CoefficientVector3D& coeffs, double y, int start_n, Accel accel) {
    if (coeffs.values.empty()) throw std::invalid_argument("eval_series_3d: empty coefficients");
    int n_max = static_cast<int>(coeffs.values.size()) - 1;
    if (start_n < 0 || start_n > n_max) throw std::invalid_argument("eval_series_3d: start_n out of range");
    if (y < 0.0) throw std::invalid_argument("eval_series_3d: y < 0");
    if (y == 0.0) return 0.0;
    int ell = coeffs.channel.ell;
    std::vector<double> lam = laguerre_norm_seq(n_max, 2 * ell + 1, y);
    std::vector<double> partial;
    partial.reserve(static_cast<std::size_t>(n_max - start_n) + 1);
    double acc = 0.0;
    for (int n = start_n; n <= n_max; ++n) {
        acc += coeffs.values[static_cast<std::size_t>(n)] * lam[static_cast<std::size_t>(n)];
        partial.push_back(acc);
    }
    // The shared prefactor commutes with both accelerations (they are
    // homogeneous under scaling), so it multiplies the accelerated tail.
    double prefix = std::pow(y, ell + 1) * std::exp(-0.5 * y);
    return prefix * accelerate(partial, accel);
}

inline double eval_series_3d(CoefficientKind kind, const AngularChannel& ch, double mu, double y, int start_n,
                             int n_max, Accel accel) {
    if (n_max < 0) throw std::invalid_argument("eval_series_3d: n_max < 0");
    CoefficientVector3D coeffs = propagate_3d(kind, ch, energy_angle(mu), std::max(n_max, 2));
    coeffs.values.resize(static_cast<std::size_t>(n_max) + 1);
    return eval_series_3d(coeffs, y, start_n, accel);
}

inline double coefficient_integral_oracle_3d(int n, const AngularChannel& ch, double mu) {
    if (n < 0 || n > 10) throw std::invalid_argument("coefficient_integral_oracle_3d: n outside [0, 10]");
    detail::check_channel(ch);
    detail::check_mu(mu);
    int ell = ch.ell;
    // Truncate where e^{-y/2} y^{n+ell+1/2} drops below 1e-18.
    double upper = 60.0;
    for (int i = 0; i < 4; ++i) upper = 2.0 * (18.0 * std::numbers::ln10 + (n + ell + 0.5) * std::log(upper)) + 10.0;
    auto integrand = [&](double y) {
        double lam = laguerre_norm_seq(n, 2 * ell + 1, y).back();
        double bessel_half = std::sqrt(2.0 * mu * y / std::numbers::pi) * spherical_bessel(ell, BesselKind::regular, mu * y);
        return lam * std::pow(y, ell + 0.5) * std::exp(-0.5 * y) * bessel_half;
    };
    double integral = adaptive_quad(integrand, {0.0, upper, 1e-11, 8000});
    return ch.amplitude * std::sqrt(2.0 * mu) * integral;
}

// Central-difference residual of the coefficient's Gegenbauer equation in
// x = cos(theta), with mu reconstructed from x; shrinks as h^2.
inline double energy_ode_residual_3d(int n, CoefficientKind kind, const AngularChannel& ch, double x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("energy_ode_residual_3d: h <= 0");
    if (!(std::fabs(x) + h < 1.0)) throw std::invalid_argument("energy_ode_residual_3d: |x| + h >= 1");
    auto coeff = [&](double t) {
        double mu = 0.5 * std::sqrt((1.0 + t) / (1.0 - t));
        EnergyAngle ang = energy_angle(mu);
        return kind == CoefficientKind::regular ? s_closed_3d(n, ch, ang) : c_closed_3d(n, ch, ang);
    };
    double xp = coeff(x + h), x0 = coeff(x), xm = coeff(x - h);
    double d2 = (xp - 2.0 * x0 + xm) / (h * h);
    double d1 = (xp - xm) / (2.0 * h);
    double ell = ch.ell;
    double order = n + ell + 1.0;
    return (1.0 - x * x) * d2 - x * d1 + (order * order - ell * (ell + 1.0) / (1.0 - x * x)) * x0;
}

}  // namespace jwave
