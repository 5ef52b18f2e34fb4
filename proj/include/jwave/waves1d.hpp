#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "series.hpp"
#include "specfun.hpp"

namespace jwave {

enum class Parity { even, odd };

struct ParityChannel {
    Parity parity = Parity::even;
    double amplitude = 1.0;  // nonzero
};

struct WaveNumber {
    double mu = 0.0;  // > 0
};

enum class CoefficientKind { regular, complementary };
enum class Provenance { closed_form, recursion };

struct CoefficientVector {
    CoefficientKind kind = CoefficientKind::regular;
    ParityChannel channel;
    WaveNumber wavenumber;
    Provenance provenance = Provenance::recursion;
    std::vector<double> values;
};

struct TridiagRow {
    double sub = 0.0;
    double diag = 0.0;
    double sup = 0.0;
};

namespace detail {

inline void check_channel(const ParityChannel& ch) {
    if (ch.amplitude == 0.0) throw std::invalid_argument("channel amplitude is zero");
}

inline void check_mu(double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
}

// Pointwise closed forms stay meaningful at mu = 0; only series construction
// requires mu > 0.
inline void check_mu_nonneg(double mu) {
    if (mu < 0.0) throw std::invalid_argument("mu must be non-negative");
}

// Even channel carries the upper sign in every half-integer shift below.
inline double parity_sign(Parity p) { return p == Parity::even ? 1.0 : -1.0; }

}  // namespace detail

inline double basis_fn_1d(int n, const ParityChannel& ch, double y) {
    if (n < 0) throw std::invalid_argument("basis_fn_1d: n < 0");
    return hermite_fn(ch.parity == Parity::even ? 2 * n : 2 * n + 1, y);
}

inline double s_closed(int n, const ParityChannel& ch, double mu) {
    if (n < 0) throw std::invalid_argument("s_closed: n < 0");
    detail::check_channel(ch);
    detail::check_mu_nonneg(mu);
    int m = ch.parity == Parity::even ? 2 * n : 2 * n + 1;
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * std::sqrt(2.0 * std::numbers::pi) * ch.amplitude * hermite_fn(m, mu);
}

inline double seed_s(const ParityChannel& ch, double mu) {
    detail::check_mu(mu);
    return s_closed(0, ch, mu);
}

inline double c_closed(int n, const ParityChannel& ch, double mu) {
    if (n < 0) throw std::invalid_argument("c_closed: n < 0");
    detail::check_channel(ch);
    detail::check_mu_nonneg(mu);
    double z = mu * mu;
    if (ch.parity == Parity::even) {
        double ratio = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + 0.5)));
        return ch.amplitude * 2.0 * std::sqrt(2.0) * ratio * mu * std::exp(-0.5 * z) * hyp1f1(0.5 - n, 1.5, z);
    }
    double ratio = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + 1.5)));
    return ch.amplitude * std::sqrt(2.0) * ratio * std::exp(-0.5 * z) * hyp1f1(-0.5 - n, 0.5, z);
}

inline TridiagRow jmatrix_row_1d(int n, const ParityChannel& ch, double mu) {
    if (n < 0) throw std::invalid_argument("jmatrix_row_1d: n < 0");
    detail::check_mu_nonneg(mu);
    double sg = detail::parity_sign(ch.parity);
    return {n == 0 ? 0.0 : std::sqrt(n * (n - 0.5 * sg)),
            mu * mu - (2.0 * n + 1.0 - 0.5 * sg),
            std::sqrt((n + 1.0) * (n + 1.0 - 0.5 * sg))};
}

namespace detail {

// Both coefficient families satisfy the same three-term recursion for n >= 1;
// only the first two entries differ.
inline void propagate_tail_1d(std::vector<double>& v, const ParityChannel& ch, double mu) {
    double sg = parity_sign(ch.parity);
    double z = mu * mu;
    for (std::size_t n = 1; n + 1 < v.size(); ++n) {
        double nn = static_cast<double>(n);
        v[n + 1] = ((2.0 * nn + 1.0 - 0.5 * sg - z) * v[n] - std::sqrt(nn * (nn - 0.5 * sg)) * v[n - 1]) /
                   std::sqrt((nn + 1.0) * (nn + 1.0 - 0.5 * sg));
    }
}

}  // namespace detail

inline CoefficientVector propagate_regular(const ParityChannel& ch, double mu, int n_max) {
    if (n_max < 1) throw std::invalid_argument("propagate_regular: n_max < 1");
    detail::check_channel(ch);
    detail::check_mu(mu);
    CoefficientVector out{CoefficientKind::regular, ch, {mu}, Provenance::recursion, {}};
    out.values.resize(static_cast<std::size_t>(n_max) + 1);
    out.values[0] = seed_s(ch, mu);
    double shift = 1.0 - 0.5 * detail::parity_sign(ch.parity);
    out.values[1] = (shift - mu * mu) * out.values[0] / std::sqrt(shift);
    detail::propagate_tail_1d(out.values, ch, mu);
    return out;
}

inline CoefficientVector propagate_complementary(const ParityChannel& ch, double mu, int n_max) {
    if (n_max < 2) throw std::invalid_argument("propagate_complementary: n_max < 2");
    detail::check_channel(ch);
    detail::check_mu(mu);
    CoefficientVector out{CoefficientKind::complementary, ch, {mu}, Provenance::recursion, {}};
    out.values.resize(static_cast<std::size_t>(n_max) + 1);
    out.values[0] = c_closed(0, ch, mu);
    out.values[1] = c_closed(1, ch, mu);
    detail::propagate_tail_1d(out.values, ch, mu);
    return out;
}

// Row zero of the wave operator applied to the complementary family leaves a
// source term instead of zero; this is that row's defect and must vanish.
inline double initial_source_residual(const ParityChannel& ch, double mu) {
    detail::check_channel(ch);
    detail::check_mu(mu);
    double c0 = c_closed(0, ch, mu);
    double c1 = c_closed(1, ch, mu);
    double z = mu * mu;
    double quarter_root_pi = std::pow(std::numbers::pi, -0.25);
    if (ch.parity == Parity::even)
        return (z - 0.5) * c0 + std::sqrt(0.5) * c1 -
               quarter_root_pi * std::sqrt(2.0) * ch.amplitude * mu * std::exp(0.5 * z);
    return (z - 1.5) * c0 + std::sqrt(1.5) * c1 + quarter_root_pi * ch.amplitude * std::exp(0.5 * z);
}

inline double eval_series_1d(const CoefficientVector& coeffs, double y, int start_n, Accel accel) {
    if (coeffs.values.empty()) throw std::invalid_argument("eval_series_1d: empty coefficients");
    int n_max = static_cast<int>(coeffs.values.size()) - 1;
    if (start_n < 0 || start_n > n_max) throw std::invalid_argument("eval_series_1d: start_n out of range");
    if (!(2.0 * n_max + 1.0 > y * y))
        throw std::runtime_error("eval_series_1d: turning point not covered, need 2*n_max + 1 > y^2");
    bool even = coeffs.channel.parity == Parity::even;
    std::vector<double> psi = hermite_fn_seq(even ? 2 * n_max : 2 * n_max + 1, y);
    std::vector<double> partial;
    partial.reserve(static_cast<std::size_t>(n_max - start_n) + 1);
    double acc = 0.0;
    for (int n = start_n; n <= n_max; ++n) {
        acc += coeffs.values[static_cast<std::size_t>(n)] * psi[static_cast<std::size_t>(even ? 2 * n : 2 * n + 1)];
        partial.push_back(acc);
    }
    return accelerate(partial, accel);
}

inline double eval_series_1d(CoefficientKind kind, const ParityChannel& ch, double mu, double y, int start_n,
                             int n_max, Accel accel) {
    CoefficientVector coeffs =
        kind == CoefficientKind::regular ? propagate_regular(ch, mu, n_max) : propagate_complementary(ch, mu, n_max);
    return eval_series_1d(coeffs, y, start_n, accel);
}

// Central-difference residual of the coefficient's oscillator equation in mu;
// shrinks as h^2 when the closed forms are consistent.
inline double energy_ode_residual_1d(int n, CoefficientKind kind, const ParityChannel& ch, double mu, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("energy_ode_residual_1d: h <= 0");
    if (!(mu - h > 0.0)) throw std::invalid_argument("energy_ode_residual_1d: mu - h <= 0");
    auto x = [&](double m) { return kind == CoefficientKind::regular ? s_closed(n, ch, m) : c_closed(n, ch, m); };
    double sg = detail::parity_sign(ch.parity);
    double d2 = (x(mu + h) - 2.0 * x(mu) + x(mu - h)) / (h * h);
    return d2 + (2.0 * (2.0 * n + 1.0) - sg - mu * mu) * x(mu);
}

}  // namespace jwave
