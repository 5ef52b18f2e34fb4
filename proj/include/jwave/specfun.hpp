#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace jwave {

namespace detail {

// Double-double scalars for the hypergeometric sums: the alternating terms
// cancel by up to ~20 digits within the supported parameter range, so both
// term formation and accumulation need more than double precision.
struct dd {
    double hi = 0.0;
    double lo = 0.0;
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline dd quick_two_sum(double a, double b) {  // requires |a| >= |b| or a == 0
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd dd_add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    return quick_two_sum(s.hi, s.lo + a.lo + b.lo);
}

inline dd dd_mul_d(dd a, double b) {
    dd p = two_prod(a.hi, b);
    return quick_two_sum(p.hi, p.lo + a.lo * b);
}

inline dd dd_div_d(dd a, double b) {
    double q = a.hi / b;
    dd p = two_prod(q, b);
    double r = ((a.hi - p.hi) - p.lo + a.lo) / b;
    return quick_two_sum(q, r);
}

}  // namespace detail

struct NormalizedHermiteValue {
    int order = 0;
    double argument = 0.0;
    double value = 0.0;  // |value| <= pi^{-1/4} for every order and argument
};

struct QuadratureSpec {
    double lower = 0.0;
    double upper = 0.0;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;
};

// psi_m(x) = (sqrt(pi) 2^m m!)^{-1/2} e^{-x^2/2} H_m(x) for m = 0..m_max.
// The recurrence is run on a mantissa with a shared log offset: the weight
// e^{-x^2/2} underflows long before the oscillatory region is reached (at
// |x| = 30 it is ~1e-196 while psi_450(30) is O(0.1)), so the plain values
// cannot be carried directly.
inline std::vector<double> hermite_fn_seq(int m_max, double x) {
    if (m_max < 0) throw std::invalid_argument("hermite_fn_seq: m_max < 0");
    constexpr double renorm_hi = 1e250;
    constexpr double renorm_lo = 1e-250;
    const double log_renorm = 250.0 * std::numbers::ln10;

    std::vector<double> out(static_cast<std::size_t>(m_max) + 1);
    double offset = -0.5 * x * x;
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25);
    out[0] = cur * std::exp(offset);
    for (int m = 0; m < m_max; ++m) {
        double next = x * std::sqrt(2.0 / (m + 1)) * cur - std::sqrt(static_cast<double>(m) / (m + 1)) * prev;
        prev = cur;
        cur = next;
        double mag = std::max(std::fabs(cur), std::fabs(prev));
        if (mag > renorm_hi) {
            cur *= renorm_lo;
            prev *= renorm_lo;
            offset += log_renorm;
        } else if (mag < renorm_lo && mag > 0.0) {
            cur *= renorm_hi;
            prev *= renorm_hi;
            offset -= log_renorm;
        }
        out[static_cast<std::size_t>(m) + 1] = cur * std::exp(offset);
    }
    return out;
}

inline double hermite_fn(int m, double x) {
    if (m < 0) throw std::invalid_argument("hermite_fn: m < 0");
    return hermite_fn_seq(m, x).back();
}

inline NormalizedHermiteValue normalized_hermite(int m, double x) {
    return {m, x, hermite_fn(m, x)};
}

inline double laguerre_poly(int n, double alpha, double x) {
    if (n < 0) throw std::invalid_argument("laguerre_poly: n < 0");
    if (alpha <= -1.0) throw std::invalid_argument("laguerre_poly: alpha <= -1");
    if (x < 0.0) throw std::invalid_argument("laguerre_poly: x < 0");
    double prev = 0.0;
    double cur = 1.0;
    for (int k = 0; k < n; ++k) {
        double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

// Lambda_n(y) = sqrt(n!/(n+alpha)!) L_n^alpha(y) for n = 0..n_max, integer alpha.
// The symmetric form keeps magnitudes polynomial in n where the raw
// L_n^alpha(0) = C(n+alpha, n) would dwarf the normalization.
inline std::vector<double> laguerre_norm_seq(int n_max, int alpha, double y) {
    if (n_max < 0) throw std::invalid_argument("laguerre_norm_seq: n_max < 0");
    if (alpha < 0) throw std::invalid_argument("laguerre_norm_seq: alpha < 0");
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
    double prev = 0.0;
    double cur = std::exp(-0.5 * std::lgamma(alpha + 1.0));
    out[0] = cur;
    for (int n = 0; n < n_max; ++n) {
        double next = ((2.0 * n + alpha + 1.0 - y) * cur - std::sqrt(static_cast<double>(n) * (n + alpha)) * prev) /
                      std::sqrt((n + 1.0) * (n + alpha + 1.0));
        prev = cur;
        cur = next;
        out[static_cast<std::size_t>(n) + 1] = cur;
    }
    return out;
}

inline double gegenbauer_poly(int n, double lambda, double x) {
    if (n < 0) throw std::invalid_argument("gegenbauer_poly: n < 0");
    if (lambda <= 0.0) throw std::invalid_argument("gegenbauer_poly: lambda <= 0");
    double prev = 0.0;
    double cur = 1.0;
    for (int k = 0; k < n; ++k) {
        double next = (2.0 * (k + lambda) * x * cur - (k + 2.0 * lambda - 1.0) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

inline bool is_nonpositive_integer(double v) {
    return v <= 0.0 && v == std::floor(v);
}

inline double hyp1f1(double a, double c, double z) {
    if (is_nonpositive_integer(c)) throw std::invalid_argument("hyp1f1: c is a non-positive integer");
    if (z < 0.0 || z > 100.0) throw std::invalid_argument("hyp1f1: z outside [0, 100]");
    detail::dd term{1.0, 0.0};
    detail::dd sum{1.0, 0.0};
    int small_streak = 0;
    for (int k = 0; k < 100000; ++k) {
        // factors multiplied one at a time; a premultiplied double product
        // would reinject 1e-16 noise that the cancellation amplifies
        term = detail::dd_mul_d(term, a + k);
        term = detail::dd_mul_d(term, z);
        term = detail::dd_div_d(term, c + k);
        term = detail::dd_div_d(term, k + 1.0);
        sum = detail::dd_add(sum, term);
        if (std::fabs(term.hi) < 1e-16 * std::fabs(sum.hi)) {
            if (++small_streak >= 4) return sum.hi + sum.lo;
        } else {
            small_streak = 0;
        }
    }
    throw std::runtime_error("hyp1f1: no convergence within 1e5 terms");
}

// 2F1(-m, b; c; z) as the exact (m+1)-term sum.
inline double hyp2f1_terminating(int m, double b, double c, double z) {
    if (m < 0) throw std::invalid_argument("hyp2f1_terminating: m < 0");
    detail::dd term{1.0, 0.0};
    detail::dd sum{0.0, 0.0};
    for (int k = 0; k <= m; ++k) {
        sum = detail::dd_add(sum, term);
        if (k == m) break;
        if (is_nonpositive_integer(c + k))
            throw std::runtime_error("hyp2f1_terminating: c hits a non-positive integer at k=" + std::to_string(k));
        term = detail::dd_mul_d(term, static_cast<double>(k - m));
        term = detail::dd_mul_d(term, b + k);
        term = detail::dd_mul_d(term, z);
        term = detail::dd_div_d(term, c + k);
        term = detail::dd_div_d(term, k + 1.0);
    }
    return sum.hi + sum.lo;
}

enum class BesselKind { regular, irregular };

inline double spherical_bessel(int ell, BesselKind kind, double z) {
    if (ell < 0) throw std::invalid_argument("spherical_bessel: ell < 0");
    if (z <= 0.0) throw std::invalid_argument("spherical_bessel: z <= 0");
    const double j0 = std::sin(z) / z;
    if (kind == BesselKind::irregular) {
        double prev = -std::cos(z) / z;
        if (ell == 0) return prev;
        double cur = -std::cos(z) / (z * z) - j0;
        for (int l = 1; l < ell; ++l) {
            double next = (2.0 * l + 1.0) / z * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    if (ell == 0) return j0;
    // Downward (Miller) recurrence; upward is unstable for z < ell.
    int start = ell + 20 + static_cast<int>(std::ceil(z));
    std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
    f[static_cast<std::size_t>(start) + 1] = 0.0;
    f[static_cast<std::size_t>(start)] = 1.0;
    for (int l = start; l >= 1; --l) {
        f[static_cast<std::size_t>(l) - 1] = (2.0 * l + 1.0) / z * f[static_cast<std::size_t>(l)] -
                                             f[static_cast<std::size_t>(l) + 1];
        if (std::fabs(f[static_cast<std::size_t>(l) - 1]) > 1e250) {
            for (std::size_t i = static_cast<std::size_t>(l) - 1; i < f.size(); ++i) f[i] *= 1e-250;
        }
    }
    // f[0] cancels catastrophically near zeros of j_0 (z ~ k*pi), so scale by
    // whichever of j_0, j_1 is larger; they have no common zeros.
    const double j1 = std::sin(z) / (z * z) - std::cos(z) / z;
    double scale = std::fabs(j0) >= std::fabs(j1) ? j0 / f[0] : j1 / f[1];
    return f[static_cast<std::size_t>(ell)] * scale;
}

namespace detail {

template <std::size_t N>
struct gl_rule {
    std::array<double, N> node{};
    std::array<double, N> weight{};
};

// Gauss-Legendre nodes by Newton iteration on the Legendre recurrence;
// no tabulated constants.
template <std::size_t N>
inline gl_rule<N> make_gl_rule() {
    gl_rule<N> r;
    for (std::size_t i = 0; i < N; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 1; k < N; ++k) {
                double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = N * (x * p1 - p0) / (x * x - 1.0);
            double step = p1 / dp;
            x -= step;
            if (std::fabs(step) < 1e-15) break;
        }
        r.node[i] = x;
        r.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

template <class F>
inline double gl_apply(const F& f, double a, double b, const gl_rule<15>& hi) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < 15; ++i) acc += hi.weight[i] * f(mid + half * hi.node[i]);
    return acc * half;
}

}  // namespace detail

// Adaptive bisection with an embedded GL7/GL15 error estimate. The relative
// tolerance is scaled by the integral's natural size max(|I|, integral of |f|)
// so that exactly-cancelling integrands (odd functions, orthogonality) are
// judged against the function scale rather than against zero.
template <class F>
inline double adaptive_quad(F&& f, const QuadratureSpec& spec) {
    if (!(spec.lower < spec.upper)) throw std::invalid_argument("adaptive_quad: lower >= upper");
    if (!(spec.rel_tol > 0.0)) throw std::invalid_argument("adaptive_quad: tolerance <= 0");
    static const detail::gl_rule<7> lo_rule = detail::make_gl_rule<7>();
    static const detail::gl_rule<15> hi_rule = detail::make_gl_rule<15>();

    auto panel = [&](double a, double b, double& coarse) {
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        coarse = 0.0;
        for (std::size_t i = 0; i < 7; ++i) coarse += lo_rule.weight[i] * f(mid + half * lo_rule.node[i]);
        coarse *= half;
        double fine = 0.0;
        for (std::size_t i = 0; i < 15; ++i) fine += hi_rule.weight[i] * f(mid + half * hi_rule.node[i]);
        return fine * half;
    };

    // Scale probe over 16 slices; one whole-interval panel can miss the
    // integrand's support entirely and collapse the tolerance to roundoff.
    auto abs_f = [&](double y) { return std::fabs(f(y)); };
    double rough = 0.0, rough_abs = 0.0;
    for (int s = 0; s < 16; ++s) {
        double a = spec.lower + (spec.upper - spec.lower) * (s / 16.0);
        double b = spec.lower + (spec.upper - spec.lower) * ((s + 1) / 16.0);
        rough += detail::gl_apply(f, a, b, hi_rule);
        rough_abs += detail::gl_apply(abs_f, a, b, hi_rule);
    }
    double abs_tol = spec.rel_tol * std::max({std::fabs(rough), rough_abs, std::numeric_limits<double>::min()});

    int budget = spec.max_subdivisions;
    struct frame {
        double a, b, tol;
    };
    std::vector<frame> stack{{spec.lower, spec.upper, abs_tol}};
    double total = 0.0;
    while (!stack.empty()) {
        frame fr = stack.back();
        stack.pop_back();
        double coarse = 0.0;
        double fine = panel(fr.a, fr.b, coarse);
        if (std::fabs(fine - coarse) <= fr.tol) {
            total += fine;
            continue;
        }
        if (--budget < 0) throw std::runtime_error("adaptive_quad: tolerance not met within max subdivisions");
        double mid = 0.5 * (fr.a + fr.b);
        stack.push_back({fr.a, mid, 0.5 * fr.tol});
        stack.push_back({mid, fr.b, 0.5 * fr.tol});
    }
    return total;
}

}  // namespace jwave
