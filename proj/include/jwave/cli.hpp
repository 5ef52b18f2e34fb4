#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "analysis.hpp"

namespace jwave::cli {

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
};

inline void check_grid(const GridSpec& g) {
    if (!(g.lo < g.hi)) throw std::invalid_argument("grid: lo must be < hi");
    if (!(g.step > 0.0)) throw std::invalid_argument("grid: step must be > 0");
    if ((g.hi - g.lo) / g.step > 1e7) throw std::invalid_argument("grid: more than 1e7 points");
}

inline GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    char trailing = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &g.lo, &g.hi, &g.step, &trailing) != 3)
        throw std::invalid_argument("grid: expected lo:hi:step, got '" + text + "'");
    check_grid(g);
    return g;
}

inline std::vector<double> grid_points(const GridSpec& g) {
    check_grid(g);
    long count = std::lround((g.hi - g.lo) / g.step);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count) + 1);
    for (long i = 0; i <= count; ++i) {
        double y = g.lo + static_cast<double>(i) * g.step;
        if (y > g.hi + 1e-9 * std::max(1.0, std::fabs(g.hi))) break;
        out.push_back(y);
    }
    return out;
}

// Basis size so the largest Hermite/Laguerre turning point clears the grid.
inline int default_n_max(double y_extent) {
    return static_cast<int>(std::ceil(0.5 * y_extent * y_extent)) + 64;
}

inline Accel parse_accel(const std::string& name) {
    if (name == "none") return Accel::none;
    if (name == "avg") return Accel::partial_sum_average;
    if (name == "wynn") return Accel::wynn_epsilon;
    throw std::invalid_argument("accel: expected none|avg|wynn, got '" + name + "'");
}

enum class FigureId { fig1a, fig1b, fig2a, fig2b, fig3a, fig3b, fig4a, fig4b };

inline FigureId parse_figure_id(const std::string& name) {
    static const std::map<std::string, FigureId> ids{
        {"fig1a", FigureId::fig1a}, {"fig1b", FigureId::fig1b}, {"fig2a", FigureId::fig2a},
        {"fig2b", FigureId::fig2b}, {"fig3a", FigureId::fig3a}, {"fig3b", FigureId::fig3b},
        {"fig4a", FigureId::fig4a}, {"fig4b", FigureId::fig4b}};
    auto it = ids.find(name);
    if (it == ids.end()) throw std::invalid_argument("unknown figure id '" + name + "'");
    return it->second;
}

struct FigureRequest {
    FigureId id = FigureId::fig1a;
    std::optional<double> mu;
    std::optional<int> ell;
    std::optional<int> start_n;
    std::optional<int> n_max;
    std::optional<GridSpec> grid;
    std::optional<Accel> accel;
};

struct FigureConfig {
    bool is_3d = false;
    Parity parity = Parity::even;
    int ell = 0;
    double mu = 1.2;
    int start_n = 0;
    GridSpec grid{-30.0, 30.0, 0.01};
    int n_max = 0;
    Accel accel = Accel::partial_sum_average;
};

inline FigureConfig resolve_figure(const FigureRequest& req) {
    FigureConfig cfg;
    const GridSpec grid_1d{-30.0, 30.0, 0.01};
    const GridSpec grid_3d{0.0, 60.0, 0.01};
    const GridSpec grid_3d_far{60.0, 120.0, 0.01};
    switch (req.id) {
        case FigureId::fig1a: cfg = {false, Parity::even, 0, 1.2, 0, grid_1d}; break;
        case FigureId::fig1b: cfg = {false, Parity::odd, 0, 1.2, 0, grid_1d}; break;
        case FigureId::fig2a: cfg = {false, Parity::even, 0, 1.2, 10, grid_1d}; break;
        case FigureId::fig2b: cfg = {false, Parity::even, 0, 1.2, 20, grid_1d}; break;
        case FigureId::fig3a: cfg = {true, Parity::even, 0, 1.0, 0, grid_3d}; break;
        case FigureId::fig3b: cfg = {true, Parity::even, 3, 1.0, 0, grid_3d}; break;
        case FigureId::fig4a: cfg = {true, Parity::even, 0, 1.0, 30, grid_3d}; break;
        case FigureId::fig4b: cfg = {true, Parity::even, 0, 1.0, 30, grid_3d_far}; break;
    }
    if (req.ell) {
        if (!cfg.is_3d) throw std::invalid_argument("--ell applies only to the 3d figures");
        if (*req.ell < 0) throw std::invalid_argument("--ell must be >= 0");
        cfg.ell = *req.ell;
    }
    if (req.mu) cfg.mu = *req.mu;
    if (req.start_n) {
        if (*req.start_n < 0) throw std::invalid_argument("--start-n must be >= 0");
        cfg.start_n = *req.start_n;
    }
    if (req.grid) cfg.grid = *req.grid;
    check_grid(cfg.grid);
    double extent = std::max(std::fabs(cfg.grid.lo), std::fabs(cfg.grid.hi));
    cfg.n_max = req.n_max ? *req.n_max : default_n_max(extent);
    if (cfg.n_max < 2) throw std::invalid_argument("--nmax must be >= 2");
    if (cfg.start_n > cfg.n_max) throw std::invalid_argument("--start-n exceeds n_max");
    if (req.accel) cfg.accel = *req.accel;
    return cfg;
}

struct FigureRow {
    double y = 0.0;
    double f = 0.0;
    double g = 0.0;
};

inline std::vector<FigureRow> figure_rows(const FigureConfig& cfg) {
    std::vector<double> ys = grid_points(cfg.grid);
    std::vector<FigureRow> rows;
    rows.reserve(ys.size());
    if (cfg.is_3d) {
        AngularChannel ch{cfg.ell, 1.0};
        EnergyAngle angle = energy_angle(cfg.mu);
        CoefficientVector3D fs = propagate_3d(CoefficientKind::regular, ch, angle, cfg.n_max);
        CoefficientVector3D gs = propagate_3d(CoefficientKind::complementary, ch, angle, cfg.n_max);
        for (double y : ys)
            rows.push_back({y, eval_series_3d(fs, y, cfg.start_n, cfg.accel), eval_series_3d(gs, y, cfg.start_n, cfg.accel)});
    } else {
        ParityChannel ch{cfg.parity, 1.0};
        CoefficientVector fs = propagate_regular(ch, cfg.mu, cfg.n_max);
        CoefficientVector gs = propagate_complementary(ch, cfg.mu, cfg.n_max);
        for (double y : ys)
            rows.push_back({y, eval_series_1d(fs, y, cfg.start_n, cfg.accel), eval_series_1d(gs, y, cfg.start_n, cfg.accel)});
    }
    return rows;
}

inline void write_figure_csv(const std::vector<FigureRow>& rows, std::ostream& out) {
    out << "y,f,g\n";
    char buf[128];
    for (const FigureRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.y, r.f, r.g);
        out << buf;
    }
}

// ---- verify suites ----

namespace detail {

inline std::vector<double> closed_regular_1d(const ParityChannel& ch, double mu, int n_max) {
    std::vector<double> v(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) v[static_cast<std::size_t>(n)] = s_closed(n, ch, mu);
    return v;
}

inline std::vector<double> closed_complementary_1d(const ParityChannel& ch, double mu, int n_max) {
    std::vector<double> v(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) v[static_cast<std::size_t>(n)] = c_closed(n, ch, mu);
    return v;
}

inline std::vector<double> rel_diffs(const std::vector<double>& got, const std::vector<double>& want) {
    std::vector<double> out(want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
        out[i] = std::fabs(got[i] - want[i]) / std::max(1.0, std::fabs(want[i]));
    return out;
}

inline std::string parity_name(Parity p) { return p == Parity::even ? "even" : "odd"; }

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace detail

inline std::vector<ResidualReport> verify_recursion() {
    std::vector<ResidualReport> reports;
    for (Parity p : {Parity::even, Parity::odd}) {
        ParityChannel ch{p, 1.0};
        for (double mu : {0.5, 1.2, 3.0}) {
            CoefficientVector closed{CoefficientKind::regular, ch, {mu}, Provenance::closed_form,
                                     detail::closed_regular_1d(ch, mu, 200)};
            ResidualReport rec = recursion_residuals(closed);
            rec.check = "1d regular closed-form recursion residual " + detail::parity_name(p) + " mu=" + detail::fmt(mu);
            reports.push_back(std::move(rec));
            CoefficientVector prop = propagate_regular(ch, mu, 200);
            reports.push_back(make_residual_report(
                "1d regular closed vs recursion " + detail::parity_name(p) + " mu=" + detail::fmt(mu),
                detail::rel_diffs(prop.values, closed.values), 1e-10));
        }
        double mu = 1.2;
        CoefficientVector closed_c{CoefficientKind::complementary, ch, {mu}, Provenance::closed_form,
                                   detail::closed_complementary_1d(ch, mu, 200)};
        ResidualReport rec = recursion_residuals(closed_c);
        rec.check = "1d complementary closed-form recursion residual " + detail::parity_name(p) + " mu=1.2";
        reports.push_back(std::move(rec));
        CoefficientVector prop_c = propagate_complementary(ch, mu, 200);
        reports.push_back(make_residual_report("1d complementary closed vs recursion " + detail::parity_name(p) + " mu=1.2",
                                               detail::rel_diffs(prop_c.values, closed_c.values), 1e-8));
        // Row zero of the homogeneous relation must NOT hold for the
        // complementary family; the report passes when the defect is present.
        TridiagRow row0 = jmatrix_row_1d(0, ch, mu);
        double defect = row0.diag * closed_c.values[0] + row0.sup * closed_c.values[1];
        double scale = std::fabs(row0.diag * closed_c.values[0]) + std::fabs(row0.sup * closed_c.values[1]);
        reports.push_back(make_residual_report(
            "1d complementary row0 defect present " + detail::parity_name(p) + " mu=1.2",
            {std::fabs(defect) > 1e-6 * scale ? 0.0 : 1.0}, 0.5));
    }
    {
        // Inhomogeneous row-zero identity with the printed growing source factor.
        std::vector<double> even_res;
        std::vector<double> odd_res;
        for (double mu : {0.5, 1.2, 2.0, 3.0}) {
            double source_even = std::pow(std::numbers::pi, -0.25) * std::sqrt(2.0) * mu * std::exp(0.5 * mu * mu);
            double source_odd = std::pow(std::numbers::pi, -0.25) * std::exp(0.5 * mu * mu);
            even_res.push_back(initial_source_residual({Parity::even, 1.0}, mu) / source_even);
            odd_res.push_back(initial_source_residual({Parity::odd, 1.0}, mu) / source_odd);
        }
        reports.push_back(make_residual_report("1d complementary row0 source identity even", std::move(even_res), 1e-10));
        reports.push_back(make_residual_report("1d complementary row0 source identity odd", std::move(odd_res), 1e-10));
    }
    EnergyAngle angle = energy_angle(1.0);
    for (int ell : {0, 1, 3, 5}) {
        AngularChannel ch{ell, 1.0};
        std::vector<double> closed_s(201);
        for (int n = 0; n <= 200; ++n) closed_s[static_cast<std::size_t>(n)] = s_closed_3d(n, ch, angle);
        CoefficientVector3D closed_vec{CoefficientKind::regular, ch, angle, Provenance::closed_form, closed_s};
        ResidualReport rec = recursion_residuals(closed_vec);
        rec.check = "3d regular closed-form recursion residual ell=" + std::to_string(ell);
        reports.push_back(std::move(rec));
        CoefficientVector3D prop = propagate_3d(CoefficientKind::regular, ch, angle, 200);
        reports.push_back(make_residual_report("3d regular closed vs recursion ell=" + std::to_string(ell),
                                               detail::rel_diffs(prop.values, closed_s), 1e-10));

        int n_hi = 60 - 2 * ell - 1;  // terminating-sum trust region
        std::vector<double> closed_c(static_cast<std::size_t>(n_hi) + 1);
        for (int n = 0; n <= n_hi; ++n) closed_c[static_cast<std::size_t>(n)] = c_closed_3d(n, ch, angle);
        CoefficientVector3D closed_c_vec{CoefficientKind::complementary, ch, angle, Provenance::closed_form, closed_c};
        ResidualReport rec_c = recursion_residuals(closed_c_vec);
        rec_c.check = "3d complementary closed-form recursion residual ell=" + std::to_string(ell);
        reports.push_back(std::move(rec_c));
        CoefficientVector3D prop_c = propagate_3d(CoefficientKind::complementary, ch, angle, n_hi);
        reports.push_back(make_residual_report("3d complementary closed vs recursion ell=" + std::to_string(ell),
                                               detail::rel_diffs(prop_c.values, closed_c), 1e-8));
        TridiagRow row0 = jmatrix_row_3d(0, ch, angle);
        double defect = row0.diag * closed_c[0] + row0.sup * closed_c[1];
        double scale = std::fabs(row0.diag * closed_c[0]) + std::fabs(row0.sup * closed_c[1]);
        reports.push_back(make_residual_report("3d complementary row0 defect present ell=" + std::to_string(ell),
                                               {std::fabs(defect) > 1e-6 * scale ? 0.0 : 1.0}, 0.5));
    }
    return reports;
}

inline std::vector<ResidualReport> verify_ode() {
    std::vector<ResidualReport> reports;
    const double h = 1e-3;
    for (Parity p : {Parity::even, Parity::odd}) {
        ParityChannel ch{p, 1.0};
        for (CoefficientKind kind : {CoefficientKind::regular, CoefficientKind::complementary}) {
            std::vector<double> res;
            for (int n : {0, 3}) {
                double r1 = energy_ode_residual_1d(n, kind, ch, 1.2, h);
                double r2 = energy_ode_residual_1d(n, kind, ch, 1.2, 0.5 * h);
                res.push_back(std::fabs(r1 / r2) - 4.0);
            }
            reports.push_back(make_residual_report(
                std::string("1d energy ode h-halving ratio ") +
                    (kind == CoefficientKind::regular ? "regular " : "complementary ") + detail::parity_name(p),
                std::move(res), 0.5));
        }
    }
    reports.push_back(make_residual_report("1d energy ode magnitude regular even n=0",
                                           {energy_ode_residual_1d(0, CoefficientKind::regular, {Parity::even, 1.0}, 1.2, h)},
                                           1e-4));
    reports.push_back(make_residual_report(
        "1d energy ode magnitude complementary odd n=3",
        {energy_ode_residual_1d(3, CoefficientKind::complementary, {Parity::odd, 1.0}, 1.2, h)}, 1e-3));
    // n = 2, 3 keep every coefficient's polynomial degree above the stencil's
    // exactness order; lower n can make the truncation error vanish identically.
    for (int ell : {0, 1}) {
        AngularChannel ch{ell, 1.0};
        for (CoefficientKind kind : {CoefficientKind::regular, CoefficientKind::complementary}) {
            std::vector<double> res;
            for (int n : {2, 3}) {
                for (double x : {0.6, -0.3}) {
                    double r1 = energy_ode_residual_3d(n, kind, ch, x, h);
                    double r2 = energy_ode_residual_3d(n, kind, ch, x, 0.5 * h);
                    res.push_back(std::fabs(r1 / r2) - 4.0);
                }
            }
            reports.push_back(make_residual_report(
                std::string("3d energy ode h-halving ratio ") +
                    (kind == CoefficientKind::regular ? "regular " : "complementary ") + "ell=" + std::to_string(ell),
                std::move(res), 0.5));
        }
    }
    reports.push_back(make_residual_report(
        "3d energy ode magnitude sampled combinations",
        {energy_ode_residual_3d(0, CoefficientKind::regular, {0, 1.0}, 0.6, h),
         energy_ode_residual_3d(2, CoefficientKind::regular, {1, 1.0}, 0.0, h),
         energy_ode_residual_3d(0, CoefficientKind::complementary, {0, 1.0}, 0.6, h)},
        1e-3));
    return reports;
}

inline std::vector<ResidualReport> verify_integrals() {
    std::vector<ResidualReport> reports;
    const double mu = 1.2;
    for (Parity p : {Parity::even, Parity::odd}) {
        std::vector<double> res;
        for (int n = 0; n <= 8; ++n) {
            int m = p == Parity::even ? 2 * n : 2 * n + 1;
            double norm = std::exp(0.5 * (0.5 * std::log(std::numbers::pi) + m * std::numbers::ln2 + std::lgamma(m + 1.0)));
            double limit = 14.0 + std::sqrt(2.0 * m + 1.0);
            auto integrand = [&](double y) {
                double trig = p == Parity::even ? std::cos(mu * y) : std::sin(mu * y);
                return trig * hermite_fn(m, y) * norm;
            };
            double got = adaptive_quad(integrand, {-limit, limit, 1e-12, 4000});
            double sign = (n % 2 == 0) ? 1.0 : -1.0;
            double want = sign * std::sqrt(2.0 * std::numbers::pi) * hermite_fn(m, mu) * norm;
            res.push_back((got - want) / std::max(1.0, std::fabs(want)));
        }
        reports.push_back(make_residual_report(
            "1d projection integral vs closed coefficient " + detail::parity_name(p) + " mu=1.2", std::move(res), 1e-9));
    }
    for (int ell : {0, 1, 3}) {
        AngularChannel ch{ell, 1.0};
        EnergyAngle angle = energy_angle(1.0);
        std::vector<double> res;
        for (int n = 0; n <= 8; ++n) {
            double got = coefficient_integral_oracle_3d(n, ch, 1.0);
            double want = s_closed_3d(n, ch, angle);
            res.push_back((got - want) / std::max(1.0, std::fabs(want)));
        }
        reports.push_back(make_residual_report("3d projection integral vs closed coefficient ell=" + std::to_string(ell),
                                               std::move(res), ell == 3 ? 1e-7 : 1e-8));
    }
    for (Parity p : {Parity::even, Parity::odd}) {
        ParityChannel ch{p, 1.0};
        std::vector<double> res;
        double limit = 14.0 + std::sqrt(2.0 * 61.0 + 1.0);
        for (int n = 0; n <= 30; ++n) {
            for (int m = n; m <= 30; ++m) {
                auto integrand = [&](double y) { return basis_fn_1d(n, ch, y) * basis_fn_1d(m, ch, y); };
                double got = adaptive_quad(integrand, {-limit, limit, 1e-11, 4000});
                res.push_back(got - (n == m ? 1.0 : 0.0));
            }
        }
        reports.push_back(
            make_residual_report("1d basis orthonormality n,m<=30 " + detail::parity_name(p), std::move(res), 1e-10));
    }
    for (int ell = 0; ell <= 3; ++ell) {
        AngularChannel ch{ell, 1.0};
        std::vector<double> res;
        double upper = 60.0;
        for (int i = 0; i < 4; ++i) upper = 18.0 * std::numbers::ln10 + (22.0 + 2.0 * ell) * std::log(upper) + 20.0;
        for (int n = 0; n <= 10; ++n) {
            for (int m = n; m <= 10; ++m) {
                // orthonormal under the weight 1/y; the plain overlap is tridiagonal
                auto integrand = [&](double y) { return basis_fn_3d(n, ch, y) * basis_fn_3d(m, ch, y) / y; };
                double got = adaptive_quad(integrand, {0.0, upper, 1e-11, 4000});
                res.push_back(got - (n == m ? 1.0 : 0.0));
            }
        }
        reports.push_back(
            make_residual_report("3d basis orthonormality weight 1/y n,m<=10 ell=" + std::to_string(ell), std::move(res), 1e-9));
    }
    return reports;
}

inline std::vector<ResidualReport> verify_jmatrix() {
    std::vector<ResidualReport> reports;
    const double mu = 1.2;
    for (Parity p : {Parity::even, Parity::odd}) {
        ParityChannel ch{p, 1.0};
        std::vector<double> res;
        int m_top = p == Parity::even ? 12 : 13;
        double limit = 14.0 + std::sqrt(2.0 * m_top + 1.0);
        for (int n = 0; n <= 6; ++n) {
            for (int m = 0; m <= 6; ++m) {
                // d^2/dy^2 psi_M = (y^2 - (2M+1)) psi_M turns the wave-operator
                // element into a pure y^2-moment quadrature.
                int big_m = p == Parity::even ? 2 * m : 2 * m + 1;
                auto integrand = [&](double y) {
                    return basis_fn_1d(n, ch, y) * (y * y + mu * mu - (2.0 * big_m + 1.0)) * basis_fn_1d(m, ch, y);
                };
                double got = adaptive_quad(integrand, {-limit, limit, 1e-11, 4000});
                double want = 0.0;
                TridiagRow row = jmatrix_row_1d(m, ch, mu);
                if (n == m) want = row.diag;
                else if (n == m - 1) want = row.sub;
                else if (n == m + 1) want = row.sup;
                res.push_back(got - want);
            }
        }
        reports.push_back(
            make_residual_report("1d wave operator quadrature vs tridiagonal row " + detail::parity_name(p),
                                 std::move(res), 1e-8));
    }
    const double mu3 = 1.0;
    EnergyAngle angle = energy_angle(mu3);
    for (int ell = 0; ell <= 2; ++ell) {
        AngularChannel ch{ell, 1.0};
        std::vector<double> res;
        double upper = 60.0;
        for (int i = 0; i < 4; ++i) upper = 18.0 * std::numbers::ln10 + (12.0 + 2.0 * ell) * std::log(upper) + 20.0;
        for (int n = 0; n <= 5; ++n) {
            for (int m = 0; m <= 5; ++m) {
                // [d^2/dy^2 - l(l+1)/y^2 + mu^2] phi_m = [mu^2 + 1/4 - (m+l+1)/y] phi_m
                auto integrand = [&](double y) {
                    return basis_fn_3d(n, ch, y) * (mu3 * mu3 + 0.25 - (m + ell + 1.0) / y) * basis_fn_3d(m, ch, y);
                };
                double got = adaptive_quad(integrand, {0.0, upper, 1e-11, 4000});
                double want = 0.0;
                TridiagRow row = jmatrix_row_3d(m, ch, angle);
                if (n == m) want = row.diag;
                else if (n == m - 1) want = row.sub;
                else if (n == m + 1) want = row.sup;
                res.push_back(got - want);
            }
        }
        reports.push_back(make_residual_report("3d wave operator quadrature vs tridiagonal row ell=" + std::to_string(ell),
                                               std::move(res), 1e-7));
    }
    return reports;
}

inline std::vector<ResidualReport> verify_asymptotics() {
    std::vector<ResidualReport> reports;
    {
        const double mu = 1.2;
        const std::pair<double, double> window{15.0, 25.0};
        int n_max = default_n_max(window.second);
        std::vector<double> ys;
        for (int i = 0; i <= 1000; ++i) ys.push_back(15.0 + 0.01 * i);
        for (Parity p : {Parity::even, Parity::odd}) {
            ParityChannel ch{p, 1.0};
            CoefficientVector fs = propagate_regular(ch, mu, n_max);
            CoefficientVector gs = propagate_complementary(ch, mu, n_max);
            std::vector<std::pair<double, double>> f_samples, g_samples;
            std::vector<double> dev;
            for (double y : ys) {
                double f = eval_series_1d(fs, y, 0, Accel::partial_sum_average);
                double g = eval_series_1d(gs, y, 0, Accel::partial_sum_average);
                f_samples.emplace_back(y, f);
                g_samples.emplace_back(y, g);
                double target = p == Parity::even ? std::sin(mu * y) : std::cos(mu * y);
                dev.push_back(g - target);
            }
            PhaseFitResult f_fit = phase_fit(f_samples, mu, window);
            PhaseFitResult g_fit = phase_fit(g_samples, mu, window);
            double want_phase = p == Parity::even ? 0.0 : 0.5 * std::numbers::pi;
            reports.push_back(make_residual_report(
                "1d complementary asymptotic fit " + detail::parity_name(p),
                {g_fit.amplitude - 1.0, g_fit.phase - want_phase}, 0.02));
            double dphi = std::fabs(f_fit.phase - g_fit.phase);
            if (dphi > std::numbers::pi) dphi = 2.0 * std::numbers::pi - dphi;
            reports.push_back(make_residual_report("1d f/g phase difference is quarter turn " + detail::parity_name(p),
                                                   {dphi - 0.5 * std::numbers::pi}, 0.02));
            reports.push_back(make_residual_report(
                "1d complementary matches shifted sinusoid on window " + detail::parity_name(p), std::move(dev), 1e-3));
        }
    }
    {
        const double mu = 1.0;
        const std::pair<double, double> window{40.0, 60.0};
        int n_max = default_n_max(window.second);
        EnergyAngle angle = energy_angle(mu);
        for (int ell : {0, 3}) {
            AngularChannel ch{ell, 1.0};
            CoefficientVector3D fs = propagate_3d(CoefficientKind::regular, ch, angle, n_max);
            CoefficientVector3D gs = propagate_3d(CoefficientKind::complementary, ch, angle, n_max);
            std::vector<std::pair<double, double>> f_samples, g_samples;
            for (int i = 0; i <= 2000; ++i) {
                double y = 40.0 + 0.01 * i;
                f_samples.emplace_back(y, eval_series_3d(fs, y, 0, Accel::partial_sum_average));
                g_samples.emplace_back(y, eval_series_3d(gs, y, 0, Accel::partial_sum_average));
            }
            PhaseFitResult f_fit = phase_fit(f_samples, mu, window);
            PhaseFitResult g_fit = phase_fit(g_samples, mu, window);
            double dphi = std::fabs(f_fit.phase - g_fit.phase);
            if (dphi > std::numbers::pi) dphi = 2.0 * std::numbers::pi - dphi;
            reports.push_back(make_residual_report("3d f/g phase difference is quarter turn ell=" + std::to_string(ell),
                                                   {dphi - 0.5 * std::numbers::pi}, 1e-2));
            reports.push_back(make_residual_report("3d f/g asymptotic amplitudes agree ell=" + std::to_string(ell),
                                                   {f_fit.amplitude / g_fit.amplitude - 1.0}, 0.02));
        }
    }
    return reports;
}

inline std::vector<ResidualReport> verify_suite(const std::string& suite) {
    if (suite == "recursion") return verify_recursion();
    if (suite == "ode") return verify_ode();
    if (suite == "integrals") return verify_integrals();
    if (suite == "jmatrix") return verify_jmatrix();
    if (suite == "asymptotics") return verify_asymptotics();
    if (suite == "all") {
        std::vector<ResidualReport> all;
        for (auto* fn : {&verify_recursion, &verify_ode, &verify_integrals, &verify_jmatrix, &verify_asymptotics}) {
            std::vector<ResidualReport> part = (*fn)();
            all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        }
        return all;
    }
    throw std::invalid_argument("unknown suite '" + suite + "' (expected recursion|ode|integrals|jmatrix|asymptotics|all)");
}

inline nlohmann::json reports_to_json(const std::vector<ResidualReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ResidualReport& r : reports)
        arr.push_back({{"check", r.check}, {"max_abs", r.max_abs}, {"tolerance", r.tolerance}, {"pass", r.pass}});
    return arr;
}

// ---- deadzone / coeffs ----

struct DeadZoneRequest {
    bool is_3d = false;
    Parity parity = Parity::even;
    int ell = 0;
    double mu = 1.2;
    int start_n = 0;
    double epsilon = 1e-3;
    std::optional<int> n_max;
    std::optional<GridSpec> grid;
    Accel accel = Accel::partial_sum_average;
};

inline DeadZoneResult run_deadzone(const DeadZoneRequest& req) {
    if (req.start_n < 0) throw std::invalid_argument("--start-n must be >= 0");
    GridSpec scan = req.grid.value_or(req.is_3d ? GridSpec{0.0, 60.0, 0.01} : GridSpec{0.0, 30.0, 0.01});
    check_grid(scan);
    if (scan.lo != 0.0) throw std::invalid_argument("deadzone scan must start at 0");
    int n_max = req.n_max.value_or(default_n_max(scan.hi));
    if (req.start_n > n_max) throw std::invalid_argument("--start-n exceeds n_max");
    if (req.is_3d) {
        CoefficientVector3D fs =
            propagate_3d(CoefficientKind::regular, {req.ell, 1.0}, energy_angle(req.mu), std::max(n_max, 2));
        return dead_zone_radius([&](double y) { return eval_series_3d(fs, y, req.start_n, req.accel); }, req.epsilon,
                                scan.hi, scan.step, req.start_n);
    }
    CoefficientVector fs = propagate_regular({req.parity, 1.0}, req.mu, std::max(n_max, 1));
    return dead_zone_radius([&](double y) { return eval_series_1d(fs, y, req.start_n, req.accel); }, req.epsilon,
                            scan.hi, scan.step, req.start_n);
}

struct CoeffsRequest {
    bool is_3d = false;
    CoefficientKind kind = CoefficientKind::regular;
    Parity parity = Parity::even;
    int ell = 0;
    double mu = 1.2;
    int n_max = 50;
};

struct CoeffRow {
    int n = 0;
    double value = 0.0;
    double closed_form = 0.0;
    double rel_diff = 0.0;
};

inline std::vector<CoeffRow> coeffs_table(const CoeffsRequest& req) {
    if (req.n_max < 0) throw std::invalid_argument("--nmax must be >= 0");
    std::vector<CoeffRow> rows;
    rows.reserve(static_cast<std::size_t>(req.n_max) + 1);
    if (req.is_3d) {
        AngularChannel ch{req.ell, 1.0};
        EnergyAngle angle = energy_angle(req.mu);
        CoefficientVector3D prop = propagate_3d(req.kind, ch, angle, std::max(req.n_max, 2));
        for (int n = 0; n <= req.n_max; ++n) {
            double closed = req.kind == CoefficientKind::regular ? s_closed_3d(n, ch, angle)
                                                                 : complementary_coefficient_3d(n, ch, angle);
            double value = prop.values[static_cast<std::size_t>(n)];
            rows.push_back({n, value, closed, std::fabs(value - closed) / std::max(1.0, std::fabs(closed))});
        }
    } else {
        ParityChannel ch{req.parity, 1.0};
        CoefficientVector prop = req.kind == CoefficientKind::regular
                                     ? propagate_regular(ch, req.mu, std::max(req.n_max, 1))
                                     : propagate_complementary(ch, req.mu, std::max(req.n_max, 2));
        for (int n = 0; n <= req.n_max; ++n) {
            double closed = req.kind == CoefficientKind::regular ? s_closed(n, ch, req.mu) : c_closed(n, ch, req.mu);
            double value = prop.values[static_cast<std::size_t>(n)];
            rows.push_back({n, value, closed, std::fabs(value - closed) / std::max(1.0, std::fabs(closed))});
        }
    }
    return rows;
}

inline void write_coeffs_csv(const std::vector<CoeffRow>& rows, std::ostream& out) {
    out << "n,value,closed_form,rel_diff\n";
    char buf[160];
    for (const CoeffRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.n, r.value, r.closed_form, r.rel_diff);
        out << buf;
    }
}

// ---- entry point shared by the binary and the tests ----

namespace detail {

inline int with_output(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& emit) {
    if (path.empty()) {
        emit(fallback);
        return 0;
    }
    std::ofstream file(path);
    if (!file) throw std::invalid_argument("cannot open output path '" + path + "'");
    emit(file);
    if (!file.good()) throw std::invalid_argument("write failed for output path '" + path + "'");
    return 0;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"orthogonal-series wave solutions: figure data and verification"};
    app.require_subcommand(1);

    std::string out_path;
    std::string grid_text;
    std::string accel_text;
    double mu = std::numeric_limits<double>::quiet_NaN();
    int ell = -1;
    int start_n = -1;
    int n_max = -1;
    double eps = 1e-3;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--mu", mu, "wave number");
        cmd->add_option("--ell", ell, "angular momentum (selects the 3d problem)");
        cmd->add_option("--start-n", start_n, "first series index");
        cmd->add_option("--nmax", n_max, "last series index");
        cmd->add_option("--grid", grid_text, "evaluation grid lo:hi:step");
        cmd->add_option("--accel", accel_text, "tail acceleration none|avg|wynn");
        cmd->add_option("--out", out_path, "output file (default stdout)");
    };

    std::string figure_name;
    CLI::App* fig = app.add_subcommand("figure", "emit CSV y,f,g for a figure");
    fig->add_option("id", figure_name, "figure id fig1a..fig4b")->required();
    add_common(fig);

    std::string suite = "all";
    CLI::App* ver = app.add_subcommand("verify", "run a verification suite, emit JSON reports");
    ver->add_option("suite", suite, "recursion|ode|integrals|jmatrix|asymptotics|all");
    ver->add_option("--out", out_path, "output file (default stdout)");

    std::string channel_name = "even";
    CLI::App* dz = app.add_subcommand("deadzone", "measure the suppressed interval of a truncated series");
    dz->add_option("channel", channel_name, "even|odd (1d; --ell switches to 3d)");
    add_common(dz);
    dz->add_option("--eps", eps, "suppression threshold");

    std::string kind_name = "regular";
    std::string coeff_channel = "even";
    CLI::App* co = app.add_subcommand("coeffs", "emit CSV n,value,closed_form,rel_diff");
    co->add_option("kind", kind_name, "regular|complementary");
    co->add_option("channel", coeff_channel, "even|odd (1d; --ell switches to 3d)");
    add_common(co);

    std::vector<const char*> argv;
    argv.push_back("jwave");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            int code = app.exit(e, out, err);
            return code == 0 ? 0 : 2;
        }

        auto parity_of = [&](const std::string& name) {
            if (name == "even") return Parity::even;
            if (name == "odd") return Parity::odd;
            throw std::invalid_argument("channel: expected even|odd, got '" + name + "'");
        };

        if (fig->parsed()) {
            FigureRequest req;
            req.id = parse_figure_id(figure_name);
            if (!std::isnan(mu)) req.mu = mu;
            if (ell >= 0) req.ell = ell;
            if (start_n >= 0) req.start_n = start_n;
            if (n_max >= 0) req.n_max = n_max;
            if (!grid_text.empty()) req.grid = parse_grid(grid_text);
            if (!accel_text.empty()) req.accel = parse_accel(accel_text);
            std::vector<FigureRow> rows = figure_rows(resolve_figure(req));
            return detail::with_output(out_path, out, [&](std::ostream& os) { write_figure_csv(rows, os); });
        }
        if (ver->parsed()) {
            std::vector<ResidualReport> reports = verify_suite(suite);
            detail::with_output(out_path, out, [&](std::ostream& os) { os << reports_to_json(reports).dump(2) << "\n"; });
            bool all_pass = true;
            for (const ResidualReport& r : reports) {
                if (!r.pass) {
                    all_pass = false;
                    err << "FAIL " << r.check << " max_abs=" << r.max_abs << " tolerance=" << r.tolerance << "\n";
                }
            }
            return all_pass ? 0 : 1;
        }
        if (dz->parsed()) {
            DeadZoneRequest req;
            if (ell >= 0) {
                req.is_3d = true;
                req.ell = ell;
                req.mu = 1.0;
            } else {
                req.parity = parity_of(channel_name);
            }
            if (!std::isnan(mu)) req.mu = mu;
            if (start_n >= 0) req.start_n = start_n;
            if (n_max >= 0) req.n_max = n_max;
            if (!grid_text.empty()) req.grid = parse_grid(grid_text);
            if (!accel_text.empty()) req.accel = parse_accel(accel_text);
            req.epsilon = eps;
            DeadZoneResult result = run_deadzone(req);
            nlohmann::json j{{"start_n", result.start_n}, {"epsilon", result.epsilon}, {"radius", result.radius}};
            return detail::with_output(out_path, out, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
        }
        if (co->parsed()) {
            CoeffsRequest req;
            if (kind_name == "regular") req.kind = CoefficientKind::regular;
            else if (kind_name == "complementary") req.kind = CoefficientKind::complementary;
            else throw std::invalid_argument("kind: expected regular|complementary, got '" + kind_name + "'");
            if (ell >= 0) {
                req.is_3d = true;
                req.ell = ell;
                req.mu = 1.0;
            } else {
                req.parity = parity_of(coeff_channel);
            }
            if (!std::isnan(mu)) req.mu = mu;
            if (n_max >= 0) req.n_max = n_max;
            std::vector<CoeffRow> rows = coeffs_table(req);
            return detail::with_output(out_path, out, [&](std::ostream& os) { write_coeffs_csv(rows, os); });
        }
        err << "no subcommand\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace jwave::cli
