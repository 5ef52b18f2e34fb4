#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <jwave/waves1d.hpp>

using Catch::Approx;
using namespace jwave;

namespace {
const ParityChannel kEven{Parity::even, 1.0};
const ParityChannel kOdd{Parity::odd, 1.0};
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("parity basis delegates to normalized hermite functions") {
    REQUIRE(basis_fn_1d(0, kEven, 0.0) == Approx(std::pow(kPi, -0.25)).epsilon(1e-14));
    REQUIRE(basis_fn_1d(0, kOdd, 0.0) == 0.0);
    REQUIRE(basis_fn_1d(1, kEven, 1.0) == Approx(0.32215).epsilon(1e-4));
    REQUIRE(basis_fn_1d(1, kEven, 1.0) == hermite_fn(2, 1.0));
    REQUIRE(basis_fn_1d(1, kOdd, 1.0) == hermite_fn(3, 1.0));
}

TEST_CASE("regular coefficient closed form") {
    REQUIRE(s_closed(0, kEven, 1.2) == Approx(std::sqrt(2.0) * std::pow(kPi, 0.25) * std::exp(-0.72)).epsilon(1e-13));
    REQUIRE(s_closed(0, kEven, 1.2) == Approx(0.91645).epsilon(1e-4));
    REQUIRE(s_closed(0, kOdd, 1.2) == Approx(2.0 * std::pow(kPi, 0.25) * 1.2 * std::exp(-0.72)).epsilon(1e-13));
    REQUIRE(s_closed(0, kOdd, 1.2) == Approx(1.55527).epsilon(1e-4));
    // pointwise closed form stays defined in the zero-wavenumber limit
    REQUIRE(s_closed(1, kEven, 0.0) == Approx(std::pow(kPi, 0.25)).epsilon(1e-13));
    REQUIRE(s_closed(1, kEven, 0.0) == Approx(1.33134).epsilon(1e-4));
    // amplitude linearity
    REQUIRE(s_closed(3, {Parity::even, 2.0}, 1.2) == 2.0 * s_closed(3, kEven, 1.2));
}

TEST_CASE("seed matches the closed form exactly") {
    REQUIRE(seed_s(kEven, 1.2) == s_closed(0, kEven, 1.2));
    REQUIRE(seed_s(kOdd, 1.2) == s_closed(0, kOdd, 1.2));
    REQUIRE(seed_s({Parity::even, 2.0}, 1.2) == Approx(1.83291).epsilon(1e-4));
    REQUIRE(seed_s(kOdd, 1e-12) == Approx(2.0 * std::pow(kPi, 0.25) * 1e-12).epsilon(1e-9));
    REQUIRE_THROWS_AS(seed_s(kEven, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(seed_s({Parity::even, 0.0}, 1.2), std::invalid_argument);
}

TEST_CASE("regular propagation seeds and first step") {
    CoefficientVector v = propagate_regular(kEven, 1.2, 1);
    REQUIRE(v.values.size() == 2);
    REQUIRE(v.values[0] == seed_s(kEven, 1.2));
    double want = v.values[0] * (0.5 - 1.44) / std::sqrt(0.5);
    REQUIRE(v.values[1] == Approx(want).epsilon(1e-14));
    REQUIRE(v.values[1] == Approx(-1.21832).epsilon(1e-4));
    REQUIRE(v.values[1] == Approx(s_closed(1, kEven, 1.2)).epsilon(1e-12));
    REQUIRE(v.provenance == Provenance::recursion);

    CoefficientVector w = propagate_regular(kOdd, 1.2, 1);
    REQUIRE(w.values[1] == Approx(w.values[0] * (1.5 - 1.44) / std::sqrt(1.5)).epsilon(1e-14));
    REQUIRE_THROWS_AS(propagate_regular(kEven, 1.2, 0), std::invalid_argument);
}

TEST_CASE("regular closed form vs recursion across wavenumbers") {
    for (Parity p : {Parity::even, Parity::odd}) {
        ParityChannel ch{p, 1.0};
        for (double mu : {0.5, 1.2, 3.0}) {
            CoefficientVector v = propagate_regular(ch, mu, 200);
            double worst = 0.0;
            for (int n = 0; n <= 200; ++n) {
                double closed = s_closed(n, ch, mu);
                worst = std::max(worst,
                                 std::fabs(v.values[static_cast<std::size_t>(n)] - closed) / std::max(1.0, std::fabs(closed)));
            }
            REQUIRE(worst < 1e-10);
        }
    }
}

TEST_CASE("complementary coefficient closed form against frozen references") {
    REQUIRE(c_closed(0, kEven, 1.2) == Approx(2.2140719227385586547).epsilon(1e-13));
    REQUIRE(c_closed(1, kEven, 1.2) == Approx(0.76022912465423572195).epsilon(1e-13));
    REQUIRE(c_closed(5, kEven, 1.2) == Approx(-0.71055452294399598646).epsilon(1e-13));
    REQUIRE(c_closed(0, kOdd, 1.2) == Approx(-0.67113012162411402413).epsilon(1e-13));
    REQUIRE(c_closed(1, kOdd, 1.2) == Approx(-1.2928448268659318305).epsilon(1e-13));
    REQUIRE(c_closed(5, kOdd, 1.2) == Approx(0.77312354617885243864).epsilon(1e-13));
    // overall mu factor in the even channel
    REQUIRE(c_closed(0, kEven, 1e-8) == Approx(0.0).margin(1e-7));
}

TEST_CASE("complementary propagation matches the terminating closed form") {
    CoefficientVector v = propagate_complementary(kEven, 1.2, 200);
    REQUIRE(v.values[0] == c_closed(0, kEven, 1.2));
    REQUIRE(v.values[1] == c_closed(1, kEven, 1.2));
    REQUIRE(v.values[5] == Approx(c_closed(5, kEven, 1.2)).epsilon(1e-10));
    CoefficientVector w = propagate_complementary(kOdd, 1.2, 200);
    REQUIRE(w.values[5] == Approx(c_closed(5, kOdd, 1.2)).epsilon(1e-10));
    for (const CoefficientVector* cv : {&v, &w}) {
        double worst = 0.0;
        for (int n = 0; n <= 200; ++n) {
            double closed = c_closed(n, cv->channel, cv->wavenumber.mu);
            worst = std::max(worst,
                             std::fabs(cv->values[static_cast<std::size_t>(n)] - closed) / std::max(1.0, std::fabs(closed)));
        }
        REQUIRE(worst < 1e-8);
    }
    REQUIRE_THROWS_AS(propagate_complementary(kEven, 1.2, 1), std::invalid_argument);
}

TEST_CASE("inhomogeneous initial relation holds with the growing source factor") {
    for (double mu : {0.5, 1.2, 2.0, 3.0}) {
        double scale_even = std::pow(kPi, -0.25) * std::sqrt(2.0) * mu * std::exp(0.5 * mu * mu);
        double scale_odd = std::pow(kPi, -0.25) * std::exp(0.5 * mu * mu);
        REQUIRE(std::fabs(initial_source_residual(kEven, mu)) < 1e-10 * scale_even);
        REQUIRE(std::fabs(initial_source_residual(kOdd, mu)) < 1e-10 * scale_odd);
    }
    // linear in the channel amplitude
    REQUIRE(initial_source_residual({Parity::even, 2.0}, 1.2) == 2.0 * initial_source_residual(kEven, 1.2));
}

TEST_CASE("tridiagonal wave operator rows") {
    TridiagRow r = jmatrix_row_1d(0, kEven, 1.2);
    REQUIRE(r.sub == 0.0);
    REQUIRE(r.diag == Approx(0.94).epsilon(1e-14));
    REQUIRE(r.sup == Approx(std::sqrt(0.5)).epsilon(1e-14));
    r = jmatrix_row_1d(0, kOdd, 1.2);
    REQUIRE(r.sub == 0.0);
    REQUIRE(r.diag == Approx(-0.06).margin(1e-14));
    REQUIRE(r.sup == Approx(std::sqrt(1.5)).epsilon(1e-14));
    r = jmatrix_row_1d(1, kEven, 0.0);
    REQUIRE(r.diag == Approx(-2.5).epsilon(1e-14));
}

TEST_CASE("projection integrals reproduce the closed coefficients") {
    const double mu = 1.2;
    for (Parity p : {Parity::even, Parity::odd}) {
        for (int n = 0; n <= 4; ++n) {
            int m = p == Parity::even ? 2 * n : 2 * n + 1;
            double norm = std::exp(0.5 * (0.5 * std::log(kPi) + m * std::numbers::ln2 + std::lgamma(m + 1.0)));
            double limit = 14.0 + std::sqrt(2.0 * m + 1.0);
            auto integrand = [&](double y) {
                double trig = p == Parity::even ? std::cos(mu * y) : std::sin(mu * y);
                return trig * hermite_fn(m, y) * norm;
            };
            double got = adaptive_quad(integrand, {-limit, limit, 1e-12, 4000});
            double want = (n % 2 == 0 ? 1.0 : -1.0) * std::sqrt(2.0 * kPi) * hermite_fn(m, mu) * norm;
            REQUIRE(got == Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("wave operator matrix elements are tridiagonal under quadrature") {
    const double mu = 1.2;
    for (Parity p : {Parity::even, Parity::odd}) {
        ParityChannel ch{p, 1.0};
        double limit = 14.0 + std::sqrt(2.0 * 7.0 + 1.0);
        for (int n = 0; n <= 3; ++n) {
            for (int m = 0; m <= 3; ++m) {
                int big_m = p == Parity::even ? 2 * m : 2 * m + 1;
                auto integrand = [&](double y) {
                    return basis_fn_1d(n, ch, y) * (y * y + mu * mu - (2.0 * big_m + 1.0)) * basis_fn_1d(m, ch, y);
                };
                double got = adaptive_quad(integrand, {-limit, limit, 1e-11, 4000});
                TridiagRow row = jmatrix_row_1d(m, ch, mu);
                double want = n == m ? row.diag : (n == m - 1 ? row.sub : (n == m + 1 ? row.sup : 0.0));
                REQUIRE(got == Approx(want).margin(1e-8));
            }
        }
    }
}

TEST_CASE("series evaluation approaches the sinusoids") {
    CoefficientVector fe = propagate_regular(kEven, 1.2, 514);
    REQUIRE(eval_series_1d(fe, 0.0, 0, Accel::partial_sum_average) == Approx(1.0).margin(1e-3));
    REQUIRE(eval_series_1d(fe, 2.0, 0, Accel::partial_sum_average) == Approx(std::cos(2.4)).margin(1e-3));
    CoefficientVector fo = propagate_regular(kOdd, 1.2, 514);
    REQUIRE(eval_series_1d(fo, 2.0, 0, Accel::partial_sum_average) == Approx(std::sin(2.4)).margin(1e-3));
}

TEST_CASE("complementary odd series vanishes at the origin exactly") {
    CoefficientVector g = propagate_complementary(kOdd, 1.2, 64);
    REQUIRE(eval_series_1d(g, 0.0, 0, Accel::partial_sum_average) == 0.0);
    REQUIRE(eval_series_1d(g, 0.0, 0, Accel::none) == 0.0);
}

TEST_CASE("series parity is exact in floating point") {
    CoefficientVector fe = propagate_regular(kEven, 1.2, 80);
    CoefficientVector fo = propagate_regular(kOdd, 1.2, 80);
    for (double y : {0.3, 1.7, 6.2}) {
        REQUIRE(eval_series_1d(fe, y, 0, Accel::partial_sum_average) ==
                eval_series_1d(fe, -y, 0, Accel::partial_sum_average));
        REQUIRE(eval_series_1d(fo, y, 0, Accel::partial_sum_average) ==
                -eval_series_1d(fo, -y, 0, Accel::partial_sum_average));
    }
}

TEST_CASE("series evaluation guards its preconditions") {
    CoefficientVector fe = propagate_regular(kEven, 1.2, 200);
    REQUIRE_THROWS_AS(eval_series_1d(fe, 25.0, 0, Accel::none), std::runtime_error);
    REQUIRE_THROWS_AS(eval_series_1d(fe, 1.0, 201, Accel::none), std::invalid_argument);
    REQUIRE_THROWS_AS(eval_series_1d(fe, 1.0, -1, Accel::none), std::invalid_argument);
}

TEST_CASE("energy ode residual shrinks at second order") {
    REQUIRE(std::fabs(energy_ode_residual_1d(0, CoefficientKind::regular, kEven, 1.2, 1e-3)) < 1e-4);
    REQUIRE(std::fabs(energy_ode_residual_1d(3, CoefficientKind::complementary, kOdd, 1.2, 1e-3)) < 1e-3);
    for (Parity p : {Parity::even, Parity::odd}) {
        for (CoefficientKind kind : {CoefficientKind::regular, CoefficientKind::complementary}) {
            for (int n : {0, 3}) {
                double r1 = energy_ode_residual_1d(n, kind, {p, 1.0}, 1.2, 1e-3);
                double r2 = energy_ode_residual_1d(n, kind, {p, 1.0}, 1.2, 0.5e-3);
                REQUIRE(r2 / r1 == Approx(0.25).margin(0.05));
            }
        }
    }
    REQUIRE_THROWS_AS(energy_ode_residual_1d(0, CoefficientKind::regular, kEven, 1.2, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(energy_ode_residual_1d(0, CoefficientKind::regular, kEven, 0.5, 0.6), std::invalid_argument);
}

TEST_CASE("strictly positive wavenumber is enforced for series construction") {
    REQUIRE_THROWS_AS(propagate_regular(kEven, 0.0, 10), std::invalid_argument);
    REQUIRE_THROWS_AS(propagate_complementary(kEven, -1.0, 10), std::invalid_argument);
    REQUIRE_THROWS_AS(s_closed(0, kEven, -0.5), std::invalid_argument);
}
