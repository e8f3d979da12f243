#include <doctest.h>

#include <random>

#include "mplc/field.hpp"
#include "mplc/modes.hpp"
#include "test_support.hpp"

using namespace mplc;
using testsup::small_grid;

TEST_SUITE("field") {

TEST_CASE("grid invariants are enforced") {
    CHECK_THROWS_AS(GridSpec(1, 4, 1e-6, 808e-9), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(4, 5, 1e-6, 808e-9), std::invalid_argument);  // odd ny
    CHECK_THROWS_AS(GridSpec(4, 4, 0.0, 808e-9), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(4, 4, 1e-6, -1.0), std::invalid_argument);
    const GridSpec g(8, 6, 1e-6, 808e-9);
    CHECK(g.x_at(4) == 0.0);
    CHECK(g.y_at(3) == 0.0);
}

TEST_CASE("inner product of a unit Gaussian with itself is 1") {
    const auto grid = small_grid();
    const auto g = gaussian_mode(grid, 0.94e-3);
    const Complex s = inner_product(g, g);
    CHECK(std::abs(s.real() - 1.0) < 1e-12);
    CHECK(std::abs(s.imag()) < 1e-14);
}

TEST_CASE("distinct-l LG modes are orthogonal") {
    const auto grid = small_grid();
    const auto a = lg_mode(ModeSpec{ModeFamily::LG, 0, 0, 0.94e-3}, grid);
    const auto b = lg_mode(ModeSpec{ModeFamily::LG, 1, 0, 0.94e-3}, grid);
    CHECK(std::abs(inner_product(a, b)) < 1e-10);
}

TEST_CASE("displaced-Gaussian inner product matches a quadrature oracle") {
    const auto grid = small_grid(128, 64e-6);
    const double w = 0.94e-3;
    const double d = w;  // displacement equal to the waist

    std::vector<Complex> amp0(grid.samples()), amp1(grid.samples());
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x_at(ix), y = grid.y_at(iy);
            amp0[static_cast<std::size_t>(iy) * grid.nx + ix] = testsup::gaussian_amp(x, y, w);
            amp1[static_cast<std::size_t>(iy) * grid.nx + ix] = testsup::gaussian_amp(x, y, w, d);
        }
    const ComplexField f0(grid, std::move(amp0)), f1(grid, std::move(amp1));

    const Complex oracle = testsup::quadrature_overlap(
        grid, [&](double x, double y) { return Complex(testsup::gaussian_amp(x, y, w), 0.0); },
        [&](double x, double y) { return Complex(testsup::gaussian_amp(x, y, w, d), 0.0); }, 4);
    const Complex measured = inner_product(f0, f1);
    CHECK(std::abs(measured - oracle) < 1e-9);
    // analytic value for the same overlap: exp(-d^2 / (2 w^2))
    CHECK(measured.real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-6));
}

TEST_CASE("inner product is conjugate-symmetric") {
    const auto grid = small_grid(64);
    const auto a = testsup::random_field(grid, 11);
    const auto b = testsup::random_field(grid, 12);
    const Complex ab = inner_product(a, b);
    const Complex ba = inner_product(b, a);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-12 * std::abs(ab));
}

TEST_CASE("inner product rejects grid mismatch") {
    const auto a = ComplexField(small_grid(64));
    const auto b = ComplexField(small_grid(128));
    CHECK_THROWS_AS((void)inner_product(a, b), DimensionError);
}

TEST_CASE("power basics") {
    const auto grid = small_grid();
    CHECK(power(ComplexField(grid)) == 0.0);
    const auto m = lg_mode(ModeSpec{ModeFamily::LG, 1, 1, 0.94e-3}, grid);
    CHECK(power(m) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(power(scaled(m, Complex{2.0, 0.0})) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("normalize") {
    const auto grid = small_grid();
    const auto g = gaussian_mode(grid, 0.94e-3);

    SUBCASE("already-unit field is unchanged") {
        const auto n = normalize(g);
        double max_diff = 0.0;
        for (std::size_t i = 0; i < n.size(); ++i)
            max_diff = std::max(max_diff, std::abs(n.amplitude()[i] - g.amplitude()[i]));
        CHECK(max_diff < 1e-12);
    }
    SUBCASE("scaling is removed") {
        const auto n = normalize(scaled(g, Complex{3.0, 0.0}));
        CHECK(std::abs(inner_product(n, g) - 1.0) < 1e-12);
    }
    SUBCASE("random field normalizes to unit power") {
        const auto n = normalize(testsup::random_field(grid, 5));
        CHECK(power(n) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("zero field is degenerate") {
        CHECK_THROWS_AS(normalize(ComplexField(grid)), DegenerateFieldError);
    }
}

TEST_CASE("apply_phase") {
    const auto grid = small_grid();
    const auto g = gaussian_mode(grid, 0.94e-3);

    SUBCASE("zero mask is the identity") {
        const auto out = apply_phase(g, PhaseMask(grid));
        for (std::size_t i = 0; i < out.size(); i += 997)
            CHECK(out.amplitude()[i] == g.amplitude()[i]);
    }
    SUBCASE("constant pi mask negates the field") {
        PhaseMask pi_mask(grid, std::vector<double>(grid.samples(), M_PI));
        const auto out = apply_phase(g, pi_mask);
        CHECK(std::abs(inner_product(g, out) + 1.0) < 1e-12);
    }
    SUBCASE("modulus is unchanged and power conserved for any mask") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-10.0, 10.0);
        std::vector<double> phase(grid.samples());
        for (double& p : phase) p = u(rng);
        const auto f = testsup::random_field(grid, 19);
        const auto out = apply_phase(f, PhaseMask(grid, std::move(phase)));
        double max_mod_diff = 0.0;
        for (std::size_t i = 0; i < out.size(); i += 331)
            max_mod_diff = std::max(max_mod_diff,
                                    std::abs(std::abs(out.amplitude()[i]) - std::abs(f.amplitude()[i])));
        CHECK(max_mod_diff < 1e-13);
        CHECK(power(out) == doctest::Approx(power(f)).epsilon(1e-12));
    }
    SUBCASE("grid mismatch is rejected") {
        CHECK_THROWS_AS(apply_phase(g, PhaseMask(small_grid(64))), DimensionError);
    }
}

TEST_CASE("phase mask values are wrapped into [-pi, pi)") {
    const GridSpec g(4, 4, 1e-6, 808e-9);
    std::vector<double> raw(16, 0.0);
    raw[0] = 3.0 * M_PI;   // -> -pi
    raw[1] = -3.0 * M_PI;  // -> -pi
    raw[2] = M_PI;         // -> -pi (half-open interval)
    raw[3] = 0.5;
    const PhaseMask m(g, raw);
    CHECK(m.phase()[0] == doctest::Approx(-M_PI));
    CHECK(m.phase()[1] == doctest::Approx(-M_PI));
    CHECK(m.phase()[2] == doctest::Approx(-M_PI));
    CHECK(m.phase()[3] == doctest::Approx(0.5));
    for (double p : m.phase()) {
        CHECK(p >= -M_PI);
        CHECK(p < M_PI);
    }
}

TEST_CASE("Cauchy-Schwarz holds for random fields") {
    const auto grid = small_grid(64);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = testsup::random_field(grid, 100 + seed);
        const auto b = testsup::random_field(grid, 200 + seed);
        const double lhs = std::norm(inner_product(a, b));
        const double rhs = power(a) * power(b);
        CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
}

TEST_CASE("inner product is antilinear left, linear right") {
    const auto grid = small_grid(64);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = testsup::random_field(grid, 300 + trial);
        const auto b = testsup::random_field(grid, 400 + trial);
        const Complex alpha(u(rng), u(rng));
        const Complex base = inner_product(a, b);
        const Complex right = inner_product(a, scaled(b, alpha));
        const Complex left = inner_product(scaled(a, alpha), b);
        CHECK(std::abs(right - alpha * base) < 1e-10);
        CHECK(std::abs(left - std::conj(alpha) * base) < 1e-10);
    }
}

TEST_CASE("second-moment width of a Gaussian is its waist") {
    const auto grid = small_grid();
    const double w = 0.94e-3;
    CHECK(second_moment_width(gaussian_mode(grid, w)) == doctest::Approx(w).epsilon(1e-6));
}

}  // TEST_SUITE
