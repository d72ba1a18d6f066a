#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcorr/qmath.hpp"

#include <cmath>
#include <limits>

using namespace qcorr;

TEST_CASE("wrap_angle maps into [0, 2pi) and preserves the angle mod 2pi")
{
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(kTwoPi) == 0.0);
    CHECK(std::abs(wrap_angle(-kPi / 2) - 3 * kPi / 2) < 1e-15);
    CHECK(std::abs(wrap_angle(7 * kPi) - kPi) < 1e-12);

    for (double a : {-1234.5, -6.29, -1.0, -1e-12, 0.1, 6.28, 6.30, 9876.5}) {
        const double w = wrap_angle(a);
        CHECK(w >= 0.0);
        CHECK(w < kTwoPi);
        CHECK(std::abs(std::remainder(w - a, kTwoPi)) < 1e-8);
    }
}

TEST_CASE("wrap_angle rejects non-finite input")
{
    CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
    CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(wrap_angle(-std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("wrap_line_angle identifies antipodal orientations")
{
    CHECK(wrap_line_angle(kPi) == 0.0);
    CHECK(std::abs(wrap_line_angle(3 * kPi / 2) - kPi / 2) < 1e-15);
    for (double a : {-3.0, 0.2, 1.0, 2.9, 4.0, 7.0}) {
        const double w = wrap_line_angle(a);
        CHECK(w >= 0.0);
        CHECK(w < kPi);
        CHECK(std::abs(wrap_line_angle(a + kPi) - w) < 1e-12);
    }
}

TEST_CASE("inner conjugates its first argument")
{
    Spinor2 x, y;
    x << Complex(1.0, 2.0), Complex(0.0, -1.0);
    y << Complex(0.5, 0.0), Complex(3.0, 1.0);

    const Complex xy = inner(x, y);
    const Complex yx = inner(y, x);
    CHECK(std::abs(xy - std::conj(yx)) < 1e-15);

    // <x|x> is the real squared norm.
    const Complex xx = inner(x, x);
    CHECK(xx.imag() == 0.0);
    CHECK(std::abs(xx.real() - x.squaredNorm()) < 1e-15);

    // Conjugate-linear in the bra: <i*x|y> = -i <x|y>.
    const Complex ix_y = inner(Spinor2(Complex(0, 1) * x), y);
    CHECK(std::abs(ix_y - Complex(0, -1) * xy) < 1e-15);
}

TEST_CASE("sigma_theta is a traceless hermitian involution up to scale")
{
    for (double t : {0.0, 0.3, kPi / 2, 2.0, kPi, 5.5}) {
        const Mat2 m = sigma_theta(t);
        CHECK((m - m.adjoint()).norm() < 1e-15);
        CHECK(std::abs(m.trace()) < 1e-15);
        // (sigma_theta)^2 = I/4, so the eigenvalues are +-1/2.
        CHECK((m * m - 0.25 * Mat2::Identity()).norm() < 1e-15);
    }
    CHECK_THROWS_AS(sigma_theta(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("uniform quadrature integrates low harmonics exactly")
{
    const auto rule = QuadratureRule::uniform(64);
    CHECK(rule.node_count() == 64);
    CHECK(std::abs(rule.weight() * rule.node_count() - kTwoPi) < 1e-14);

    const double const_one = integrate_periodic([](double) { return 1.0; }, rule);
    CHECK(std::abs(const_one - kTwoPi) < 1e-12);

    for (int k : {1, 2, 3, 7, 31}) {
        const double c = integrate_periodic([k](double t) { return std::cos(k * t); }, rule);
        const double s = integrate_periodic([k](double t) { return std::sin(k * t); }, rule);
        CHECK(std::abs(c) < 1e-12);
        CHECK(std::abs(s) < 1e-12);
    }

    const double cos_sq = integrate_periodic([](double t) { return std::cos(t) * std::cos(t); }, rule);
    CHECK(std::abs(cos_sq - kPi) < 1e-12);
}

TEST_CASE("integrate_periodic handles complex integrands")
{
    const auto rule = QuadratureRule::uniform(32);
    const Complex z = integrate_periodic(
        [](double t) { return Complex(std::cos(t), std::sin(t)); }, rule);
    CHECK(std::abs(z) < 1e-12);
}

TEST_CASE("quadrature rule rejects non-positive node counts")
{
    CHECK_THROWS_AS(QuadratureRule::uniform(0), std::invalid_argument);
    CHECK_THROWS_AS(QuadratureRule::uniform(-5), std::invalid_argument);
    CHECK(default_rule().node_count() == 256);
}
