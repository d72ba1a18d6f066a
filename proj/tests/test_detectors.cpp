#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcorr/detectors.hpp"

#include <cmath>

using namespace qcorr;

TEST_CASE("sg_spinor shares the eigenbasis functional form")
{
    // The reference analyzer port spinors equal the state spinors bit for bit.
    for (SpinPort port : {SpinPort::up, SpinPort::dn}) {
        const Spinor2 sg = sg_spinor(0.0, port);
        const Spinor2 st = theta_spinor(0.0, port);
        CHECK(sg(0) == st(0));
        CHECK(sg(1) == st(1));
    }
    for (double w : {0.3, 1.2, kPi, 4.7}) {
        CHECK((sg_spinor(w, SpinPort::up) - theta_spinor(w, SpinPort::up)).norm() == 0.0);
        const Mat2 m = sigma_theta(w);
        const Spinor2 up = sg_spinor(w, SpinPort::up);
        CHECK((m * up - 0.5 * up).norm() < 1e-15);
    }
}

TEST_CASE("chirality filter passes matching helicity only")
{
    CHECK(chirality_response(Helicity::left, Helicity::left) == 1.0);
    CHECK(chirality_response(Helicity::right, Helicity::right) == 1.0);
    CHECK(chirality_response(Helicity::left, Helicity::right) == 0.0);
    CHECK(chirality_response(Helicity::right, Helicity::left) == 0.0);
}

TEST_CASE("polarizer covectors: reference along x, partner at omega")
{
    const PolarizerCovectors plus = polarizer_covector(0.7, PolBranch::plus);
    CHECK(std::abs(plus.side_a.x() - 1.0) < 1e-15);
    CHECK(std::abs(plus.side_a.y()) < 1e-15);
    CHECK(std::abs(plus.side_b.x() - std::cos(0.7)) < 1e-15);
    CHECK(std::abs(plus.side_b.y() - std::sin(0.7)) < 1e-15);

    const PolarizerCovectors minus = polarizer_covector(0.7, PolBranch::minus);
    CHECK((plus.side_a + minus.side_a).norm() < 1e-15);
    CHECK((plus.side_b + minus.side_b).norm() < 1e-15);
}

TEST_CASE("polarizer angles canonicalize as lines, not directions")
{
    for (double w : {0.0, 0.4, 1.3, 2.8}) {
        const auto base = polarizer_covector(w, PolBranch::plus);
        const auto shifted = polarizer_covector(w + kPi, PolBranch::plus);
        CHECK((base.side_b - shifted.side_b).norm() < 1e-12);
    }
}

TEST_CASE("orthogonal_line is a quarter-turn rotation")
{
    const LineVec v(std::cos(0.3), std::sin(0.3));
    const LineVec o = orthogonal_line(v);
    CHECK(std::abs(v.dot(o)) < 1e-15);
    CHECK(std::abs(o.norm() - 1.0) < 1e-15);
    // Counterclockwise: x cross o(x) is positive.
    CHECK(v.x() * o.y() - v.y() * o.x() > 0.0);
}

TEST_CASE("detector settings cover one alternative per family")
{
    DetectorSetting sg = SternGerlach{1.0};
    DetectorSetting cf = ChiralityFilter{Helicity::left};
    DetectorSetting lp = LinearPolarizer{0.5};
    DetectorSetting qb = QubitBasis{};
    CHECK(std::holds_alternative<SternGerlach>(sg));
    CHECK(std::holds_alternative<ChiralityFilter>(cf));
    CHECK(std::holds_alternative<LinearPolarizer>(lp));
    CHECK(std::holds_alternative<QubitBasis>(qb));
    CHECK(std::get<SternGerlach>(sg).omega == 1.0);
}
