#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcorr/states.hpp"

#include <cmath>

using namespace qcorr;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<double> theta_grid(int n)
{
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(kTwoPi * i / n);
    return g;
}
}  // namespace

TEST_CASE("theta_spinor reference values at theta = 0")
{
    const Spinor2 up = theta_spinor(0.0, SpinPort::up);
    CHECK(up(0) == Complex(kInvSqrt2, 0.0));
    CHECK(up(1) == Complex(kInvSqrt2, 0.0));

    const Spinor2 dn = theta_spinor(0.0, SpinPort::dn);
    CHECK(dn(0) == Complex(-kInvSqrt2, 0.0));
    CHECK(dn(1) == Complex(kInvSqrt2, 0.0));
}

TEST_CASE("theta_spinor ports are the sigma_theta eigenbasis")
{
    for (double t : theta_grid(24)) {
        const Spinor2 up = theta_spinor(t, SpinPort::up);
        const Spinor2 dn = theta_spinor(t, SpinPort::dn);

        CHECK(std::abs(up.norm() - 1.0) < 1e-15);
        CHECK(std::abs(dn.norm() - 1.0) < 1e-15);
        CHECK(std::abs(inner(up, dn)) < 1e-15);

        const Mat2 m = sigma_theta(t);
        CHECK((m * up - 0.5 * up).norm() < 1e-15);
        CHECK((m * dn - (-0.5) * dn).norm() < 1e-15);

        // Completeness: the two port projectors resolve the identity.
        const Mat2 sum = up * up.adjoint() + dn * dn.adjoint();
        CHECK((sum - Mat2::Identity()).norm() < 1e-14);
    }
    CHECK_THROWS_AS(theta_spinor(std::nan(""), SpinPort::up), std::invalid_argument);
}

TEST_CASE("line_vector realizes the two anti-aligned orientations")
{
    for (double t : theta_grid(17)) {
        const LineVec va = line_vector(EFieldLineDof{t, LineParity::a});
        const LineVec vb = line_vector(EFieldLineDof{t, LineParity::b});
        CHECK(std::abs(va.norm() - 1.0) < 1e-15);
        CHECK((va + vb).norm() < 1e-14);  // parity b is parity a rotated by pi
        CHECK(std::abs(va.x() - std::cos(t)) < 1e-15);
        CHECK(std::abs(va.y() - std::sin(t)) < 1e-15);
    }
}

TEST_CASE("chiral_jz carries +-1 along the flight axis")
{
    CHECK(chiral_jz(Helicity::right, MomentumTag{+1}) == +1);
    CHECK(chiral_jz(Helicity::right, MomentumTag{-1}) == -1);
    CHECK(chiral_jz(Helicity::left, MomentumTag{+1}) == -1);
    CHECK(chiral_jz(Helicity::left, MomentumTag{-1}) == +1);
    CHECK_THROWS_AS(chiral_jz(Helicity::left, MomentumTag{0}), std::invalid_argument);
    CHECK_THROWS_AS(chiral_jz(Helicity::left, MomentumTag{2}), std::invalid_argument);
}

TEST_CASE("chiral pair: equal-helicity terms, net angular momentum zero")
{
    const PairFamily fam = make_chiral_pair();
    CHECK(fam.kind() == FamilyKind::chiral);
    CHECK(fam.theta_measure() == ThetaMeasure::none);
    CHECK(fam.conserved() == ConservedTag::jz_total_zero);

    const auto terms = fam.terms_at(0.0);
    REQUIRE(terms.size() == 2);
    for (const auto& term : terms) {
        CHECK(std::abs(term.coeff - Complex(kInvSqrt2, 0.0)) < 1e-15);
        CHECK(term.a.momentum.sign + term.b.momentum.sign == 0);
        const auto ha = std::get<Helicity>(term.a.dof);
        const auto hb = std::get<Helicity>(term.b.dof);
        CHECK(ha == hb);
        CHECK(chiral_jz(ha, term.a.momentum) + chiral_jz(hb, term.b.momentum) == 0);
    }
    CHECK(std::get<Helicity>(terms[0].a.dof) != std::get<Helicity>(terms[1].a.dof));
}

TEST_CASE("spin pair terms: opposite ports with the documented signs")
{
    for (double t : {0.0, 0.7, kPi, 5.0}) {
        const auto terms = make_spin_pair_at(t);
        REQUIRE(terms.size() == 2);

        const auto& plus_up = terms[0].at_momentum(+1);
        const auto& minus_dn = terms[0].at_momentum(-1);
        CHECK(std::get<SpinThetaDof>(plus_up.dof).port == SpinPort::up);
        CHECK(std::get<SpinThetaDof>(minus_dn.dof).port == SpinPort::dn);
        CHECK(std::abs(terms[0].coeff - Complex(-kInvSqrt2, 0.0)) < 1e-15);

        const auto& plus_dn = terms[1].at_momentum(+1);
        CHECK(std::get<SpinThetaDof>(plus_dn.dof).port == SpinPort::dn);
        CHECK(std::abs(terms[1].coeff - Complex(kInvSqrt2, 0.0)) < 1e-15);

        // Both kets of a term share the orientation angle.
        CHECK(std::get<SpinThetaDof>(plus_up.dof).theta ==
              std::get<SpinThetaDof>(minus_dn.dof).theta);
    }

    // The generator wraps angles, so shifted orientations agree.
    const auto t1 = make_spin_pair_at(1.0);
    const auto t2 = make_spin_pair_at(1.0 + kTwoPi);
    CHECK(std::get<SpinThetaDof>(t1[0].a.dof).theta ==
          doctest::Approx(std::get<SpinThetaDof>(t2[0].a.dof).theta).epsilon(1e-12));
}

TEST_CASE("linear pair terms: anti-aligned fields on both momentum assignments")
{
    const auto terms = make_linear_pair_at(0.4);
    REQUIRE(terms.size() == 2);
    int minus_p_parity_a = 0;
    for (const auto& term : terms) {
        CHECK(std::abs(term.coeff - Complex(kInvSqrt2, 0.0)) < 1e-15);
        const auto& da = std::get<EFieldLineDof>(term.a.dof);
        const auto& db = std::get<EFieldLineDof>(term.b.dof);
        CHECK(da.parity != db.parity);
        CHECK(da.theta == db.theta);
        // Net transverse field of each term vanishes.
        CHECK((line_vector(da) + line_vector(db)).norm() < 1e-14);
        if (std::get<EFieldLineDof>(term.at_momentum(-1).dof).parity == LineParity::a)
            ++minus_p_parity_a;
    }
    // The superposition covers both ways of attaching the fields to momenta.
    CHECK(minus_p_parity_a == 1);
}

TEST_CASE("crypto pair encodes the conserved relative sign")
{
    for (int sign : {+1, -1}) {
        const PairFamily fam = make_crypto_pair(sign);
        const auto terms = fam.terms_at(0.0);
        REQUIRE(terms.size() == 2);
        CHECK(std::get<QubitDof>(terms[0].a.dof).value == std::get<QubitDof>(terms[0].b.dof).value);
        CHECK(std::get<QubitDof>(terms[1].a.dof).value == std::get<QubitDof>(terms[1].b.dof).value);
        CHECK(std::abs(terms[1].coeff - Complex(sign * kInvSqrt2, 0.0)) < 1e-15);
    }
    CHECK_THROWS_AS(make_crypto_pair(0), std::invalid_argument);
    CHECK_THROWS_AS(make_crypto_pair(2), std::invalid_argument);
}

TEST_CASE("exchanged swaps internal dofs but leaves momenta in place")
{
    const auto terms = make_spin_pair_at(0.3);
    const auto swapped = exchanged(terms);
    REQUIRE(swapped.size() == terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        CHECK(swapped[i].a.momentum.sign == terms[i].a.momentum.sign);
        CHECK(swapped[i].b.momentum.sign == terms[i].b.momentum.sign);
        CHECK(std::get<SpinThetaDof>(swapped[i].a.dof).port ==
              std::get<SpinThetaDof>(terms[i].b.dof).port);
        CHECK(std::get<SpinThetaDof>(swapped[i].b.dof).port ==
              std::get<SpinThetaDof>(terms[i].a.dof).port);
    }
    // Involution.
    const auto twice = exchanged(swapped);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        CHECK(std::get<SpinThetaDof>(twice[i].a.dof).port ==
              std::get<SpinThetaDof>(terms[i].a.dof).port);
        CHECK(twice[i].coeff == terms[i].coeff);
    }
}

TEST_CASE("exchange eigensigns: one fermionic family among bosonic ones")
{
    for (double t : theta_grid(16)) {
        CHECK(exchange_eigensign(make_chiral_pair().terms_at(t)) == +1);
        CHECK(exchange_eigensign(make_spin_pair_at(t)) == -1);
        CHECK(exchange_eigensign(make_linear_pair_at(t)) == +1);
        CHECK(exchange_eigensign(make_crypto_pair(+1).terms_at(t)) == +1);
        CHECK(exchange_eigensign(make_crypto_pair(-1).terms_at(t)) == +1);
    }
    CHECK(make_chiral_pair().exchange_sign() == +1);
    CHECK(make_spin_pair().exchange_sign() == -1);
    CHECK(make_linear_pair().exchange_sign() == +1);
    CHECK(make_crypto_pair(+1).exchange_sign() == +1);
    CHECK(make_crypto_pair(-1).exchange_sign() == +1);
}

TEST_CASE("exchange_eigensign rejects non-eigenstates")
{
    // A single cross-port term maps to a different ket list under exchange.
    std::vector<PairTerm> lone{{Complex(1.0, 0.0),
                                ParticleKet{SpinThetaDof{0.0, SpinPort::up}, MomentumTag{+1}},
                                ParticleKet{SpinThetaDof{0.0, SpinPort::dn}, MomentumTag{-1}}}};
    CHECK(!exchange_eigensign(lone).has_value());
    CHECK(!exchange_eigensign({}).has_value());

    // Unequal magnitudes break the eigenvalue relation even with matching kets.
    auto skewed = make_spin_pair_at(0.0);
    skewed[0].coeff *= 2.0;
    CHECK(!exchange_eigensign(skewed).has_value());
}

TEST_CASE("every stock family is normalized")
{
    const auto rule = QuadratureRule::uniform(128);
    CHECK(std::abs(norm(make_chiral_pair(), rule) - 1.0) < 1e-12);
    CHECK(std::abs(norm(make_spin_pair(), rule) - 1.0) < 1e-12);
    CHECK(std::abs(norm(make_linear_pair(), rule) - 1.0) < 1e-12);
    CHECK(std::abs(norm(make_crypto_pair(+1), rule) - 1.0) < 1e-12);
    CHECK(std::abs(norm(make_crypto_pair(-1), rule) - 1.0) < 1e-12);

    PairFamily empty(FamilyKind::crypto, ThetaMeasure::none, +1, ConservedTag::parity_bit,
                     [](double) { return std::vector<PairTerm>{}; });
    CHECK_THROWS_AS(norm(empty), std::invalid_argument);
}
