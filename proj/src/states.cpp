#include "qcorr/states.hpp"

#include <algorithm>
#include <cmath>

namespace qcorr {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Complex phase(double a) { return Complex(std::cos(a), std::sin(a)); }

ParticleKet ket(InternalDof dof, int momentum_sign)
{
    return ParticleKet{std::move(dof), MomentumTag{momentum_sign}};
}

bool angles_close(double a, double b, double tol)
{
    double d = std::abs(wrap_angle(a) - wrap_angle(b));
    return d <= tol || std::abs(d - kTwoPi) <= tol;
}

bool dofs_equal(const InternalDof& x, const InternalDof& y, double tol)
{
    if (x.index() != y.index()) return false;
    if (const auto* h = std::get_if<Helicity>(&x))
        return *h == std::get<Helicity>(y);
    if (const auto* s = std::get_if<SpinThetaDof>(&x)) {
        const auto& t = std::get<SpinThetaDof>(y);
        return s->port == t.port && angles_close(s->theta, t.theta, tol);
    }
    if (const auto* e = std::get_if<EFieldLineDof>(&x)) {
        const auto& t = std::get<EFieldLineDof>(y);
        return e->parity == t.parity && angles_close(e->theta, t.theta, tol);
    }
    return std::get<QubitDof>(x).value == std::get<QubitDof>(y).value;
}

void require_opposite_momenta(const PairTerm& t)
{
    if (t.a.momentum.sign + t.b.momentum.sign != 0 ||
        std::abs(t.a.momentum.sign) != 1)
        throw std::invalid_argument("PairTerm: slots must carry opposite unit momenta");
}

}  // namespace

Spinor2 theta_spinor(double theta, SpinPort port)
{
    if (!std::isfinite(theta)) throw std::invalid_argument("theta_spinor: angle must be finite");
    Spinor2 s;
    if (port == SpinPort::up)
        s << Complex(kInvSqrt2, 0.0), kInvSqrt2 * phase(theta);
    else
        s << -kInvSqrt2 * phase(-theta), Complex(kInvSqrt2, 0.0);
    return s;
}

LineVec line_vector(const EFieldLineDof& dof)
{
    const double a = (dof.parity == LineParity::a) ? dof.theta : dof.theta + kPi;
    return LineVec(std::cos(a), std::sin(a));
}

int chiral_jz(Helicity h, MomentumTag p)
{
    if (std::abs(p.sign) != 1) throw std::invalid_argument("chiral_jz: momentum sign must be +-1");
    return (h == Helicity::right) ? p.sign : -p.sign;
}

PairFamily make_chiral_pair()
{
    auto gen = [](double) {
        return std::vector<PairTerm>{
            {Complex(kInvSqrt2, 0.0), ket(Helicity::left, -1), ket(Helicity::left, +1)},
            {Complex(kInvSqrt2, 0.0), ket(Helicity::right, -1), ket(Helicity::right, +1)},
        };
    };
    return PairFamily(FamilyKind::chiral, ThetaMeasure::none, +1,
                      ConservedTag::jz_total_zero, gen);
}

std::vector<PairTerm> make_spin_pair_at(double theta)
{
    const double t = wrap_angle(theta);
    return {
        {Complex(-kInvSqrt2, 0.0),
         ket(SpinThetaDof{t, SpinPort::up}, +1), ket(SpinThetaDof{t, SpinPort::dn}, -1)},
        {Complex(kInvSqrt2, 0.0),
         ket(SpinThetaDof{t, SpinPort::dn}, +1), ket(SpinThetaDof{t, SpinPort::up}, -1)},
    };
}

PairFamily make_spin_pair()
{
    return PairFamily(FamilyKind::spin_theta, ThetaMeasure::uniform, -1,
                      ConservedTag::jtheta_total_zero,
                      [](double t) { return make_spin_pair_at(t); });
}

std::vector<PairTerm> make_linear_pair_at(double theta)
{
    const double t = wrap_angle(theta);
    return {
        {Complex(kInvSqrt2, 0.0),
         ket(EFieldLineDof{t, LineParity::a}, -1), ket(EFieldLineDof{t, LineParity::b}, +1)},
        {Complex(kInvSqrt2, 0.0),
         ket(EFieldLineDof{t, LineParity::a}, +1), ket(EFieldLineDof{t, LineParity::b}, -1)},
    };
}

PairFamily make_linear_pair()
{
    return PairFamily(FamilyKind::linear_theta, ThetaMeasure::uniform, +1,
                      ConservedTag::e_total_zero,
                      [](double t) { return make_linear_pair_at(t); });
}

PairFamily make_crypto_pair(int relative_sign)
{
    if (relative_sign != 1 && relative_sign != -1)
        throw std::invalid_argument("make_crypto_pair: relative_sign must be +-1");
    auto gen = [relative_sign](double) {
        return std::vector<PairTerm>{
            {Complex(kInvSqrt2, 0.0), ket(QubitDof{0}, -1), ket(QubitDof{0}, +1)},
            {Complex(relative_sign * kInvSqrt2, 0.0), ket(QubitDof{1}, -1), ket(QubitDof{1}, +1)},
        };
    };
    return PairFamily(FamilyKind::crypto, ThetaMeasure::none, +1,
                      ConservedTag::parity_bit, gen);
}

std::vector<PairTerm> exchanged(const std::vector<PairTerm>& terms)
{
    std::vector<PairTerm> out;
    out.reserve(terms.size());
    for (const auto& t : terms) {
        require_opposite_momenta(t);
        PairTerm e = t;
        std::swap(e.a.dof, e.b.dof);
        out.push_back(std::move(e));
    }
    return out;
}

std::optional<int> exchange_eigensign(const std::vector<PairTerm>& terms, double tol)
{
    if (terms.empty()) return std::nullopt;
    const auto swapped = exchanged(terms);

    // Match each swapped term to an original term with the same kets; kets
    // compare by momentum slot, so term order and slot presentation are
    // immaterial.
    auto same_kets = [&](const PairTerm& x, const PairTerm& y) {
        return dofs_equal(x.at_momentum(-1).dof, y.at_momentum(-1).dof, tol) &&
               dofs_equal(x.at_momentum(+1).dof, y.at_momentum(+1).dof, tol);
    };

    std::optional<int> sign;
    std::vector<bool> used(terms.size(), false);
    for (const auto& s : swapped) {
        bool matched = false;
        for (std::size_t j = 0; j < terms.size(); ++j) {
            if (used[j] || !same_kets(s, terms[j])) continue;
            const Complex ratio = s.coeff / terms[j].coeff;
            int r;
            if (std::abs(ratio - 1.0) <= tol) r = +1;
            else if (std::abs(ratio + 1.0) <= tol) r = -1;
            else return std::nullopt;
            if (sign && *sign != r) return std::nullopt;
            sign = r;
            used[j] = true;
            matched = true;
            break;
        }
        if (!matched) return std::nullopt;
    }
    return sign;
}

double norm(const PairFamily& family)
{
    return norm(family, default_rule());
}

double norm(const PairFamily& family, const QuadratureRule& rule)
{
    auto weight_at = [&](double theta) {
        double w = 0.0;
        const auto terms = family.terms_at(theta);
        if (terms.empty()) throw std::invalid_argument("norm: family has no terms");
        for (const auto& t : terms) {
            require_opposite_momenta(t);
            w += std::norm(t.coeff);
        }
        return w;
    };
    if (family.theta_measure() == ThetaMeasure::none) return weight_at(0.0);
    return integrate_periodic(weight_at, rule) / kTwoPi;
}

}  // namespace qcorr
