#include "qcorr/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcorr {

namespace {

const Spinor2& dof_spinor(const InternalDof& dof, Spinor2& scratch)
{
    const auto& s = std::get<SpinThetaDof>(dof);
    scratch = theta_spinor(s.theta, s.port);
    return scratch;
}

double sign_of(double x) { return x >= 0.0 ? 1.0 : -1.0; }

}  // namespace

Complex amplitude_spin(double theta, SpinPort port_a, double omega, SpinPort port_b)
{
    const Spinor2 bra_a = sg_spinor(0.0, port_a);     // reads the -p ket
    const Spinor2 bra_b = sg_spinor(omega, port_b);   // reads the +p ket
    Complex amp(0.0, 0.0);
    Spinor2 scratch;
    for (const auto& term : make_spin_pair_at(theta)) {
        const Complex fa = inner(bra_a, dof_spinor(term.at_momentum(-1).dof, scratch));
        const Complex fb = inner(bra_b, dof_spinor(term.at_momentum(+1).dof, scratch));
        amp += term.coeff * fa * fb;
    }
    return amp;
}

JointDistribution joint_distribution_spin(double omega)
{
    JointDistribution d;
    d.omega = omega;
    d.family = FamilyKind::spin_theta;
    d.p_updn = std::norm(amplitude_spin(0.0, SpinPort::up, omega, SpinPort::dn));
    d.p_dnup = std::norm(amplitude_spin(0.0, SpinPort::dn, omega, SpinPort::up));
    d.p_upup = std::norm(amplitude_spin(0.0, SpinPort::up, omega, SpinPort::up));
    d.p_dndn = std::norm(amplitude_spin(0.0, SpinPort::dn, omega, SpinPort::dn));
    return d;
}

JointDistribution joint_distribution_spin_averaged(double omega, const QuadratureRule& rule)
{
    auto cell = [&](SpinPort pa, SpinPort pb) {
        auto f = [&](double theta) {
            return std::norm(amplitude_spin(theta, pa, omega, pb));
        };
        return integrate_periodic(f, rule) / kTwoPi;
    };
    JointDistribution d;
    d.omega = omega;
    d.family = FamilyKind::spin_theta;
    d.p_updn = cell(SpinPort::up, SpinPort::dn);
    d.p_dnup = cell(SpinPort::dn, SpinPort::up);
    d.p_upup = cell(SpinPort::up, SpinPort::up);
    d.p_dndn = cell(SpinPort::dn, SpinPort::dn);
    return d;
}

namespace {

// Raw (unnormalized) pass/block weights of the linear pipeline for one sign
// branch, theta-averaged with the 1/(4*pi) measure.  The four weights sum
// to 1 per branch analytically (the two branches double the total to 2),
// and the final distribution divides by exactly that sum.
struct LinearRaw {
    double w_pp = 0.0, w_pb = 0.0, w_bp = 0.0, w_bb = 0.0;
    double total() const { return w_pp + w_pb + w_bp + w_bb; }
};

LinearRaw linear_branch_raw(double omega, PolBranch branch, const QuadratureRule& rule)
{
    const PolarizerCovectors pass = polarizer_covector(omega, branch);
    const LineVec block_a = orthogonal_line(pass.side_a);
    const LineVec block_b = orthogonal_line(pass.side_b);

    auto cell = [&](const LineVec& cov_a, const LineVec& cov_b) {
        auto f = [&](double theta) {
            double amp = 0.0;
            for (const auto& term : make_linear_pair_at(theta)) {
                const double fa =
                    cov_a.dot(line_vector(std::get<EFieldLineDof>(term.at_momentum(-1).dof)));
                const double fb =
                    cov_b.dot(line_vector(std::get<EFieldLineDof>(term.at_momentum(+1).dof)));
                amp += term.coeff.real() * fa * fb;
            }
            return amp * amp;
        };
        return integrate_periodic(f, rule) / (2.0 * kTwoPi);
    };

    LinearRaw r;
    r.w_pp = cell(pass.side_a, pass.side_b);
    r.w_pb = cell(pass.side_a, block_b);
    r.w_bp = cell(block_a, pass.side_b);
    r.w_bb = cell(block_a, block_b);
    return r;
}

}  // namespace

JointDistribution joint_distribution_linear(double omega)
{
    return joint_distribution_linear(omega, default_rule());
}

LinearBranchTotals linear_branch_totals(double omega, const QuadratureRule& rule)
{
    LinearBranchTotals t;
    t.plus = linear_branch_raw(omega, PolBranch::plus, rule).total();
    t.minus = linear_branch_raw(omega, PolBranch::minus, rule).total();
    return t;
}

JointDistribution joint_distribution_linear(double omega, const QuadratureRule& rule)
{
    LinearRaw sum;
    for (PolBranch br : enumerate_branches()) {
        const LinearRaw r = linear_branch_raw(omega, br, rule);
        sum.w_pp += r.w_pp;
        sum.w_pb += r.w_pb;
        sum.w_bp += r.w_bp;
        sum.w_bb += r.w_bb;
    }
    const double total = sum.total();
    if (!(total > 0.0))
        throw std::logic_error("joint_distribution_linear: degenerate weight sum");
    JointDistribution d;
    d.omega = omega;
    d.family = FamilyKind::linear_theta;
    d.p_upup = sum.w_pp / total;
    d.p_updn = sum.w_pb / total;
    d.p_dnup = sum.w_bp / total;
    d.p_dndn = sum.w_bb / total;
    return d;
}

JointDistribution joint_distribution_linear_closed(double omega)
{
    const double c = std::cos(2.0 * omega);
    JointDistribution d;
    d.omega = omega;
    d.family = FamilyKind::linear_theta;
    d.p_upup = (2.0 + c) / 8.0;
    d.p_dndn = (2.0 + c) / 8.0;
    d.p_updn = (2.0 - c) / 8.0;
    d.p_dnup = (2.0 - c) / 8.0;
    return d;
}

JointDistribution joint_distribution_chiral(Helicity filter_a, Helicity filter_b)
{
    // The pair is LL or RR with equal weight; each photon passes iff its
    // helicity matches the local filter.  Weights are normalized by their
    // sum so matched filters give exactly 1/2.
    const auto terms = make_chiral_pair().terms_at(0.0);
    double total = 0.0;
    JointDistribution d;
    d.family = FamilyKind::chiral;
    for (const auto& term : terms) {
        const double w = std::norm(term.coeff);
        total += w;
        const double ra =
            chirality_response(filter_a, std::get<Helicity>(term.at_momentum(-1).dof));
        const double rb =
            chirality_response(filter_b, std::get<Helicity>(term.at_momentum(+1).dof));
        d.p_upup += w * ra * rb;
        d.p_updn += w * ra * (1.0 - rb);
        d.p_dnup += w * (1.0 - ra) * rb;
        d.p_dndn += w * (1.0 - ra) * (1.0 - rb);
    }
    d.p_upup /= total;
    d.p_updn /= total;
    d.p_dnup /= total;
    d.p_dndn /= total;
    return d;
}

double coincidence_chiral(Helicity filter_a, Helicity filter_b)
{
    return joint_distribution_chiral(filter_a, filter_b).p_upup;
}

JointDistribution joint_distribution_crypto()
{
    const auto terms = make_crypto_pair(+1).terms_at(0.0);
    double total = 0.0;
    JointDistribution d;
    d.family = FamilyKind::crypto;
    for (const auto& term : terms) {
        const double w = std::norm(term.coeff);
        total += w;
        const int bit = std::get<QubitDof>(term.at_momentum(-1).dof).value;
        (bit == 0 ? d.p_upup : d.p_dndn) += w;
    }
    d.p_upup /= total;
    d.p_dndn /= total;
    return d;
}

double correlation_E(double omega, FamilyKind family)
{
    if (family != FamilyKind::spin_theta)
        throw std::invalid_argument("correlation_E: only the spin family has a tunable two-sided correlation");
    const JointDistribution d = joint_distribution_spin(omega);
    return kOutcomeProductSign * (d.p_same() - d.p_opposite());
}

double lhv_correlation(const LhvModel& model, double omega)
{
    if (model.strategy != LhvModel::Strategy::sign_threshold)
        throw std::invalid_argument("lhv_correlation: unknown strategy");
    const double w = wrap_angle(omega);

    // sign(cos(theta)) flips at pi/2 and 3*pi/2; sign(cos(theta - w)) flips
    // at w + pi/2 and w + 3*pi/2.  Between breakpoints the product is
    // constant, so summing midpoint-value * length integrates it exactly.
    std::vector<double> cuts = {wrap_angle(kPi / 2), wrap_angle(3 * kPi / 2),
                                wrap_angle(w + kPi / 2), wrap_angle(w + 3 * kPi / 2)};
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-14; }),
               cuts.end());

    double acc = 0.0;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + kTwoPi;
        const double mid = 0.5 * (lo + hi);
        acc += sign_of(std::cos(mid)) * sign_of(std::cos(mid - w)) * (hi - lo);
    }
    return acc / kTwoPi;
}

namespace {

ChshResult chsh_from(double a, double a_prime, double b, double b_prime,
                     const std::function<double(double)>& corr)
{
    ChshResult r;
    r.a = a;
    r.a_prime = a_prime;
    r.b = b;
    r.b_prime = b_prime;
    r.e_ab = corr(b - a);
    r.e_ab_prime = corr(b_prime - a);
    r.e_a_prime_b = corr(b - a_prime);
    r.e_a_prime_b_prime = corr(b_prime - a_prime);
    r.s_value = chsh_s_from(r.e_ab, r.e_ab_prime, r.e_a_prime_b, r.e_a_prime_b_prime);
    return r;
}

}  // namespace

ChshResult chsh(double a, double a_prime, double b, double b_prime)
{
    return chsh_from(a, a_prime, b, b_prime,
                     [](double w) { return correlation_E(w); });
}

ChshResult chsh(double a, double a_prime, double b, double b_prime, const LhvModel& model)
{
    return chsh_from(a, a_prime, b, b_prime,
                     [&](double w) { return lhv_correlation(model, w); });
}

double marginal(double omega, Side side, FamilyKind family)
{
    JointDistribution d;
    switch (family) {
    case FamilyKind::spin_theta:
        d = joint_distribution_spin(omega);
        break;
    case FamilyKind::linear_theta:
        d = joint_distribution_linear_closed(omega);
        break;
    case FamilyKind::chiral:
        d = joint_distribution_chiral(Helicity::left, Helicity::left);
        break;
    case FamilyKind::crypto:
        d = joint_distribution_crypto();
        break;
    }
    return side == Side::A ? d.marginal_a_up() : d.marginal_b_up();
}

}  // namespace qcorr
