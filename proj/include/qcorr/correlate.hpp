#pragma once

// Joint amplitudes and probabilities for each pair family, the correlation
// function, a CHSH harness, and a deterministic local-hidden-variable
// baseline.
//
// Outcome sign convention (used everywhere downstream): "up"/"pass"/bit-0
// maps to +1 and "dn"/"block"/bit-1 to -1, and correlation_E reports
// <s_A * (-s_B)> so aligned analyzers give E = +1 for the anticorrelated
// spin pair.  kOutcomeProductSign below is that single convention constant.

#include "qcorr/detectors.hpp"
#include "qcorr/qmath.hpp"
#include "qcorr/states.hpp"

#include <array>

namespace qcorr {

inline constexpr double kOutcomeProductSign = -1.0;

// Probabilities of the four paired outcomes at relative analyzer angle
// omega.  Labels read (side A, side B) with up = +1; for polarizers and
// filters, up means pass and dn means block; for qubits, up means bit 0.
struct JointDistribution {
    double p_updn = 0.0;
    double p_dnup = 0.0;
    double p_upup = 0.0;
    double p_dndn = 0.0;
    double omega = 0.0;
    FamilyKind family = FamilyKind::spin_theta;

    double p_opposite() const { return p_updn + p_dnup; }
    double p_same() const { return p_upup + p_dndn; }
    double sum() const { return p_updn + p_dnup + p_upup + p_dndn; }
    double marginal_a_up() const { return p_upup + p_updn; }
    double marginal_b_up() const { return p_upup + p_dnup; }
};

// Joint detection amplitude for the fixed-orientation spin pair: side A's
// reference analyzer (omega = 0) reads the -p ket, side B's analyzer at
// omega reads the +p ket.  Independent of theta.
Complex amplitude_spin(double theta, SpinPort port_a, double omega, SpinPort port_b);

// Squares of the four spin amplitudes; p_opposite = (1 + cos omega)/2.
JointDistribution joint_distribution_spin(double omega);

// Same distribution obtained the slow way: theta-averaging |amplitude|^2
// over the hidden orientation with the given rule.  Serves as an
// independent cross-check of joint_distribution_spin.
JointDistribution joint_distribution_spin_averaged(double omega, const QuadratureRule& rule);

// Pass/block joint probabilities for the anti-aligned E-field pair,
// obtained by applying both polarizer sign branches to the pair terms,
// theta-averaging the squared amplitudes, and normalizing the four-outcome
// distribution.
JointDistribution joint_distribution_linear(double omega);
JointDistribution joint_distribution_linear(double omega, const QuadratureRule& rule);

// Closed form of the same distribution: p_upup = p_dndn = (2 + cos 2w)/8,
// p_updn = p_dnup = (2 - cos 2w)/8.  Kept separate so the quadrature
// pipeline above stays an independent oracle.
JointDistribution joint_distribution_linear_closed(double omega);

// Raw per-branch weight totals of the linear pipeline before
// normalization.  Equal branches summing to 2 are the pipeline's internal
// consistency signature.
struct LinearBranchTotals {
    double plus = 0.0;
    double minus = 0.0;
    double sum() const { return plus + minus; }
};
LinearBranchTotals linear_branch_totals(double omega, const QuadratureRule& rule);

// Probability that both photons pass the given chirality filters: 1/2 when
// the filters match, exactly 0 when they differ.
double coincidence_chiral(Helicity filter_a, Helicity filter_b);

// Full four-outcome distribution behind coincidence_chiral (pass = up).
JointDistribution joint_distribution_chiral(Helicity filter_a, Helicity filter_b);

// Matched-basis readout of the qubit pair: equal bits with probability 1/2
// each, regardless of the conserved relative sign.
JointDistribution joint_distribution_crypto();

// E(omega) = p_opposite - p_same = cos omega for the spin family (the only
// family with a continuously tunable analyzer pair on both sides).
double correlation_E(double omega, FamilyKind family = FamilyKind::spin_theta);

// Deterministic shared-randomness baseline: both sides see the same hidden
// orientation theta (uniform on [0, 2pi)) and output sign(cos(theta -
// setting)) locally.
struct LhvModel {
    enum class Strategy { sign_threshold };
    Strategy strategy = Strategy::sign_threshold;
};

// <s_A(theta, 0) * s_B(theta, omega)> over the hidden variable.  The
// integrand is piecewise constant, so the integral is evaluated exactly by
// splitting [0, 2pi) at the sign-change breakpoints; the result is the
// sawtooth 1 - 2*omega/pi on [0, pi], even and 2pi-periodic.
double lhv_correlation(const LhvModel& model, double omega);

struct ChshResult {
    double a = 0.0, a_prime = 0.0, b = 0.0, b_prime = 0.0;
    double e_ab = 0.0, e_ab_prime = 0.0, e_a_prime_b = 0.0, e_a_prime_b_prime = 0.0;
    double s_value = 0.0;
};

// S = |E(a,b) - E(a,b')| + |E(a',b) + E(a',b')| with correlations from the
// spin closed form (quantum) or from the hidden-variable model.
ChshResult chsh(double a, double a_prime, double b, double b_prime);
ChshResult chsh(double a, double a_prime, double b, double b_prime, const LhvModel& model);

inline double chsh_s_from(double e_ab, double e_ab_prime, double e_a_prime_b,
                          double e_a_prime_b_prime)
{
    return std::abs(e_ab - e_ab_prime) + std::abs(e_a_prime_b + e_a_prime_b_prime);
}

// Single-side probability of outcome +1 in the standard configuration
// (side A reference setting, side B at omega).  1/2 for every family, every
// omega, both sides: the remote setting never shows in a local marginal.
double marginal(double omega, Side side, FamilyKind family);

}  // namespace qcorr
