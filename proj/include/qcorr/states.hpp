#pragma once

// Two-particle product-state superpositions for back-to-back pairs.  Each
// family encodes one conserved quantity of the source: net angular momentum
// along the flight axis (chiral photons), net transverse spin (massive
// spin-1/2 pairs), net transverse E-field (linearly polarized photons), or a
// shared parity bit (the qubit pair used for key distribution).
//
// A family is a list of product terms, optionally averaged over the hidden
// orientation angle theta with uniform weight 1/(2*pi).  Coefficients are
// normalized per orientation, so norm() is 1 for every stock family.

#include "qcorr/qmath.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace qcorr {

enum class FamilyKind { chiral, spin_theta, linear_theta, crypto };

enum class Helicity { left, right };
enum class SpinPort { up, dn };
enum class LineParity { a, b };  // the two anti-aligned field orientations

// Transverse spin-1/2 state quantized along azimuth theta.
struct SpinThetaDof {
    double theta;
    SpinPort port;
};

// Linear E-field orientation; parity b is parity a rotated by pi.
struct EFieldLineDof {
    double theta;
    LineParity parity;
};

// Abstract qubit in the computational basis.
struct QubitDof {
    int value;  // 0 or 1
};

using InternalDof = std::variant<Helicity, SpinThetaDof, EFieldLineDof, QubitDof>;

// Momentum along the pair axis, unit modulus by construction.
struct MomentumTag {
    int sign;  // +1 or -1
};

struct ParticleKet {
    InternalDof dof;
    MomentumTag momentum;
};

// One product term c * |dof_a, p_a> |dof_b, p_b|.  The two kets always carry
// opposite momenta; at_momentum() retrieves a slot by its momentum sign.
struct PairTerm {
    Complex coeff;
    ParticleKet a;
    ParticleKet b;

    const ParticleKet& at_momentum(int sign) const
    {
        if (a.momentum.sign == sign) return a;
        if (b.momentum.sign == sign) return b;
        throw std::logic_error("PairTerm: no ket with requested momentum sign");
    }
};

enum class ThetaMeasure { none, uniform };

enum class ConservedTag { jz_total_zero, jtheta_total_zero, e_total_zero, parity_bit };

// A family of pair terms, possibly parameterized by the source orientation.
class PairFamily {
public:
    using Generator = std::function<std::vector<PairTerm>(double)>;

    PairFamily(FamilyKind kind, ThetaMeasure measure, int exchange_sign,
               ConservedTag conserved, Generator gen)
        : kind_(kind), measure_(measure), exchange_sign_(exchange_sign),
          conserved_(conserved), gen_(std::move(gen))
    {
    }

    FamilyKind kind() const { return kind_; }
    ThetaMeasure theta_measure() const { return measure_; }
    int exchange_sign() const { return exchange_sign_; }
    ConservedTag conserved() const { return conserved_; }

    // Terms at a given orientation.  Families with no theta measure ignore
    // the argument.
    std::vector<PairTerm> terms_at(double theta) const { return gen_(theta); }

private:
    FamilyKind kind_;
    ThetaMeasure measure_;
    int exchange_sign_;
    ConservedTag conserved_;
    Generator gen_;
};

// Eigenspinor of sigma_theta with eigenvalue +1/2 (up) or -1/2 (dn).
// theta_spinor(0, up) = (1, 1)/sqrt(2); theta_spinor(0, dn) = (-1, 1)/sqrt(2).
Spinor2 theta_spinor(double theta, SpinPort port);

// Realized transverse E-field direction of a line dof.
LineVec line_vector(const EFieldLineDof& dof);

// Opposite-helicity content is forbidden by angular momentum conservation:
// the state is (|L,-p>|L,+p> + |R,-p>|R,+p>)/sqrt(2).
PairFamily make_chiral_pair();

// Spin-singlet-like pair at a fixed orientation: the two terms
// -1/sqrt(2) |up,+p>|dn,-p>  and  +1/sqrt(2) |dn,+p>|up,-p>.
std::vector<PairTerm> make_spin_pair_at(double theta);
PairFamily make_spin_pair();

// Anti-aligned E-field pair at a fixed orientation, both terms +1/sqrt(2).
std::vector<PairTerm> make_linear_pair_at(double theta);
PairFamily make_linear_pair();

// (|0>|0> + s |1>|1>)/sqrt(2) with s = relative_sign in {+1, -1}; the sign is
// the conserved parity bit of the source.
PairFamily make_crypto_pair(int relative_sign);

// Particle interchange: swap the internal dofs carried by the two momentum
// slots of every term.
std::vector<PairTerm> exchanged(const std::vector<PairTerm>& terms);

// If exchanged(terms) equals s * terms as a formal sum, return s; otherwise
// nullopt.  Angles compare equal within tol after wrapping.
std::optional<int> exchange_eigensign(const std::vector<PairTerm>& terms, double tol = 1e-12);

// Total squared-amplitude weight: sum of |coeff|^2 at one orientation, theta
// averaged for families with a uniform measure.  1 for every stock family.
double norm(const PairFamily& family);
double norm(const PairFamily& family, const QuadratureRule& rule);

// Angular momentum along the flight axis carried by a chiral ket, in hbar
// units: +momentum sign for right, -momentum sign for left.
int chiral_jz(Helicity h, MomentumTag p);

}  // namespace qcorr
