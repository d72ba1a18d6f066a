#pragma once

// Ideal detector models: Stern-Gerlach analyzers (two-port spin projection),
// chirality pass filters, linear polarizers (pass/block covectors), and a
// computational-basis qubit readout.  Which detector kind may face which pair
// family is enforced in correlate, not here.

#include "qcorr/qmath.hpp"
#include "qcorr/states.hpp"

#include <array>
#include <variant>

namespace qcorr {

enum class Side { A, B };

// Analyzer spinor for the port of a Stern-Gerlach apparatus oriented at
// omega.  Same functional form as theta_spinor; omega = 0 is the reference
// apparatus.
Spinor2 sg_spinor(double omega, SpinPort port);

// 1 if the photon's helicity matches the filter, else 0.
double chirality_response(Helicity filter, Helicity dof);

// A polarizer defines a line, not a direction, so angles canonicalize to
// [0, pi) and the pass projection splits into two sign branches that are
// summed downstream.
enum class PolBranch { plus, minus };

inline std::array<PolBranch, 2> enumerate_branches()
{
    return {PolBranch::plus, PolBranch::minus};
}

struct PolarizerCovectors {
    LineVec side_a;  // analyzer covector on the -p arm (reference, along x)
    LineVec side_b;  // analyzer covector on the +p arm (at omega)
};

// Pass covectors of the two polarizers with relative angle omega; the minus
// branch is the elementwise negation of the plus branch.
PolarizerCovectors polarizer_covector(double omega, PolBranch branch);

// The blocked direction of a polarizer: its pass line rotated a quarter turn.
inline LineVec orthogonal_line(const LineVec& v) { return LineVec(-v.y(), v.x()); }

// Operator-selectable detector settings, one per pair family.
struct SternGerlach {
    double omega;
};
struct ChiralityFilter {
    Helicity select;
};
struct LinearPolarizer {
    double omega;
};
struct QubitBasis {};  // computational basis; outcome +1 reads bit 0

using DetectorSetting = std::variant<SternGerlach, ChiralityFilter, LinearPolarizer, QubitBasis>;

}  // namespace qcorr
