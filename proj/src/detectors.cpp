#include "qcorr/detectors.hpp"

#include <cmath>

namespace qcorr {

Spinor2 sg_spinor(double omega, SpinPort port)
{
    return theta_spinor(omega, port);
}

double chirality_response(Helicity filter, Helicity dof)
{
    return filter == dof ? 1.0 : 0.0;
}

PolarizerCovectors polarizer_covector(double omega, PolBranch branch)
{
    const double w = wrap_line_angle(omega);
    const double s = (branch == PolBranch::plus) ? 1.0 : -1.0;
    PolarizerCovectors c;
    c.side_a = s * LineVec(1.0, 0.0);
    c.side_b = s * LineVec(std::cos(w), std::sin(w));
    return c;
}

}  // namespace qcorr
