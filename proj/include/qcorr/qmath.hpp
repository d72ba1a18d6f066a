#pragma once

// Complex two-component linear algebra and periodic quadrature used by the
// pair-state and detector modules.  Conventions: inner(a, b) conjugates its
// first argument, so inner(a, a) is a real squared norm; angles are radians.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qcorr {

using Complex = std::complex<double>;
using Spinor2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;
using LineVec = Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double a)
{
    if (!std::isfinite(a)) throw std::invalid_argument("wrap_angle: angle must be finite");
    double w = a - kTwoPi * std::floor(a / kTwoPi);
    if (w >= kTwoPi) w -= kTwoPi;  // guard against floor rounding at the seam
    if (w < 0.0) w += kTwoPi;
    return w;
}

// Wrap an orientation of an undirected line into [0, pi).
inline double wrap_line_angle(double a)
{
    double w = wrap_angle(a);
    return (w >= kPi) ? w - kPi : w;
}

// Hermitian inner product <bra|ket>; the bra side is conjugated.
inline Complex inner(const Spinor2& bra, const Spinor2& ket)
{
    return bra.dot(ket);
}

// Spin component along the transverse axis at azimuth theta, in hbar units:
// (1/2)(cos(theta) sigma_x + sin(theta) sigma_y).  Hermitian, eigenvalues +-1/2.
inline Mat2 sigma_theta(double theta)
{
    if (!std::isfinite(theta)) throw std::invalid_argument("sigma_theta: angle must be finite");
    Mat2 m;
    const Complex phase(std::cos(theta), std::sin(theta));
    m << Complex(0.0, 0.0), 0.5 * std::conj(phase),
         0.5 * phase, Complex(0.0, 0.0);
    return m;
}

// Uniform trapezoid rule on the periodic interval [0, 2*pi).  With n nodes the
// rule integrates e^{i k theta} exactly for |k| < n/2, which is all this code
// ever asks of it.
class QuadratureRule {
public:
    static QuadratureRule uniform(int node_count)
    {
        if (node_count <= 0)
            throw std::invalid_argument("QuadratureRule: node_count must be positive");
        QuadratureRule r;
        r.nodes_.resize(static_cast<std::size_t>(node_count));
        const double h = kTwoPi / node_count;
        for (int j = 0; j < node_count; ++j)
            r.nodes_[static_cast<std::size_t>(j)] = h * j;
        r.weight_ = h;
        return r;
    }

    int node_count() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }
    double weight() const { return weight_; }  // identical for every node

private:
    QuadratureRule() = default;
    std::vector<double> nodes_;
    double weight_ = 0.0;
};

// Integrate f over one period using the rule.  Works for double- or
// Complex-valued integrands.
template <typename F>
auto integrate_periodic(F&& f, const QuadratureRule& rule)
{
    using R = decltype(f(0.0));
    R acc = R(0);
    for (double t : rule.nodes()) acc += f(t);
    return acc * rule.weight();
}

inline QuadratureRule default_rule() { return QuadratureRule::uniform(256); }

}  // namespace qcorr
