#pragma once

#include <cmath>
#include <cstddef>

#include "degel/grid.hpp"
#include "degel/operators.hpp"
#include "degel/types.hpp"

namespace degel {

/// Centered finite-difference jet at an interior node.
struct DiscreteJet {
    Vec2 grad;
    SymMat2 hess;
    Node node;
    /// sqrt(|grad|^2 + h^2/4 (hess11^2 + hess22^2)): the root mean square of
    /// the four one-sided axis slopes. Second-order close to |grad| for
    /// smooth u, but nonzero at symmetric critical points with curvature.
    /// This is the argument fed to the degeneracy law.
    double slope = 0.0;
};

enum class StencilDirection { Axis1, Axis2, DiagPlus, DiagMinus };

enum class PucciSign { Plus, Minus };

namespace detail {

/// Jet from the 3x3 block centred at c (row stride `stride`).
inline DiscreteJet jet_from_block(const double* c, std::ptrdiff_t stride, double h) {
    const double u0 = c[0];
    const double e = c[1], w = c[-1], n = c[stride], s = c[-stride];
    const double ne = c[stride + 1], nw = c[stride - 1], se = c[-stride + 1], sw = c[-stride - 1];
    const double inv2h = 0.5 / h;
    const double invh2 = 1.0 / (h * h);
    DiscreteJet j;
    j.grad = {(e - w) * inv2h, (n - s) * inv2h};
    j.hess.a11 = (e - 2.0 * u0 + w) * invh2;
    j.hess.a22 = (n - 2.0 * u0 + s) * invh2;
    j.hess.a12 = (ne - nw - se + sw) * 0.25 * invh2;
    const double d1 = (e - u0) / h, d2 = (u0 - w) / h, d3 = (n - u0) / h, d4 = (u0 - s) / h;
    j.slope = std::sqrt(0.5 * (d1 * d1 + d2 * d2 + d3 * d3 + d4 * d4));
    return j;
}

}  // namespace detail

/// Throws StencilError unless the node is interior.
DiscreteJet jet_at(const ScalarField& u, Node node);

/// (u(x + h v) - 2 u(x) + u(x - h v)) / (h^2 |v|^2) for the lattice offset v.
double directional_second_difference(const ScalarField& u, Node node, StencilDirection dir);

/// Monotone Pucci evaluation on the two 4-point frames {axis1, axis2} and
/// {diag+, diag-}. Each frame gives sum_d phi(delta_d) with phi the Pucci
/// weight of the sign; the result is the max (sign +) or min (sign -) over
/// frames. Exact on quadratics whose principal axes align with a frame.
double pucci_monotone(const ScalarField& u, Node node, EllipticityPair e, PucciSign sign);

}  // namespace degel
