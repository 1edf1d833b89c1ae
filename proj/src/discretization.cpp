#include "degel/discretization.hpp"

#include <algorithm>

#include "degel/errors.hpp"

namespace degel {

namespace {

void require_interior(const ScalarField& u, Node node) {
    if (!u.grid().is_interior(node)) {
        throw StencilError("node (" + std::to_string(node.i) + "," + std::to_string(node.j) + ") is not interior");
    }
}

}  // namespace

DiscreteJet jet_at(const ScalarField& u, Node node) {
    require_interior(u, node);
    const Grid2D& g = u.grid();
    DiscreteJet j = detail::jet_from_block(u.values().data() + g.index(node), g.n(), g.h());
    j.node = node;
    return j;
}

double directional_second_difference(const ScalarField& u, Node node, StencilDirection dir) {
    require_interior(u, node);
    int di = 0, dj = 0;
    switch (dir) {
        case StencilDirection::Axis1: di = 1; break;
        case StencilDirection::Axis2: dj = 1; break;
        case StencilDirection::DiagPlus: di = 1; dj = 1; break;
        case StencilDirection::DiagMinus: di = 1; dj = -1; break;
    }
    const double h = u.grid().h();
    const double len2 = static_cast<double>(di * di + dj * dj);
    return (u(node.i + di, node.j + dj) - 2.0 * u[node] + u(node.i - di, node.j - dj)) / (h * h * len2);
}

double pucci_monotone(const ScalarField& u, Node node, EllipticityPair e, PucciSign sign) {
    const double d1 = directional_second_difference(u, node, StencilDirection::Axis1);
    const double d2 = directional_second_difference(u, node, StencilDirection::Axis2);
    const double d3 = directional_second_difference(u, node, StencilDirection::DiagPlus);
    const double d4 = directional_second_difference(u, node, StencilDirection::DiagMinus);
    if (sign == PucciSign::Plus) {
        auto phi = [&](double t) { return t > 0.0 ? e.Lambda * t : e.lambda * t; };
        return std::max(phi(d1) + phi(d2), phi(d3) + phi(d4));
    }
    auto psi = [&](double t) { return t > 0.0 ? e.lambda * t : e.Lambda * t; };
    return std::min(psi(d1) + psi(d2), psi(d3) + psi(d4));
}

}  // namespace degel
