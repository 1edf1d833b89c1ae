#include "degel/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "degel/discretization.hpp"
#include "degel/errors.hpp"

namespace degel {

namespace {

constexpr std::array<std::array<int, 2>, 8> kNeighbors{
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}};

// Smallest s >= 0 with sign * (q(y) - u(y)) <= 0 on the neighborhood, where
// q(y) = u0 + zeta.y + 1/2 y^T M y - sign * s |y|^2 / 2.
// sign = +1 touches from below, -1 from above.
double touching_shift(const ScalarField& u, Node nd, Vec2 zeta, const SymMat2& M, double sign) {
    const double h = u.grid().h();
    const double u0 = u[nd];
    double s = 0.0;
    for (const auto& d : kNeighbors) {
        const Vec2 y{d[0] * h, d[1] * h};
        const double q = u0 + zeta.dot(y) + 0.5 * M.quad(y);
        const double gap = sign * (q - u(nd.i + d[0], nd.j + d[1]));
        s = std::max(s, 2.0 * gap / y.norm2());
    }
    return s;
}

}  // namespace

ViscosityReport check_viscosity(const ScalarField& u, const ProblemSpec& problem, double tol, int jet_perturbations) {
    if (!(tol >= 0.0)) throw ParameterError("viscosity tolerance must be nonnegative");
    if (jet_perturbations < 0) throw ParameterError("jet_perturbations must be >= 0");
    const Grid2D& g = u.grid();
    const double h = g.h();

    std::vector<Vec2> etas{{0.0, 0.0}};
    for (int k = 0; k < jet_perturbations; ++k) {
        const double th = 2.0 * std::numbers::pi * k / jet_perturbations;
        etas.push_back({h * std::cos(th), h * std::sin(th)});
    }

    ViscosityReport rep;
    rep.tol = tol;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.kinds()[k] != NodeKind::Interior) continue;
        const Node nd = g.node_at(k);
        const Point x = g.coord(nd);
        const DiscreteJet jet = jet_at(u, nd);
        const double u0 = u[nd];
        ++rep.checked;

        double worst_super = 0.0, worst_sub = 0.0;
        for (const Vec2& eta : etas) {
            const Vec2 zeta = jet.grad + eta;
            try {
                const double s_lo = touching_shift(u, nd, zeta, jet.hess, +1.0);
                const double d_lo = pointwise_defect(problem, x, zeta, jet.hess - s_lo * SymMat2::identity(), u0);
                worst_super = std::max(worst_super, d_lo - tol);

                const double s_hi = touching_shift(u, nd, zeta, jet.hess, -1.0);
                const double d_hi = pointwise_defect(problem, x, zeta, jet.hess + s_hi * SymMat2::identity(), u0);
                worst_sub = std::max(worst_sub, -d_hi - tol);
            } catch (const DegenerateGradientError&) {
                continue;
            }
        }
        if (worst_super > 0.0) rep.super_violations.push_back({nd, worst_super});
        if (worst_sub > 0.0) rep.sub_violations.push_back({nd, worst_sub});
    }
    return rep;
}

void write_viscosity_csv(std::ostream& os, const ViscosityReport& report) {
    os << "ix,iy,kind,margin\n";
    for (const auto& v : report.super_violations) os << v.node.i << ',' << v.node.j << ",super," << format_real(v.margin) << '\n';
    for (const auto& v : report.sub_violations) os << v.node.i << ',' << v.node.j << ",sub," << format_real(v.margin) << '\n';
}

void write_viscosity_csv(const std::string& path, const ViscosityReport& report) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_viscosity_csv(os, report);
}

ComparisonReport comparison_audit(const ProblemSpec& problem_sub, const ProblemSpec& problem_super,
                                  const Grid2D& grid, const SolverConfig& cfg) {
    if (!problem_sub.boundary || !problem_super.boundary) throw ParameterError("both problems need boundary data");
    if (problem_sub.op.name() != problem_super.op.name() ||
        problem_sub.degeneracy.has_value() != problem_super.degeneracy.has_value() ||
        (problem_sub.degeneracy &&
         (problem_sub.degeneracy->p != problem_super.degeneracy->p ||
          problem_sub.degeneracy->q != problem_super.degeneracy->q))) {
        throw PreconditionError("comparison audit needs identical operator and degeneracy");
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid.kinds()[k] != NodeKind::Ring) continue;
        const Point x = grid.coord(grid.node_at(k));
        if (problem_super.boundary(x) < problem_sub.boundary(x)) {
            throw PreconditionError("boundary data must satisfy g_super >= g_sub on the ring");
        }
    }
    const Solution lo = solve(problem_sub, grid, cfg);
    const Solution hi = solve(problem_super, grid, cfg);
    ComparisonReport rep;
    rep.h = grid.h();
    rep.sub = lo.report;
    rep.super = hi.report;
    rep.min_difference = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid.kinds()[k] == NodeKind::Exterior) continue;
        rep.min_difference = std::min(rep.min_difference, hi.u.values()[k] - lo.u.values()[k]);
    }
    rep.passed = rep.min_difference >= -1e-8;
    return rep;
}

}  // namespace degel
