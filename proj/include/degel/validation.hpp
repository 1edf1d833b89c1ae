#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "degel/grid.hpp"
#include "degel/solver.hpp"

namespace degel {

struct ViscosityViolation {
    Node node;
    double margin = 0.0;
};

struct ViscosityReport {
    std::size_t checked = 0;
    std::vector<ViscosityViolation> super_violations;
    std::vector<ViscosityViolation> sub_violations;
    double tol = 0.0;

    bool certified() const { return super_violations.empty() && sub_violations.empty(); }
};

/// Probes every interior node with quadratic test functions built from the
/// discrete jet (zeta, M). Gradients are perturbed by h in
/// `jet_perturbations` directions (plus the unperturbed one); the Hessian
/// is shifted by the smallest s >= 0 that makes the quadratic touch u from
/// below (M - s Id) or above (M + s Id) on the 9-point neighborhood.
/// Supersolution test: H(x,zeta') F(x,zeta',M') <= f(x,u) + tol.
/// Subsolution test:   H(x,zeta') F(x,zeta',M') >= f(x,u) - tol.
/// Jets where the operator is undefined (zero gradient without fallback) are skipped.
ViscosityReport check_viscosity(const ScalarField& u, const ProblemSpec& problem, double tol,
                                int jet_perturbations = 4);

/// `ix,iy,kind,margin` rows, kind in {super, sub}.
void write_viscosity_csv(std::ostream& os, const ViscosityReport& report);
void write_viscosity_csv(const std::string& path, const ViscosityReport& report);

struct ComparisonReport {
    double min_difference = 0.0;
    bool passed = false;
    double h = 0.0;
    SolveReport sub;
    SolveReport super;
};

/// Solves both problems on `grid` and reports min over masked nodes of
/// u_super - u_sub; passes iff it is >= -1e-8. Throws PreconditionError
/// when g_super < g_sub somewhere on the ring or the operators differ.
ComparisonReport comparison_audit(const ProblemSpec& problem_sub, const ProblemSpec& problem_super,
                                  const Grid2D& grid, const SolverConfig& cfg = {});

}  // namespace degel
