#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "degel/degeneracy.hpp"
#include "degel/discretization.hpp"
#include "degel/grid.hpp"
#include "degel/operators.hpp"

namespace degel {

/// f(x, u), assumed bounded.
struct BoundedSource {
    std::function<double(Point, double)> f;
    /// When false, f is sampled once per node instead of every sweep.
    bool depends_on_u = true;
};

/// f(x) * max(u, 0)^mu.
struct DeadCoreSource {
    std::function<double(Point)> f;
    double mu = 1.0;
};

struct ConstantSource {
    double c = 0.0;
};

using SourceSpec = std::variant<BoundedSource, DeadCoreSource, ConstantSource>;

BoundedSource source_of_x(std::function<double(Point)> f);
double source_value(const SourceSpec& s, Point x, double u);

/// H(x, Du) F(x, D^2 u) = f(x, u) with u = g on the boundary ring and an
/// optional obstacle u >= phi.
struct ProblemSpec {
    OperatorSpec op;
    /// Absent means H == 1.
    std::optional<DegeneracyLaw> degeneracy;
    SourceSpec source = ConstantSource{0.0};
    std::function<double(Point)> boundary;
    /// Empty when there is no obstacle.
    std::function<double(Point)> obstacle;

    /// Exponent p of the active law, 0 when H == 1.
    double p() const { return degeneracy ? degeneracy->p : 0.0; }

    /// Checks the dead-core reaction order and g >= phi on the ring.
    void validate(const Grid2D& grid) const;
};

struct SolveReport {
    long iterations = 0;
    double residual = 0.0;
    double update = 0.0;
    bool converged = false;
    double wall_seconds = 0.0;
};

struct SolverConfig {
    double dt_safety = 0.4;
    double tol = 1e-7;
    long max_iter = 500000;
    /// Invoke on_report every this many sweeps (0 disables).
    long report_every = 0;
    std::function<void(const SolveReport&)> on_report;
    /// Use the monotone frame stencil for Pucci operators.
    bool monotone_pucci = false;

    void validate() const;
};

struct Solution {
    ScalarField u;
    SolveReport report;
};

/// H_eps(x, slope) F(x, grad, hess) - f(x, u) at one node.
double node_defect(const ProblemSpec& problem, Point x, const DiscreteJet& jet, double u);

/// H(x, xi) F(x, xi, X) - f(x, u) for an arbitrary jet; H uses |xi|.
double pointwise_defect(const ProblemSpec& problem, Point x, Vec2 xi, const SymMat2& X, double u);

/// Relaxes u_t = H F - f to steady state with explicit Jacobi sweeps.
/// The interior starts at the mean of the boundary data.
Solution solve(const ProblemSpec& problem, const Grid2D& grid, const SolverConfig& cfg = {});

/// Same, starting from `initial`; its ring values are overwritten by g.
Solution solve(const ProblemSpec& problem, const Grid2D& grid, const SolverConfig& cfg, const ScalarField& initial);

/// Solves F(x0, D^2 h) = 0 with H == 1, f == 0 and h = boundary on the ring of `grid`.
Solution solve_frozen_homogeneous(const OperatorSpec& op, Point x0, const ScalarField& boundary, const Grid2D& grid,
                                  const SolverConfig& cfg = {});

/// Pointwise defect at interior nodes, 0 on the ring.
ScalarField residual_field(const ScalarField& u, const ProblemSpec& problem);

}  // namespace degel
