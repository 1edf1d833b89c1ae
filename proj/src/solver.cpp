#include "degel/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "degel/errors.hpp"

namespace degel {

namespace {

constexpr double kDimension = 2.0;
constexpr double kBlowUpFactor = 1e3;

// Largest eigenvalue of the linearized coefficient matrix of F at xi.
double stiffness_bound(const OperatorSpec& op, Vec2 xi) {
    if (std::holds_alternative<InfinityLaplacian>(op.kind)) return std::max(xi.norm2(), op.ellipticity.Lambda);
    if (const auto* f = std::get_if<FrozenAt>(&op.kind)) return stiffness_bound(*f->inner, xi);
    if (const auto* r = std::get_if<Rescaled>(&op.kind)) return stiffness_bound(*r->inner, (r->kappa / r->tau) * xi);
    return op.ellipticity.Lambda;
}

bool is_pucci(const OperatorSpec& op, PucciSign& sign) {
    if (std::holds_alternative<PucciPlus>(op.kind)) {
        sign = PucciSign::Plus;
        return true;
    }
    if (std::holds_alternative<PucciMinus>(op.kind)) {
        sign = PucciSign::Minus;
        return true;
    }
    return false;
}

// Per-node data that does not change across sweeps.
struct NodeTable {
    std::vector<std::size_t> index;
    std::vector<Point> coord;
    std::vector<double> a;       // modulating function, when a law is active
    std::vector<double> f_fixed; // x-only source samples
    std::vector<double> phi;     // obstacle on interior nodes
};

class Relaxation {
public:
    Relaxation(const ProblemSpec& problem, const Grid2D& grid, const SolverConfig& cfg)
        : problem_(problem), grid_(grid), cfg_(cfg) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (grid.kinds()[k] != NodeKind::Interior) continue;
            nodes_.index.push_back(k);
            nodes_.coord.push_back(grid.coord(grid.node_at(k)));
        }
        const std::size_t m = nodes_.index.size();
        if (problem.degeneracy) {
            nodes_.a.resize(m);
            for (std::size_t k = 0; k < m; ++k) nodes_.a[k] = problem.degeneracy->a(nodes_.coord[k]);
        }
        if (const auto* b = std::get_if<BoundedSource>(&problem.source); b && !b->depends_on_u) {
            nodes_.f_fixed.resize(m);
            for (std::size_t k = 0; k < m; ++k) nodes_.f_fixed[k] = b->f(nodes_.coord[k], 0.0);
        } else if (const auto* d = std::get_if<DeadCoreSource>(&problem.source)) {
            nodes_.f_fixed.resize(m);
            for (std::size_t k = 0; k < m; ++k) nodes_.f_fixed[k] = d->f(nodes_.coord[k]);
        }
        if (problem.obstacle) {
            nodes_.phi.resize(m);
            for (std::size_t k = 0; k < m; ++k) nodes_.phi[k] = problem.obstacle(nodes_.coord[k]);
        }
        monotone_ = cfg.monotone_pucci && is_pucci(problem.op, pucci_sign_);
        residual_.resize(m);
    }

    Solution run(ScalarField u) {
        const auto t0 = std::chrono::steady_clock::now();
        const double h = grid_.h();
        double ring_sup = 0.0;
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            if (grid_.kinds()[k] == NodeKind::Ring) ring_sup = std::max(ring_sup, std::abs(u.values()[k]));
        }
        const double blow_up = kBlowUpFactor * (ring_sup + 1.0);

        ScalarField next = u;
        SolveReport report;
        const std::size_t m = nodes_.index.size();
        for (long it = 0; it < cfg_.max_iter; ++it) {
            const double* cur = u.values().data();
            double max_stiffness = 0.0;
            double max_rate = 0.0;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : max_stiffness, max_rate) schedule(static)
#endif
            for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(m); ++kk) {
                const auto k = static_cast<std::size_t>(kk);
                double stiff = 0.0, rate = 0.0;
                residual_[k] = defect(k, cur, stiff, rate);
                max_stiffness = std::max(max_stiffness, stiff);
                max_rate = std::max(max_rate, rate);
            }

            // The nondegenerate step is the ceiling, so flat regions with H ~ 0 cannot take huge steps.
            max_stiffness = std::max(max_stiffness, problem_.op.ellipticity.Lambda);
            double dt = cfg_.dt_safety * h * h / (kDimension * max_stiffness);
            if (max_rate > 0.0) dt = std::min(dt, cfg_.dt_safety / max_rate);

            double* out = next.values().data();
            double eff_sup = 0.0, upd_sup = 0.0, amp = 0.0;
            bool finite = true;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : eff_sup, upd_sup, amp) reduction(&& : finite) schedule(static)
#endif
            for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(m); ++kk) {
                const auto k = static_cast<std::size_t>(kk);
                const std::size_t idx = nodes_.index[k];
                double v = cur[idx] + dt * residual_[k];
                if (!nodes_.phi.empty()) v = std::max(v, nodes_.phi[k]);
                out[idx] = v;
                const double delta = v - cur[idx];
                upd_sup = std::max(upd_sup, std::abs(delta));
                eff_sup = std::max(eff_sup, std::abs(delta) / dt);
                amp = std::max(amp, std::abs(v));
                finite = finite && std::isfinite(v);
            }
            report.iterations = it + 1;
            report.residual = eff_sup;
            report.update = upd_sup;
            if (!finite || amp > blow_up) {
                throw BlowUpError("pseudo-time iteration diverged after " + std::to_string(it + 1) + " sweeps");
            }
            if (eff_sup <= cfg_.tol) {
                // The state that met the tolerance is kept; the last update is not applied.
                report.converged = true;
                break;
            }
            std::swap(u, next);
            if (cfg_.report_every > 0 && cfg_.on_report && (it + 1) % cfg_.report_every == 0) {
                report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                cfg_.on_report(report);
            }
        }
        report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return {std::move(u), report};
    }

private:
    double defect(std::size_t k, const double* values, double& stiffness, double& rate) const {
        const std::size_t idx = nodes_.index[k];
        const Point x = nodes_.coord[k];
        const DiscreteJet jet = detail::jet_from_block(values + idx, grid_.n(), grid_.h());

        double Hval = 1.0;
        if (problem_.degeneracy) {
            const DegeneracyLaw& law = *problem_.degeneracy;
            const double s = std::max(jet.slope, law.eps_reg);
            Hval = power_of(s, law.p) + nodes_.a[k] * power_of(s, law.q);
        }

        double F = 0.0;
        if (monotone_) {
            F = monotone_pucci(values + idx);
        } else {
            F = evaluate(problem_.op, x, jet.grad, jet.hess);
        }

        const double u = values[idx];
        double f = 0.0;
        if (const auto* d = std::get_if<DeadCoreSource>(&problem_.source)) {
            const double up = std::max(u, 0.0);
            f = nodes_.f_fixed[k] * power_of(up, d->mu);
            if (d->mu >= 1.0) rate = nodes_.f_fixed[k] * d->mu * power_of(up, d->mu - 1.0);
        } else if (!nodes_.f_fixed.empty()) {
            f = nodes_.f_fixed[k];
        } else {
            f = source_value(problem_.source, x, u);
        }
        stiffness = Hval * stiffness_bound(problem_.op, jet.grad);
        return Hval * F - f;
    }

    double monotone_pucci(const double* c) const {
        const std::ptrdiff_t s = grid_.n();
        const double h2 = grid_.h() * grid_.h();
        const double d1 = (c[1] - 2.0 * c[0] + c[-1]) / h2;
        const double d2 = (c[s] - 2.0 * c[0] + c[-s]) / h2;
        const double d3 = (c[s + 1] - 2.0 * c[0] + c[-s - 1]) / (2.0 * h2);
        const double d4 = (c[-s + 1] - 2.0 * c[0] + c[s - 1]) / (2.0 * h2);
        const EllipticityPair e = problem_.op.ellipticity;
        if (pucci_sign_ == PucciSign::Plus) {
            auto phi = [&](double t) { return t > 0.0 ? e.Lambda * t : e.lambda * t; };
            return std::max(phi(d1) + phi(d2), phi(d3) + phi(d4));
        }
        auto psi = [&](double t) { return t > 0.0 ? e.lambda * t : e.Lambda * t; };
        return std::min(psi(d1) + psi(d2), psi(d3) + psi(d4));
    }

    const ProblemSpec& problem_;
    const Grid2D& grid_;
    const SolverConfig& cfg_;
    NodeTable nodes_;
    bool monotone_ = false;
    PucciSign pucci_sign_ = PucciSign::Plus;
    mutable std::vector<double> residual_;
};

double ring_mean(const ScalarField& u) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < u.grid().size(); ++k) {
        if (u.grid().kinds()[k] == NodeKind::Ring) {
            sum += u.values()[k];
            ++count;
        }
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

}  // namespace

BoundedSource source_of_x(std::function<double(Point)> f) {
    return {[f = std::move(f)](Point x, double) { return f(x); }, false};
}

double source_value(const SourceSpec& s, Point x, double u) {
    if (const auto* b = std::get_if<BoundedSource>(&s)) return b->f(x, u);
    if (const auto* d = std::get_if<DeadCoreSource>(&s)) return d->f(x) * std::pow(std::max(u, 0.0), d->mu);
    return std::get<ConstantSource>(s).c;
}

void ProblemSpec::validate(const Grid2D& grid) const {
    if (const auto* d = std::get_if<DeadCoreSource>(&source)) {
        if (!(d->mu > 0.0 && d->mu < p() + 1.0)) throw ParameterError("dead-core reaction requires 0 < mu < p+1");
        if (!d->f) throw ParameterError("dead-core source needs a Thiele modulus f(x)");
    }
    if (const auto* b = std::get_if<BoundedSource>(&source); b && !b->f) {
        throw ParameterError("bounded source needs a callable");
    }
    if (obstacle && boundary) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (grid.kinds()[k] != NodeKind::Ring) continue;
            const Point x = grid.coord(grid.node_at(k));
            if (boundary(x) < obstacle(x)) throw PreconditionError("boundary data must satisfy g >= phi on the ring");
        }
    }
}

void SolverConfig::validate() const {
    if (!(dt_safety > 0.0 && dt_safety < 0.5)) throw ParameterError("dt_safety must lie in (0, 0.5)");
    if (!(tol > 0.0)) throw ParameterError("tol must be positive");
    if (max_iter < 1) throw ParameterError("max_iter must be >= 1");
}

double node_defect(const ProblemSpec& problem, Point x, const DiscreteJet& jet, double u) {
    double Hval = 1.0;
    if (problem.degeneracy) Hval = K_regularized(*problem.degeneracy, x, jet.slope);
    return Hval * evaluate(problem.op, x, jet.grad, jet.hess) - source_value(problem.source, x, u);
}

double pointwise_defect(const ProblemSpec& problem, Point x, Vec2 xi, const SymMat2& X, double u) {
    const double Hval = problem.degeneracy ? H(*problem.degeneracy, x, xi) : 1.0;
    return Hval * evaluate(problem.op, x, xi, X) - source_value(problem.source, x, u);
}

Solution solve(const ProblemSpec& problem, const Grid2D& grid, const SolverConfig& cfg, const ScalarField& initial) {
    cfg.validate();
    problem.validate(grid);
    if (!problem.boundary) throw ParameterError("problem needs boundary data");
    if (!(initial.grid() == grid)) throw ParameterError("initial guess lives on a different grid");
    ScalarField u = initial;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Point x = grid.coord(grid.node_at(k));
        if (grid.kinds()[k] == NodeKind::Ring) u.values()[k] = problem.boundary(x);
        else if (grid.kinds()[k] == NodeKind::Interior && problem.obstacle) u.values()[k] = std::max(u.values()[k], problem.obstacle(x));
    }
    return Relaxation(problem, grid, cfg).run(std::move(u));
}

Solution solve(const ProblemSpec& problem, const Grid2D& grid, const SolverConfig& cfg) {
    if (!problem.boundary) throw ParameterError("problem needs boundary data");
    ScalarField start = ScalarField::sample(grid, problem.boundary);
    const double mean = ring_mean(start);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid.kinds()[k] == NodeKind::Interior) start.values()[k] = mean;
    }
    return solve(problem, grid, cfg, start);
}

Solution solve_frozen_homogeneous(const OperatorSpec& op, Point x0, const ScalarField& boundary, const Grid2D& grid,
                                  const SolverConfig& cfg) {
    cfg.validate();
    if (!(boundary.grid() == grid)) throw ParameterError("boundary field lives on a different grid");
    ProblemSpec frozen;
    frozen.op = make_frozen_at(x0, op);
    frozen.source = ConstantSource{0.0};
    ScalarField start = boundary;
    const double mean = ring_mean(start);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid.kinds()[k] == NodeKind::Interior) start.values()[k] = mean;
    }
    return Relaxation(frozen, grid, cfg).run(std::move(start));
}

ScalarField residual_field(const ScalarField& u, const ProblemSpec& problem) {
    const Grid2D& g = u.grid();
    ScalarField r(g, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.kinds()[k] != NodeKind::Interior) continue;
        const Node nd = g.node_at(k);
        r.values()[k] = node_defect(problem, g.coord(nd), jet_at(u, nd), u.values()[k]);
    }
    return r;
}

}  // namespace degel
