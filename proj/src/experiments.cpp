#include "degel/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "degel/analysis.hpp"
#include "degel/barriers.hpp"
#include "degel/errors.hpp"
#include "degel/operators.hpp"

namespace degel {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

// Two-column `r,value` file; a non-numeric first line is treated as a header.
ModulatingFunction read_radial_table(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParameterError("cannot open modulating-function table " + path);
    std::vector<double> radii, values;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        try {
            if (cells.size() != 2) throw std::invalid_argument("columns");
            radii.push_back(std::stod(cells[0]));
            values.push_back(std::stod(cells[1]));
        } catch (const std::exception&) {
            if (first) {
                first = false;
                continue;
            }
            throw ParameterError("malformed row in " + path + ": " + line);
        }
        first = false;
    }
    return ModulatingFunction::table(std::move(radii), std::move(values));
}

std::function<double(Point)> scalar_spec(const TaggedSpec& s, double p, const char* what) {
    auto need = [&](std::size_t k) {
        if (s.args.size() != k) throw ParameterError(std::string(what) + " '" + s.kind + "' needs " + std::to_string(k) + " argument(s)");
    };
    if (s.kind == "const") {
        need(1);
        const double c = s.args[0];
        return [c](Point) { return c; };
    }
    if (s.kind == "exact") {
        need(0);
        return [p](Point x) { return exact_example_solution(x, p); };
    }
    if (s.kind == "plane") {
        need(2);
        const double b1 = s.args[0], b2 = s.args[1];
        return [b1, b2](Point x) { return b1 * x.x + b2 * x.y; };
    }
    if (s.kind == "saddle") {
        need(1);
        const double e = s.args[0];
        return [e](Point x) { return x.x + e * (x.x * x.x - x.y * x.y); };
    }
    throw ParameterError(std::string("unknown ") + what + " '" + s.kind + "'");
}

class Summary {
public:
    explicit Summary(RunOutcome& out) : out_(out) {}
    void add(const std::string& key, double v) { out_.summary.emplace_back(key, v); }
    void band(const std::string& key, double v, std::optional<double> lo, std::optional<double> hi) {
        if ((lo && !(v >= *lo)) || (hi && !(v <= *hi))) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "%s=%.6g outside [%s, %s]", key.c_str(), v,
                          lo ? format_real(*lo).c_str() : "-inf", hi ? format_real(*hi).c_str() : "inf");
            out_.band_failures.emplace_back(buf);
        }
    }
    void require(bool ok, const std::string& what) {
        if (!ok) out_.band_failures.push_back(what);
    }

private:
    RunOutcome& out_;
};

std::optional<double> pick(std::optional<double> override_value, std::optional<double> fallback) {
    return override_value ? override_value : fallback;
}

std::string artifact(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::vector<double> radii_between(const ExperimentConfig& cfg, const Grid2D& g, const std::string& dmin,
                                  const std::string& dmax) {
    const std::string& smin = cfg.lines.count("analysis.r_min") ? cfg.r_min : dmin;
    const std::string& smax = cfg.lines.count("analysis.r_max") ? cfg.r_max : dmax;
    return log_spaced_radii(resolve_length(smin, g.h()), resolve_length(smax, g.h()), cfg.per_decade);
}

double sup_error(const ScalarField& u, const std::function<double(Point)>& exact) {
    const Grid2D& g = u.grid();
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.kinds()[k] == NodeKind::Exterior) continue;
        err = std::max(err, std::abs(u.values()[k] - exact(g.coord(g.node_at(k)))));
    }
    return err;
}

void add_report(Summary& s, const SolveReport& r, const std::string& prefix = "") {
    s.add(prefix + "iterations", static_cast<double>(r.iterations));
    s.add(prefix + "residual", r.residual);
    s.add(prefix + "converged", r.converged ? 1.0 : 0.0);
}

ProblemSpec exact_problem(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.source = TaggedSpec{"exact", {}, ""};
    c.boundary = TaggedSpec{"exact", {}, ""};
    return build_problem(c);
}

void run_solve(const ExperimentConfig& cfg, const std::string& out, Summary& s) {
    const Grid2D grid = build_grid(cfg);
    const ProblemSpec problem = build_problem(cfg);
    const Solution sol = solve(problem, grid, build_solver_config(cfg));
    write_field_csv(artifact(out, "u.csv"), sol.u);
    add_report(s, sol.report);
    s.add("u_sup", sup_over_ball(sol.u, grid.center(), grid.radius()));
    s.require(sol.report.converged, "solver did not reach solver.tol");
    s.band("residual", sol.report.residual, cfg.band_min, pick(cfg.band_max, cfg.tol));
}

void run_exact_check(const ExperimentConfig& cfg, const std::string& out, Summary& s) {
    const Grid2D grid = build_grid(cfg);
    const ProblemSpec problem = exact_problem(cfg);
    const Solution sol = solve(problem, grid, build_solver_config(cfg));
    const auto exact = [p = cfg.p](Point x) { return exact_example_solution(x, p); };
    ScalarField err = sol.u - ScalarField::sample(grid, exact);
    write_field_csv(artifact(out, "u.csv"), sol.u);
    write_field_csv(artifact(out, "error.csv"), err);
    add_report(s, sol.report);
    const double e = sup_error(sol.u, exact);
    s.add("sup_error", e);
    s.band("sup_error", e, cfg.band_min, pick(cfg.band_max, 2e-2));
}

void run_exponent(const ExperimentConfig& cfg, const std::string& out, Summary& s) {
    const Grid2D grid = build_grid(cfg);
    const double p = cfg.p;
    ScalarField u(grid);
    if (cfg.sampled) {
        u = ScalarField::sample(grid, [p](Point x) { return exact_example_solution(x, p); });
    } else {
        const Solution sol = solve(exact_problem(cfg), grid, build_solver_config(cfg));
        add_report(s, sol.report);
        u = sol.u;
    }
    write_field_csv(artifact(out, "u.csv"), u);
    const auto radii = radii_between(cfg, grid, "4h", "0.25");
    std::vector<double> osc, grad;
    for (double r : radii) {
        osc.push_back(oscillation(u, cfg.x0, r));
        grad.push_back(gradient_growth(u, cfg.x0, r));
    }
    const ExponentFit fo = fit_exponent(radii, osc);
    const ExponentFit fg = fit_exponent(radii, grad);
    write_fit_csv(artifact(out, "oscillation_fit.csv"), fo);
    write_fit_csv(artifact(out, "gradient_fit.csv"), fg);
    s.add("slope", fo.slope);
    s.add("intercept", fo.intercept);
    s.add("r2", fo.r2);
    s.add("grad_slope", fg.slope);
    const double target = sharp_exponent(p);
    s.add("target", target);
    s.band("slope", fo.slope, pick(cfg.band_min, target - 0.07), pick(cfg.band_max, target + 0.07));
}

void run_deadcore(const ExperimentConfig& cfg, const std::string& out, Summary& s) {
    if (cfg.source.kind != "deadcore") throw ParameterError("deadcore experiment needs source = deadcore:<f>");
    const Grid2D grid = build_grid(cfg);
    const Solution sol = solve(build_problem(cfg), grid, build_solver_config(cfg));
    write_field_csv(artifact(out, "u.csv"), sol.u);
    add_report(s, sol.report);

    const double thr = cfg.threshold.value_or(10.0 * cfg.tol);
    std::size_t zero = 0, masked = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid.kinds()[k] == NodeKind::Exterior) continue;
        ++masked;
        if (sol.u.values()[k] <= thr) ++zero;
    }
    const double zero_fraction = static_cast<double>(zero) / static_cast<double>(masked);
    const auto fb = free_boundary(sol.u, thr);
    const Node z = free_boundary_node_on_ray(fb, grid);
    const Point z0 = grid.coord(z);

    const auto radii = radii_between(cfg, grid, "6h", "0.2");
    std::vector<double> growth, grad;
    for (double r : radii) {
        growth.push_back(sup_over_ball(sol.u, z0, r));
        grad.push_back(sup_gradient_over_ball(sol.u, z0, r));
    }
    const ExponentFit fu = fit_exponent(radii, growth);
    const ExponentFit fg = fit_exponent(radii, grad);
    write_fit_csv(artifact(out, "growth_fit.csv"), fu);
    write_fit_csv(artifact(out, "gradient_fit.csv"), fg);
    const DensityReport dens = positive_density(sol.u, z0, log_spaced_radii(8.0 * grid.h(), 0.2, cfg.per_decade), thr);
    {
        std::ofstream os(artifact(out, "density.csv"));
        os << "r,ratio\n";
        for (std::size_t k = 0; k < dens.radii.size(); ++k) os << format_real(dens.radii[k]) << ',' << format_real(dens.ratios[k]) << '\n';
    }

    const double growth_target = (cfg.p + 2.0) / (cfg.p + 1.0 - cfg.mu);
    const double grad_target = (1.0 + cfg.mu) / (cfg.p + 1.0 - cfg.mu);
    s.add("zero_fraction", zero_fraction);
    s.add("free_boundary_nodes", static_cast<double>(fb.size()));
    s.add("z0_x", z0.x);
    s.add("z0_y", z0.y);
    s.add("growth_slope", fu.slope);
    s.add("grad_slope", fg.slope);
    s.add("theta_min", dens.theta_min);
    s.band("zero_fraction", zero_fraction, 0.01, std::nullopt);
    s.band("growth_slope", fu.slope, pick(cfg.band_min, growth_target - 0.2), pick(cfg.band_max, growth_target + 0.2));
    s.band("grad_slope", fg.slope, grad_target - 0.2, grad_target + 0.2);
    s.band("theta_min", dens.theta_min, 0.3, std::nullopt);
}

void run_obstacle(const ExperimentConfig& cfg, const std::string& out, Summary& s) {
    if (cfg.obstacle.kind == "none") throw ParameterError("obstacle experiment needs an obstacle");
    const Grid2D grid = build_grid(cfg);
    const ProblemSpec problem = build_problem(cfg);
    const Solution sol = solve(problem, grid, build_solver_config(cfg));
    write_field_csv(artifact(out, "u.csv"), sol.u);
    add_report(s, sol.report);
    const double thr = cfg.threshold.value_or(10.0 * cfg.tol);
    double min_gap = std::numeric_limits<double>::infinity();
    std::size_t contact = 0, interior = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid.kinds()[k] != NodeKind::Interior) continue;
        ++interior;
        const double gap = sol.u.values()[k] - problem.obstacle(grid.coord(grid.node_at(k)));
        min_gap = std::min(min_gap, gap);
        if (gap <= thr) ++contact;
    }
    s.add("min_gap", min_gap);
    s.add("contact_fraction", static_cast<double>(contact) / static_cast<double>(interior));
    s.band("min_gap", min_gap, pick(cfg.band_min, -1e-12), cfg.band_max);
}

void run_barrier_root(const ExperimentConfig& cfg, const std::string& out, Summary& s) {
    BarrierInputs in;
    in.p = cfg.p;
    in.q = cfg.q;
    in.lambda = cfg.barrier_lambda;
    in.Lambda = cfg.barrier_Lambda;
    in.L1 = cfg.barrier_L1;
    in.N = cfg.barrier_N;
    in.diam = cfg.barrier_diam;
    in.norm_a = cfg.barrier_norm_a;
    in.m_inf = cfg.barrier_m;
    const BarrierConstants bc = smallest_root(in, cfg.barrier_c_fraction);
    const double gT0 = g_function(bc.T0, bc);
    s.add("Xi2", bc.Xi2);
    s.add("Xi3", bc.Xi3);
    s.add("T0", bc.T0);
    s.add("c", bc.c);
    s.add("g_T0", gT0);
    std::ofstream os(artifact(out, "barrier.csv"));
    os << "t,g\n";
    for (int k = 0; k <= 64; ++k) {
        const double t = 2.0 * bc.T0 * k / 64.0;
        os << format_real(t) << ',' << format_real(g_function(t, bc)) << '\n';
    }
    s.band("g_T0", std::abs(gT0), std::nullopt, pick(cfg.band_max, 1e-12));
}

void run_approximation(const ExperimentConfig& cfg, const std::string& out, Summary& s) {
    const Grid2D grid = build_grid(cfg);
    const SolverConfig scfg = build_solver_config(cfg);
    const ProblemSpec base = build_problem(cfg);
    const ScalarField g = ScalarField::sample(grid, base.boundary);
    const Solution h = solve_frozen_homogeneous(base.op, cfg.x0, g, grid, scfg);
    write_field_csv(artifact(out, "frozen.csv"), h.u);
    add_report(s, h.report, "frozen_");

    std::ofstream os(artifact(out, "approximation.csv"));
    os << "delta,distance\n";
    std::vector<double> dist;
    for (std::size_t k = 0; k < cfg.deltas.size(); ++k) {
        ProblemSpec pr = base;
        pr.source = ConstantSource{cfg.deltas[k]};
        const Solution u = solve(pr, grid, scfg);
        dist.push_back(approximation_distance(u.u, h.u, cfg.approx_radius));
        os << format_real(cfg.deltas[k]) << ',' << format_real(dist.back()) << '\n';
        s.add("distance_" + std::to_string(k), dist.back());
    }
    bool monotone = true;
    for (std::size_t k = 1; k < dist.size(); ++k) monotone = monotone && dist[k] < dist[k - 1];
    s.add("monotone", monotone ? 1.0 : 0.0);
    s.require(monotone, "approximation distance is not strictly decreasing in delta");
    s.band("final_distance", dist.back(), cfg.band_min, pick(cfg.band_max, 0.05));
}

void run_recession(const ExperimentConfig& cfg, const std::string& out, std::uint64_t seed, Summary& s) {
    const OperatorSpec op = build_operator(cfg);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<SymMat2> samples;
    for (int k = 0; k < cfg.recession_samples; ++k) {
        SymMat2 X{U(rng), U(rng), U(rng)};
        const double f = X.frobenius();
        if (f > 1.0) X = X * (1.0 / f);
        samples.push_back(X);
    }
    std::ofstream os(artifact(out, "recession.csv"));
    os << "tau,error\n";
    std::vector<double> errs;
    for (double tau : cfg.taus) {
        double e = 0.0;
        for (const SymMat2& X : samples) e = std::max(e, std::abs(recession(op, X, tau) - X.trace()));
        errs.push_back(e);
        os << format_real(tau) << ',' << format_real(e) << '\n';
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < errs.size(); ++k) decreasing = decreasing && errs[k] < errs[k - 1];
    s.add("final_error", errs.back());
    s.add("decreasing", decreasing ? 1.0 : 0.0);
    s.require(decreasing, "recession error is not strictly decreasing in tau");
    s.band("final_error", errs.back(), cfg.band_min, pick(cfg.band_max, 1e-3));
}

}  // namespace

Grid2D build_grid(const ExperimentConfig& cfg) { return Grid2D::make(cfg.n, cfg.center, cfg.radius); }

OperatorSpec build_operator(const ExperimentConfig& cfg) {
    const EllipticityPair e{cfg.op_lambda, cfg.op_Lambda};
    if (cfg.op == "laplacian") return make_laplacian();
    if (cfg.op == "pucci+") return make_pucci_plus(e);
    if (cfg.op == "pucci-") return make_pucci_minus(e);
    if (cfg.op == "p-laplacian") return make_normalized_p_laplacian(cfg.op_p);
    if (cfg.op == "infinity-laplacian") return make_infinity_laplacian(cfg.op_xi_bound);
    if (cfg.op == "m-momentum") {
        const std::array<double, 2> sigma{cfg.op_sigma.x, cfg.op_sigma.y};
        // Declared pair on the eigenvalue box |t| <= min(sigma)/2.
        const double bound = 0.5 * std::min(sigma[0], sigma[1]);
        return make_m_momentum(cfg.op_m, sigma, m_momentum_ellipticity(cfg.op_m, sigma, bound));
    }
    throw ParameterError("unknown operator '" + cfg.op + "'");
}

ModulatingFunction build_modulating_function(const ExperimentConfig& cfg) {
    if (cfg.a.kind == "const") return ModulatingFunction::constant(cfg.a.args.at(0));
    if (cfg.a.kind == "power") return ModulatingFunction::power(cfg.a.args.at(0));
    if (cfg.a.kind == "table") return read_radial_table(cfg.a.raw);
    throw ParameterError("unknown modulating function '" + cfg.a.kind + "'");
}

ProblemSpec build_problem(const ExperimentConfig& cfg) {
    ProblemSpec pr;
    pr.op = build_operator(cfg);
    const ModulatingFunction a = build_modulating_function(cfg);
    if (cfg.degeneracy) pr.degeneracy = DegeneracyLaw::make(cfg.p, cfg.q, a, cfg.eps_reg);
    const double p = cfg.degeneracy ? cfg.p : 0.0;

    if (cfg.source.kind == "const") {
        if (cfg.source.args.size() != 1) throw ParameterError("source const needs one argument");
        pr.source = ConstantSource{cfg.source.args[0]};
    } else if (cfg.source.kind == "exact") {
        if (!cfg.degeneracy) throw ParameterError("exact source needs an active degeneracy law");
        pr.source = source_of_x([a, p, q = cfg.q](Point x) {
            return exact_example_source(x, p, q, 2, [&a](Point y) { return a(y); });
        });
    } else if (cfg.source.kind == "deadcore") {
        if (cfg.source.args.size() != 1) throw ParameterError("source deadcore needs the Thiele modulus");
        const double f = cfg.source.args[0];
        pr.source = DeadCoreSource{[f](Point) { return f; }, cfg.mu};
    } else {
        throw ParameterError("unknown source '" + cfg.source.kind + "'");
    }

    pr.boundary = scalar_spec(cfg.boundary, cfg.p, "boundary");
    if (cfg.obstacle.kind == "const") {
        pr.obstacle = scalar_spec(cfg.obstacle, cfg.p, "obstacle");
    } else if (cfg.obstacle.kind == "bump") {
        if (cfg.obstacle.args.size() != 2 || !(cfg.obstacle.args[1] > 0.0)) {
            throw ParameterError("obstacle bump needs <height>:<radius> with radius > 0");
        }
        const double H = cfg.obstacle.args[0], R = cfg.obstacle.args[1];
        const Point c = cfg.center;
        pr.obstacle = [H, R, c](Point x) { return H * (1.0 - (x - c).norm2() / (R * R)); };
    }
    return pr;
}

SolverConfig build_solver_config(const ExperimentConfig& cfg) {
    SolverConfig s;
    s.tol = cfg.tol;
    s.dt_safety = cfg.dt_safety;
    s.max_iter = cfg.max_iter;
    s.monotone_pucci = cfg.monotone_pucci;
    s.validate();
    return s;
}

RunOutcome run_experiment(const std::string& tag, const ExperimentConfig& cfg, const std::string& out_dir,
                          std::uint64_t seed) {
    const auto& tags = experiment_tags();
    if (std::find(tags.begin(), tags.end(), tag) == tags.end()) throw ParameterError("unknown experiment '" + tag + "'");
    if (!cfg.experiment.empty() && cfg.experiment != tag) {
        throw ParameterError("config is for experiment '" + cfg.experiment + "', not '" + tag + "'");
    }
    // Fail fast on everything the pipelines will construct.
    if (tag != "barrier-root" && tag != "recession") {
        const Grid2D grid = build_grid(cfg);
        build_problem(cfg).validate(grid);
        build_solver_config(cfg);
    }
    fs::create_directories(out_dir);

    RunOutcome out;
    Summary s(out);
    if (tag == "solve") run_solve(cfg, out_dir, s);
    else if (tag == "exact-check") run_exact_check(cfg, out_dir, s);
    else if (tag == "exponent") run_exponent(cfg, out_dir, s);
    else if (tag == "deadcore") run_deadcore(cfg, out_dir, s);
    else if (tag == "obstacle") run_obstacle(cfg, out_dir, s);
    else if (tag == "barrier-root") run_barrier_root(cfg, out_dir, s);
    else if (tag == "approximation") run_approximation(cfg, out_dir, s);
    else run_recession(cfg, out_dir, seed, s);

    std::ofstream os(artifact(out_dir, "summary.csv"));
    os << "key,value\n";
    for (const auto& [k, v] : out.summary) os << k << ',' << format_real(v) << '\n';
    out.exit_code = out.band_failures.empty() ? kExitOk : kExitBand;
    return out;
}

int run_cli(const std::string& tag, const std::string& config_path, const std::string& out_dir, std::uint64_t seed,
            std::ostream& out, std::ostream& err) {
    try {
        const ExperimentConfig cfg = load_config(config_path);
        const RunOutcome res = run_experiment(tag, cfg, out_dir, seed);
        for (const auto& [k, v] : res.summary) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.10g", v);
            out << k << '=' << buf << '\n';
        }
        for (const auto& f : res.band_failures) err << "band failure: " << f << '\n';
        return res.exit_code;
    } catch (const ParseError& e) {
        err << config_path << ": " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitError;
}

}  // namespace degel
