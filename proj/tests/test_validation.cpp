#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "degel/barriers.hpp"
#include "degel/errors.hpp"
#include "degel/validation.hpp"

using namespace degel;

namespace {

ProblemSpec poisson(double c, std::function<double(Point)> g) {
    ProblemSpec pb;
    pb.op = make_laplacian();
    pb.source = ConstantSource{c};
    pb.boundary = std::move(g);
    return pb;
}

SolverConfig tight(double tol) {
    SolverConfig cfg;
    cfg.tol = tol;
    cfg.max_iter = 2000000;
    return cfg;
}

}  // namespace

TEST_CASE("solved fields are certified at ten times the solver tolerance") {
    const Grid2D g = Grid2D::make(33, {0, 0}, 1.0);
    const ProblemSpec pb = poisson(1.0, [](Point x) { return 0.25 * x.norm2() + x.x * x.y; });
    const Solution s = solve(pb, g, tight(1e-9));
    REQUIRE(s.report.converged);
    const ViscosityReport r = check_viscosity(s.u, pb, 1e-8);
    CHECK(r.checked == g.count(NodeKind::Interior));
    CHECK(r.certified());

    // Degenerate law with f = 0: flat-gradient nodes do not occur for this boundary.
    ProblemSpec dg = poisson(0.0, [](Point x) { return x.x + 0.3 * (x.x * x.x - x.y * x.y); });
    dg.degeneracy = DegeneracyLaw::make(2, 3, ModulatingFunction::power(1.0));
    const Solution sd = solve(dg, g, tight(1e-9));
    REQUIRE(sd.report.converged);
    CHECK(check_viscosity(sd.u, dg, 1e-8).certified());
}

TEST_CASE("concave cone is a supersolution but not a subsolution of the Laplace equation") {
    const Grid2D g = Grid2D::make(33, {0, 0}, 1.0);
    const ScalarField cone = ScalarField::sample(g, [](Point x) { return -x.norm(); });
    const ProblemSpec pb = poisson(0.0, [](Point x) { return -x.norm(); });
    const ViscosityReport r = check_viscosity(cone, pb, 1e-12);
    CHECK(r.super_violations.empty());
    REQUIRE_FALSE(r.sub_violations.empty());
    const Node origin = g.nearest_node({0, 0});
    CHECK(std::any_of(r.sub_violations.begin(), r.sub_violations.end(),
                      [&](const ViscosityViolation& v) { return v.node == origin && v.margin > 0.0; }));
}

TEST_CASE("sampled sharp example passes away from its critical point") {
    // At the origin the gradient vanishes, so H kills every upper test function and the
    // subsolution inequality cannot hold on the grid. Everywhere else the truncation
    // error of order h^{2/3} bounds the margin.
    for (int n : {33, 65}) {
        const Grid2D g = Grid2D::make(n, {0, 0}, 1.0);
        ProblemSpec pb;
        pb.op = make_laplacian();
        pb.degeneracy = DegeneracyLaw::make(2, 3, ModulatingFunction::power(1.0));
        pb.source = source_of_x([](Point x) { return exact_example_source(x, 2, 3, 2, [](Point y) { return y.norm(); }); });
        pb.boundary = [](Point x) { return exact_example_solution(x, 2); };
        const ScalarField v = ScalarField::sample(g, pb.boundary);
        const ViscosityReport r = check_viscosity(v, pb, 20.0 * std::pow(g.h(), 2.0 / 3.0));
        CAPTURE(n);
        CHECK(r.super_violations.empty());
        for (const ViscosityViolation& viol : r.sub_violations) {
            CHECK(g.coord(viol.node).norm() <= 2.0 * g.h());
        }
    }
}

TEST_CASE("comparison audits") {
    const Grid2D g = Grid2D::make(33, {0, 0}, 1.0);
    auto base = [](Point x) { return x.x * x.y; };
    const ProblemSpec sub = poisson(0.5, base);

    const ComparisonReport same = comparison_audit(sub, sub, g, tight(1e-9));
    CHECK(same.min_difference == 0.0);
    CHECK(same.passed);
    CHECK(same.h == g.h());

    ProblemSpec lifted = sub;
    lifted.boundary = [&](Point x) { return base(x) + 0.1; };
    const ComparisonReport shift = comparison_audit(sub, lifted, g, tight(1e-9));
    CHECK(shift.passed);
    CHECK(shift.min_difference >= -1e-8);
    CHECK(shift.min_difference <= 0.1 + 1e-8);

    const ProblemSpec weaker = poisson(0.0, base);
    const ComparisonReport forcing = comparison_audit(sub, weaker, g, tight(1e-9));
    CHECK(forcing.passed);
    CHECK(forcing.min_difference >= -1e-8);
}

TEST_CASE("property: comparison is monotone in boundary shifts") {
    const Grid2D g = Grid2D::make(25, {0, 0}, 1.0);
    auto base = [](Point x) { return std::sin(x.x) + x.y * x.y; };
    ProblemSpec sub = poisson(0.2, base);
    sub.op = make_pucci_minus({1, 2});
    double prev = -INFINITY;
    for (double c : {0.0, 0.01, 0.1, 0.5}) {
        ProblemSpec sup = sub;
        sup.boundary = [&base, c](Point x) { return base(x) + c; };
        const ComparisonReport r = comparison_audit(sub, sup, g, tight(1e-9));
        CHECK(r.passed);
        CHECK(r.min_difference >= prev - 1e-9);
        prev = r.min_difference;
    }
}

TEST_CASE("comparison preconditions") {
    const Grid2D g = Grid2D::make(17, {0, 0}, 1.0);
    const ProblemSpec a = poisson(0.0, [](Point) { return 1.0; });
    const ProblemSpec b = poisson(0.0, [](Point x) { return 1.0 - 0.1 * x.x; });
    CHECK_THROWS_AS(comparison_audit(a, b, g), PreconditionError);
    ProblemSpec c = a;
    c.op = make_pucci_plus({1, 2});
    CHECK_THROWS_AS(comparison_audit(a, c, g), PreconditionError);
}

TEST_CASE("violation CSV layout") {
    ViscosityReport r;
    r.super_violations.push_back({{3, 4}, 0.5});
    r.sub_violations.push_back({{7, 8}, 1.25});
    std::ostringstream os;
    write_viscosity_csv(os, r);
    CHECK(os.str() == "ix,iy,kind,margin\n3,4,super,0.5\n7,8,sub,1.25\n");
}
