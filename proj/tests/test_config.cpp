#include <doctest.h>

#include <string>

#include "degel/config.hpp"
#include "degel/errors.hpp"

using namespace degel;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal text yields the documented defaults") {
    const ExperimentConfig c = parse_config("experiment = solve\n");
    CHECK(c.experiment == "solve");
    CHECK(c.n == 65);
    CHECK(c.radius == 1.0);
    CHECK(c.op == "laplacian");
    CHECK(c.degeneracy);
    CHECK(c.p == 2.0);
    CHECK(c.q == 3.0);
    CHECK(c.eps_reg == 1e-8);
    CHECK(c.tol == 1e-7);
    CHECK(c.dt_safety == 0.4);
    CHECK(c.max_iter == 500000);
    CHECK(c.a.kind == "const");
    CHECK(c.obstacle.kind == "none");
    CHECK(c.r_min == "4h");
    CHECK(c.per_decade == 8);
    CHECK(c.deltas == std::vector<double>{1e-1, 1e-2, 1e-3});
    CHECK(c.lines.at("experiment") == 1);
    CHECK(parse_config("").experiment.empty());
}

TEST_CASE("full text with comments and sections") {
    const ExperimentConfig c = parse_config(
        "# header\n"
        "experiment = exponent   # trailing comment\n"
        "\n"
        "n = 129\n"
        "operator = pucci+\n"
        "operator.lambda = 1\n"
        "operator.Lambda = 2.5\n"
        "a = power:1\n"
        "source = deadcore:100\n"
        "mu = 0.5\n"
        "boundary = plane:1:-0.5\n"
        "obstacle = bump:0.2:0.6\n"
        "analysis.x0 = 0.1, -0.2\n"
        "analysis.r_max = 0.3\n"
        "approximation.deltas = 0.1,0.01\n"
        "solver.monotone_pucci = true\n");
    CHECK(c.n == 129);
    CHECK(c.op == "pucci+");
    CHECK(c.op_Lambda == 2.5);
    CHECK(c.a.kind == "power");
    CHECK(c.a.args == std::vector<double>{1.0});
    CHECK(c.source.kind == "deadcore");
    CHECK(c.boundary.args == std::vector<double>{1.0, -0.5});
    CHECK(c.obstacle.args == std::vector<double>{0.2, 0.6});
    CHECK(c.x0.x == 0.1);
    CHECK(c.x0.y == -0.2);
    CHECK(c.deltas.size() == 2);
    CHECK(c.monotone_pucci);
    CHECK(c.lines.at("n") == 4);
}

TEST_CASE("grid and reaction preconditions are reported with their line") {
    const std::string even = error_of("experiment = solve\nn = 128\n");
    CHECK(even.find("line 2") != std::string::npos);
    CHECK(even.find("n must be odd") != std::string::npos);
    const std::string mu = error_of("p = 2\nmu = 3.5\n");
    CHECK(mu.find("line 2") != std::string::npos);
    CHECK(mu.find("mu < p+1 required") != std::string::npos);
    CHECK_FALSE(error_of("n = 7\n").empty());
}

TEST_CASE("unknown keys, duplicates and type mismatches") {
    CHECK(error_of("colour = blue\n").find("line 1") != std::string::npos);
    CHECK(error_of("n = 33\nn = 65\n").find("line 2") != std::string::npos);
    CHECK(error_of("n = abc\n").find("expected an integer") != std::string::npos);
    CHECK(error_of("solver.tol = 1e-7x\n").find("expected a real number") != std::string::npos);
    CHECK(error_of("degeneracy = maybe\n").find("expected a boolean") != std::string::npos);
    CHECK_FALSE(error_of("n 65\n").empty());
    CHECK_FALSE(error_of("experiment = dance\n").empty());
    CHECK_FALSE(error_of("operator = biharmonic\n").empty());
    CHECK_FALSE(error_of("solver.dt_safety = 0.5\n").empty());
    CHECK_FALSE(error_of("p = 3\nq = 2\n").empty());
    CHECK_FALSE(error_of("source = magic:1\n").empty());
}

TEST_CASE("a-spec grammar") {
    CHECK(parse_config("a = const:0.5\n").a.args == std::vector<double>{0.5});
    CHECK(parse_config("a = power:2\n").a.kind == "power");
    const ExperimentConfig t = parse_config("a = table:profiles/a.csv\n");
    CHECK(t.a.kind == "table");
    CHECK(t.a.raw == "profiles/a.csv");
    CHECK_FALSE(error_of("a = gauss:1\n").empty());
    CHECK_FALSE(error_of("a = const\n").empty());
    CHECK_FALSE(error_of("a = power:x\n").empty());
    CHECK_FALSE(error_of("a = table:\n").empty());
}

TEST_CASE("tagged specs and lengths") {
    const TaggedSpec s = parse_tagged(" bump : 0.2 : 0.6 ");
    CHECK(s.kind == "bump");
    CHECK(s.args == std::vector<double>{0.2, 0.6});
    CHECK(parse_tagged("exact").args.empty());
    CHECK_THROWS_AS(parse_tagged(""), ParameterError);
    CHECK(resolve_length("4h", 0.125) == 0.5);
    CHECK(resolve_length("0.25", 0.125) == 0.25);
    CHECK_THROWS_AS(resolve_length("fourh", 0.1), ParameterError);
    CHECK(experiment_tags().size() == 8);
}
