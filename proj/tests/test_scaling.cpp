#include <doctest.h>

#include <cmath>
#include <random>

#include "degel/errors.hpp"
#include "degel/scaling.hpp"

using namespace degel;

TEST_CASE("kappa and tau plug-in examples") {
    const Modulus omega{Modulus::Kind::Linear, 1.0};
    const KappaTau kt = compute_kappa_tau(1.0, 1.0, 0.1, 2.0, 2.0, omega, 0.0);
    CHECK(kt.kappa == doctest::Approx(12.0).epsilon(1e-14));
    CHECK(kt.tau == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(compute_kappa_tau(3.5, 0.0, 0.1, 2.0, 2.0, omega, 0.0).kappa == doctest::Approx(4.5));
    // A flat modulus leaves the source term to pick tau = 0.05^{1/4}.
    const KappaTau wide = compute_kappa_tau(1.0, 1.0, 0.1, 2.0, 2.0, Modulus{Modulus::Kind::Linear, 0.01}, 0.0);
    CHECK(wide.tau == doctest::Approx(std::pow(0.05, 0.25)));
    CHECK_THROWS_AS(compute_kappa_tau(1.0, 1.0, 0.1, 2.0, 2.0, Modulus{Modulus::Kind::Linear, 0.0}, 0.0),
                    ParameterError);
    CHECK_THROWS_AS(compute_kappa_tau(1.0, 1.0, 1.5, 2.0, 2.0, omega, 0.0), ParameterError);
}

TEST_CASE("constant source rescales by tau^{p+2}/kappa^{p+1}") {
    ProblemSpec pb;
    pb.op = make_laplacian();
    pb.degeneracy = DegeneracyLaw::make(2, 3, ModulatingFunction::constant(1.0));
    pb.source = ConstantSource{1.0};
    pb.boundary = [](Point) { return 0.0; };
    const ProblemSpec r = rescale_problem(pb, 12.0, 0.1, {0, 0});
    CHECK(source_value(r.source, {0.2, 0.1}, 0.3) == doctest::Approx(1e-4 / 1728.0).epsilon(1e-12));
    CHECK(source_value(r.source, {0, 0}, 0) == doctest::Approx(5.787037037e-8).epsilon(1e-9));
}

TEST_CASE("identity rescaling and trace invariance") {
    ProblemSpec pb;
    pb.op = make_pucci_plus({1, 2});
    pb.degeneracy = DegeneracyLaw::make(1.5, 2.5, ModulatingFunction::power(1.0));
    pb.source = source_of_x([](Point x) { return 1.0 + x.x; });
    pb.boundary = [](Point x) { return x.y; };
    const ProblemSpec id = rescale_problem(pb, 1.0, 1.0, {0, 0});
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    for (int k = 0; k < 50; ++k) {
        const Point x{U(rng), U(rng)};
        const Vec2 xi{U(rng), U(rng)};
        const SymMat2 X{U(rng), U(rng), U(rng)};
        CHECK(pointwise_defect(id, x, xi, X, 0.1) == doctest::Approx(pointwise_defect(pb, x, xi, X, 0.1)));
        CHECK(id.boundary(x) == doctest::Approx(pb.boundary(x)));
    }
    const OperatorSpec lap = rescale_problem(ProblemSpec{make_laplacian()}, 7.0, 0.03, {0.1, 0.1}).op;
    for (int k = 0; k < 50; ++k) {
        const SymMat2 X{U(rng), U(rng), U(rng)};
        CHECK(evaluate(lap, {U(rng), U(rng)}, {1, 0}, X) == doctest::Approx(X.trace()).epsilon(1e-12));
    }
}

TEST_CASE("property: rescaled defect equals the scaled original defect") {
    const std::vector<OperatorSpec> ops{
        make_linear_trace([](Point x) { return SymMat2{1.0 + 0.5 * x.x * x.x, 0.1 * x.y, 1.5}; }, {0.5, 2.5}),
        make_pucci_minus({1, 3}),
        make_normalized_p_laplacian(3.0),
    };
    const double p = 2.0, q = 3.0, kappa = 3.0, tau = 0.2;
    const Point x0{0.1, -0.3};
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    for (const OperatorSpec& op : ops) {
        for (int variant = 0; variant < 2; ++variant) {
            ProblemSpec pb;
            pb.op = op;
            pb.degeneracy = DegeneracyLaw::make(p, q, ModulatingFunction::power(1.0), variant ? 1e-3 : 0.0);
            if (variant) {
                pb.source = DeadCoreSource{[](Point x) { return 2.0 + x.x; }, 0.7};
            } else {
                pb.source = BoundedSource{[](Point x, double u) { return std::sin(x.y) - 0.3 * u; }};
            }
            pb.boundary = [](Point) { return 0.0; };
            const ProblemSpec r = rescale_problem(pb, kappa, tau, x0);
            const double fscale = std::pow(tau, p + 2) / std::pow(kappa, p + 1);
            for (int k = 0; k < 100; ++k) {
                const Point x{U(rng), U(rng)};
                const Vec2 xi{U(rng), U(rng)};
                const SymMat2 X{U(rng), U(rng), U(rng)};
                const double v = U(rng) + 0.5;
                const double lhs = pointwise_defect(r, x, xi, X, v);
                const double rhs =
                    fscale * pointwise_defect(pb, x0 + tau * x, (kappa / tau) * xi, (kappa / (tau * tau)) * X, kappa * v);
                CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
            }
        }
    }
}

TEST_CASE("dyadic A_k examples") {
    CHECK(dyadic_A(2, 0.5, 1.0 / 3.0, 0.0) == doctest::Approx(std::pow(2.0, -8.0 / 3.0)).epsilon(1e-14));
    CHECK(dyadic_A(2, 0.5, 1.0 / 3.0, 0.0) == doctest::Approx(0.157490).epsilon(1e-5));
    CHECK(dyadic_A(1, 0.5, 1.0 / 3.0, 1.0) == doctest::Approx(0.896850).epsilon(1e-5));
    CHECK(dyadic_A(1, 0.3, 0.25, 0.0) == doctest::Approx(std::pow(0.3, 1.25)));
    CHECK_THROWS_AS(dyadic_A(0, 0.5, 0.3, 0.0), ParameterError);
}

TEST_CASE("property: closed-form A_k matches the literal sum") {
    for (double rho : {0.5, 0.3, 0.1}) {
        for (double beta : {0.1, 1.0 / 3.0, 0.9}) {
            for (double g0 : {0.0, 0.5, 2.0}) {
                for (int k = 1; k <= 30; ++k) {
                    const double a = dyadic_A(k, rho, beta, g0), b = dyadic_A_literal(k, rho, beta, g0);
                    CHECK(std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(b)));
                }
            }
        }
    }
}

TEST_CASE("M0 examples") {
    const double exact = 1.0 / (std::pow(2.0, -4.0 / 3.0) * (1.0 - std::pow(2.0, -1.0 / 3.0)));
    CHECK(M0(0.5, 1.0 / 3.0) == doctest::Approx(exact).epsilon(1e-14));
    CHECK(M0(0.5, 1.0 / 3.0) == doctest::Approx(12.2138).epsilon(1e-4));
    CHECK(M0(0.5, 1.0) == doctest::Approx(8.0));
    CHECK_THROWS_AS(M0(1e-250, 0.5), NumericError);
    const DyadicState s = dyadic_state(3, 0.5, 1.0 / 3.0, 0.0);
    CHECK(s.k == 3);
    CHECK(s.M0 == M0(0.5, 1.0 / 3.0));
    CHECK(s.A_k == dyadic_A(3, 0.5, 1.0 / 3.0, 0.0));
}

TEST_CASE("critical radius") {
    CHECK(*critical_radius_r0(1.0, 0.3) == doctest::Approx(1.0));
    CHECK(*critical_radius_r0(0.5, 1.0 / 3.0) == doctest::Approx(0.125));
    CHECK_FALSE(critical_radius_r0(0.0, 0.3).has_value());
    const double r = 0.07, beta = 0.4;
    CHECK(*critical_radius_r0(std::pow(r, beta), beta) == doctest::Approx(r));
}

TEST_CASE("scaling parameter gate") {
    // p = 2 caps beta at 1/3.
    CHECK_NOTHROW(ScalingParams::make(1, 0.5, 0.1, 0.01, 0.5, 0.3, 1.0, {0, 0}, 2.0));
    CHECK_THROWS_AS(ScalingParams::make(1, 0.5, 0.1, 0.01, 0.5, 0.4, 1.0, {0, 0}, 2.0), ParameterError);
    CHECK_THROWS_AS(ScalingParams::make(1, 0.5, 0.1, 0.01, 0.5, 0.3, 0.3, {0, 0}, 2.0), ParameterError);
    CHECK_THROWS_AS(ScalingParams::make(1, 0.5, 0.1, 0.01, 0.6, 0.3, 1.0, {0, 0}, 2.0), ParameterError);
    CHECK_THROWS_AS(ScalingParams::make(1, 0.5, 0.1, 0.1, 0.5, 0.3, 1.0, {0, 0}, 2.0), ParameterError);
    // A large approximation constant shrinks the admissible rho.
    CHECK_THROWS_AS(ScalingParams::make(1, 0.5, 0.1, 0.01, 0.5, 0.3, 1.0, {0, 0}, 2.0, 10.0), ParameterError);
}
