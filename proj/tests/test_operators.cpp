#include <doctest.h>

#include <cmath>
#include <random>

#include "degel/errors.hpp"
#include "degel/operators.hpp"

using namespace degel;

namespace {

SymMat2 random_sym(std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> U(-scale, scale);
    return {U(rng), U(rng), U(rng)};
}

}  // namespace

TEST_CASE("closed-form eigenvalues satisfy trace and determinant identities") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 1000; ++k) {
        const SymMat2 X = random_sym(rng, 3.0);
        const auto [lo, hi] = X.eigenvalues();
        CHECK(lo <= hi);
        CHECK(std::abs(lo + hi - X.trace()) < 1e-12);
        CHECK(std::abs(lo * hi - X.det()) < 1e-12);
    }
}

TEST_CASE("pucci extremal operators on hand examples") {
    const EllipticityPair e{1.0, 2.0};
    CHECK(pucci_plus(SymMat2{}, e) == 0.0);
    CHECK(pucci_plus(SymMat2::diag(1, -1), e) == doctest::Approx(1.0));
    CHECK(pucci_plus(SymMat2::identity(), e) == doctest::Approx(4.0));
    CHECK(pucci_minus(SymMat2{}, e) == 0.0);
    CHECK(pucci_minus(SymMat2::diag(1, -1), e) == doctest::Approx(-1.0));
}

TEST_CASE("property: pucci ordering, duality, homogeneity and subadditivity") {
    const EllipticityPair e{0.5, 3.0};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> C(0.01, 10.0);
    for (int k = 0; k < 1000; ++k) {
        const SymMat2 X = random_sym(rng), Y = random_sym(rng);
        CHECK(pucci_minus(X, e) <= pucci_plus(X, e));
        CHECK(std::abs(pucci_minus(X, e) + pucci_plus(X * -1.0, e)) < 1e-12);
        const double c = C(rng);
        CHECK(std::abs(pucci_plus(c * X, e) - c * pucci_plus(X, e)) < 1e-12 * (1 + c));
        CHECK(pucci_plus(X + Y, e) <= pucci_plus(X, e) + pucci_plus(Y, e) + 1e-10);
    }
    // Equality only for lambda == Lambda or X == 0.
    CHECK(pucci_minus(SymMat2::diag(1, 2), e) < pucci_plus(SymMat2::diag(1, 2), e));
    const EllipticityPair iso{2.0, 2.0};
    const SymMat2 X{0.3, -0.7, 0.1};
    CHECK(pucci_minus(X, iso) == doctest::Approx(pucci_plus(X, iso)));
}

TEST_CASE("normalized p-Laplacian") {
    const SymMat2 X{0.4, -0.3, 1.2};
    CHECK(normalized_p_laplacian({0.3, -2.0}, X, 2.0) == doctest::Approx(X.trace()));
    CHECK(normalized_p_laplacian({1, 0}, SymMat2::identity(), 3.0) == doctest::Approx(3.0));
    CHECK(normalized_p_laplacian({1, 1}, SymMat2{}, 3.0) == 0.0);
    CHECK_THROWS_AS(normalized_p_laplacian({0, 0}, X, 3.0), DegenerateGradientError);
    // Direction average (1 + (p-2)/N) tr X at xi = 0.
    CHECK(normalized_p_laplacian({0, 0}, SymMat2::identity(), 4.0, true) == doctest::Approx(4.0));
    // Linear in X for fixed xi.
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        const SymMat2 A = random_sym(rng), B = random_sym(rng);
        const Vec2 xi{0.6, -0.2};
        CHECK(normalized_p_laplacian(xi, A + 2.5 * B, 3.5) ==
              doctest::Approx(normalized_p_laplacian(xi, A, 3.5) + 2.5 * normalized_p_laplacian(xi, B, 3.5)));
    }
}

TEST_CASE("infinity Laplacian") {
    CHECK(infinity_laplacian({0, 0}, SymMat2{1, 2, 3}) == 0.0);
    CHECK(infinity_laplacian({1, 0}, SymMat2::diag(5, -7)) == doctest::Approx(5.0));
    CHECK(infinity_laplacian({1, 1}, SymMat2::identity()) == doctest::Approx(2.0));
}

TEST_CASE("m-momentum operator") {
    const std::array<double, 2> s{1.0, 1.0};
    CHECK(m_momentum(SymMat2{}, 3, s) == 0.0);
    // 2^{1/3} + 9^{1/3} - 2, mpmath to 30 digits.
    CHECK(m_momentum(SymMat2::diag(1, 2), 3, s) == doctest::Approx(1.34000487294677727929726743164).epsilon(1e-14));
    // (1 + t^3)^{1/3} - 1 = t^3/3 + O(t^6): flat to third order at the origin.
    for (double t : {1e-1, 1e-2, 1e-3}) {
        CHECK(std::abs(m_momentum(SymMat2::diag(t, 0), 3, s) - t * t * t / 3.0) < t * t * t * t * t * t);
    }
    // Negative eigenvalues use the real odd root.
    CHECK(std::isfinite(m_momentum(SymMat2::diag(-0.5, -0.9), 3, s)));
    CHECK_THROWS_AS(make_m_momentum(4, s, {1, 1}), ParameterError);
}

TEST_CASE("normalization F(x, xi, 0) = 0 for the zoo") {
    const std::vector<OperatorSpec> zoo{
        make_pucci_plus({1, 2}),
        make_pucci_minus({1, 2}),
        make_laplacian(),
        make_linear_trace([](Point x) { return (1.0 + x.norm()) * SymMat2::identity(); }, {1, 3}),
        make_bellman_inf({SymMat2::diag(1, 2), SymMat2::diag(2, 1), SymMat2{1.5, 0.3, 1.5}}, {1, 2}),
        make_m_momentum(3, {3, 3}, m_momentum_ellipticity(3, {3, 3}, 2.0)),
        make_normalized_p_laplacian(3.0),
        make_infinity_laplacian(1.0),
        make_frozen_at({0.3, 0.1}, make_pucci_plus({1, 2})),
    };
    for (const auto& op : zoo) {
        CAPTURE(op.name());
        CHECK(evaluate(op, {0.2, -0.4}, {0.5, 0.5}, SymMat2{}) == 0.0);
    }
}

TEST_CASE("sandwich check: every zoo operator against its declared pair") {
    const std::vector<OperatorSpec> zoo{
        make_pucci_plus({1, 2}),
        make_pucci_minus({0.5, 4}),
        make_laplacian(),
        make_linear_trace([](Point x) { return (1.0 + x.norm()) * SymMat2::identity(); }, {1, 3}),
        make_bellman_inf({SymMat2::diag(1, 2), SymMat2::diag(2, 1), SymMat2{1.5, 0.3, 1.5}}, {1, 2}),
        make_m_momentum(3, {3, 3}, m_momentum_ellipticity(3, {3, 3}, 2.0)),
        make_normalized_p_laplacian(3.0),
        make_normalized_p_laplacian(1.5),
        make_infinity_laplacian(1.0),
        make_frozen_at({0.3, 0.1}, make_linear_trace([](Point x) { return (1.0 + x.norm()) * SymMat2::identity(); }, {1, 3})),
    };
    for (const auto& op : zoo) {
        CAPTURE(op.name());
        const SandwichReport r = sandwich_check(op, 1000, 42, {0.1, 0.2}, {1.0, 0.0});
        CHECK(r.samples == 1000);
        CHECK(r.ok());
    }
}

TEST_CASE("m-momentum ellipticity from the derivative range") {
    // t^2 (27 + t^3)^{-2/3} at t = -2, mpmath.
    const EllipticityPair e = m_momentum_ellipticity(3, {3, 3}, 2.0);
    CHECK(e.Lambda == doctest::Approx(0.56176876815198839312).epsilon(1e-13));
    CHECK(e.lambda == kDegenerateEllipticityFloor);
    CHECK_THROWS_AS(m_momentum_ellipticity(3, {1, 1}, 1.0), ParameterError);
}

TEST_CASE("sandwich check detects an understated pair") {
    OperatorSpec op = make_linear_trace([](Point) { return SymMat2::diag(1, 3); }, {1, 3});
    op.ellipticity = {1.0, 1.5};
    CHECK_FALSE(sandwich_check(op, 200, 1).ok());
}

TEST_CASE("recession profiles") {
    const SymMat2 X = SymMat2::diag(1, 2);
    const OperatorSpec mm = make_m_momentum(3, {1, 1}, {1e-12, 1.0});
    CHECK(std::abs(recession(mm, X, 1e-4) - 3.0) < 1e-3);
    const OperatorSpec lin = make_linear_trace([](Point) { return SymMat2::identity(); }, {1, 1});
    const OperatorSpec pp = make_pucci_plus({1, 2});
    const SymMat2 Y{0.3, -0.8, -0.1};
    for (double tau : {1.0, 1e-2, 1e-5}) {
        CHECK(recession(lin, Y, tau) == doctest::Approx(Y.trace()));
        CHECK(recession(pp, Y, tau) == doctest::Approx(pucci_plus(Y, {1, 2})));
    }
    CHECK_THROWS_AS(recession(pp, Y, 0.0), ParameterError);
}

TEST_CASE("property: m-momentum recession error decreases with tau") {
    const OperatorSpec mm = make_m_momentum(3, {1, 1}, {1e-12, 1.0});
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        SymMat2 X = random_sym(rng);
        X = X * (1.0 / std::max(1.0, X.frobenius()));
        const auto seq = recession_sequence(mm, X, {1e-1, 1e-2, 1e-3, 1e-4, 1e-5});
        double prev = INFINITY;
        for (double v : seq) {
            const double err = std::abs(v - X.trace());
            CHECK(err <= prev);
            prev = err;
        }
    }
}

TEST_CASE("coefficient oscillation") {
    const OperatorSpec lin = make_linear_trace([](Point x) { return (1.0 + x.norm()) * SymMat2::identity(); }, {1, 2});
    CHECK(coefficient_oscillation(lin, {0.3, 0.2}, {0.3, 0.2}, 200) == 0.0);
    const double est = coefficient_oscillation(lin, {0.5, 0}, {0, 0}, 20000, 9);
    CHECK(est <= 0.70710678118654752 + 1e-12);
    CHECK(est >= 0.69);
    CHECK(coefficient_oscillation(make_pucci_plus({1, 2}), {0.5, 0.5}, {0, 0}, 500) == 0.0);
}

TEST_CASE("modulus descriptors and their inverses") {
    const Modulus lin{Modulus::Kind::Linear, 2.0};
    CHECK(lin.inverse(lin(0.3)) == doctest::Approx(0.3));
    const Modulus pw{Modulus::Kind::Power, 0.5};
    CHECK(pw.inverse(pw(0.09)) == doctest::Approx(0.09));
    CHECK_THROWS_AS((Modulus{Modulus::Kind::Linear, 0.0}).inverse(0.1), ParameterError);
}

TEST_CASE("constructors validate ellipticity data") {
    CHECK_THROWS_AS(EllipticityPair::make(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(EllipticityPair::make(2.0, 1.0), ParameterError);
    CHECK_THROWS_AS(make_bellman_inf({SymMat2::diag(0.5, 1)}, {1, 2}), ParameterError);
    CHECK_THROWS_AS(make_normalized_p_laplacian(1.0), ParameterError);
}
