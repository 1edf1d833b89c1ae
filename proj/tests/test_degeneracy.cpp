#include <doctest.h>

#include <cmath>
#include <random>

#include "degel/degeneracy.hpp"
#include "degel/errors.hpp"

using namespace degel;

TEST_CASE("K on hand examples") {
    const auto law = DegeneracyLaw::make(2, 3, ModulatingFunction::constant(0.5));
    CHECK(K(law, {0.1, 0.2}, 0.0) == 0.0);
    CHECK(K(law, {0.1, 0.2}, 1.0) == doctest::Approx(1.5));
    CHECK(K(law, {0.1, 0.2}, 2.0) == doctest::Approx(8.0));
    CHECK_THROWS_AS(K(law, {0, 0}, -1e-3), ParameterError);
}

TEST_CASE("regularized K") {
    const auto plain = DegeneracyLaw::make(2, 3, ModulatingFunction::constant(0.7));
    CHECK(K_regularized(plain, {0, 0}, 0.3) == K(plain, {0, 0}, 0.3));
    const auto reg = DegeneracyLaw::make(2, 3, ModulatingFunction::constant(0.7), 1e-6);
    CHECK(K_regularized(reg, {0, 0}, 0.0) == doctest::Approx(1e-12 + 0.7e-18).epsilon(1e-12));
    CHECK(K_regularized(reg, {0, 0}, 0.25) == K(reg, {0, 0}, 0.25));
    CHECK(H(reg, {0, 0}, {0.3, 0.4}) == K(reg, {0, 0}, 0.5));
}

TEST_CASE("multi-phase K") {
    const ModulatingFunction one = ModulatingFunction::constant(1.0);
    const auto law = DegeneracyLaw::make(2, 3, one);
    CHECK(multi_phase_K(2, {{3, one}}, {0.2, 0}, 0.7) == doctest::Approx(K(law, {0.2, 0}, 0.7)));
    CHECK(multi_phase_K(2, {{3, one}, {4, one}}, {0, 0}, 1.0) == doctest::Approx(3.0));
    CHECK(multi_phase_K(2, {{3, one}, {4, ModulatingFunction::constant(2.0)}}, {0, 0}, 2.0) == doctest::Approx(44.0));
    CHECK_THROWS_AS(multi_phase_K(2, {{4, one}, {3, one}}, {0, 0}, 1.0), ParameterError);
    CHECK_THROWS_AS(multi_phase_K(2, {{1.5, one}}, {0, 0}, 1.0), ParameterError);
}

TEST_CASE("law validation") {
    const ModulatingFunction a = ModulatingFunction::constant(1.0);
    CHECK_THROWS_AS(DegeneracyLaw::make(0, 1, a), ParameterError);
    CHECK_THROWS_AS(DegeneracyLaw::make(3, 2, a), ParameterError);
    CHECK_THROWS_AS(DegeneracyLaw::make(2, 3, a, -1.0), ParameterError);
    CHECK_THROWS_AS(DegeneracyLaw::make(2, 3, a, 0.0, 1.5, 2.0), ParameterError);
    CHECK_THROWS_AS(ModulatingFunction::constant(-0.1), ParameterError);
    CHECK_THROWS_AS(ModulatingFunction::table({0.0, 0.5}, {1.0, -1.0}), ParameterError);
    CHECK_THROWS_AS(ModulatingFunction::table({0.5, 0.2}, {1.0, 1.0}), ParameterError);
}

TEST_CASE("modulating function profiles") {
    CHECK(ModulatingFunction::power(1.0)({0.3, 0.4}) == doctest::Approx(0.5));
    CHECK(ModulatingFunction::power(2.0)({0.3, 0.4}) == doctest::Approx(0.25));
    const auto t = ModulatingFunction::table({0.0, 0.5, 1.0}, {1.0, 3.0, 0.0});
    CHECK(t({0, 0}) == doctest::Approx(1.0));
    CHECK(t({0.25, 0}) == doctest::Approx(2.0));
    CHECK(t({0, 0.75}) == doctest::Approx(1.5));
    CHECK(t({2.0, 0}) == doctest::Approx(0.0));
    const auto c = ModulatingFunction::power(1.0).composed(2.0, {0.5, 0.0}, 0.5);
    CHECK(c({0.2, 0.0}) == doctest::Approx(2.0 * 0.6));
    CHECK(ModulatingFunction::power(1.0).sup_on_ball({0.2, 0}, 0.3) == doctest::Approx(0.5));
}

TEST_CASE("property: K is increasing in s, vanishes at 0 and is monotone in a") {
    const auto lo = DegeneracyLaw::make(1.5, 2.5, ModulatingFunction::constant(0.2));
    const auto hi = DegeneracyLaw::make(1.5, 2.5, ModulatingFunction::constant(0.9));
    CHECK(K(lo, {0, 0}, 0.0) == 0.0);
    CHECK(K(lo, {0, 0}, 1e-12) < 1e-17);
    double prev = 0.0;
    for (double s = 1e-3; s < 5.0; s *= 1.3) {
        const double v = K(lo, {0, 0}, s);
        CHECK(v > prev);
        CHECK(K(hi, {0, 0}, s) >= v);
        prev = v;
    }
}

TEST_CASE("property: scaling identity for the rescaled modulating function") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-0.5, 0.5), S(0.0, 3.0);
    const double p = 2.0, q = 3.5, kappa = 4.0, tau = 0.2;
    const Point x0{0.1, -0.2};
    const ModulatingFunction a = ModulatingFunction::power(0.7);
    const auto law = DegeneracyLaw::make(p, q, a);
    const auto scaled = DegeneracyLaw::make(p, q, a.composed(std::pow(tau / kappa, p - q), x0, tau));
    for (int k = 0; k < 200; ++k) {
        const Point x{U(rng), U(rng)};
        const double s = S(rng);
        const double lhs = K(scaled, x, s);
        const double rhs = std::pow(tau / kappa, p) * K(law, x0 + tau * x, kappa / tau * s);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("property: H = K brackets with L1 = L2 = 1") {
    const auto law = DegeneracyLaw::make(2, 3, ModulatingFunction::power(1.0));
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const Point x{U(rng), U(rng)};
        const Vec2 xi{U(rng), U(rng)};
        const double k_val = K(law, x, xi.norm());
        CHECK(law.L1 * k_val <= H(law, x, xi));
        CHECK(H(law, x, xi) <= law.L2 * k_val);
    }
}
