#include "degel/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "degel/errors.hpp"

namespace degel {

namespace {

constexpr double kSandwichTolerance = 1e-10;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Real odd root of b.
double odd_root(double b, int m) {
    if (m == 3) return std::cbrt(b);
    return std::copysign(std::pow(std::abs(b), 1.0 / m), b);
}

bool within_pair(const SymMat2& a, EllipticityPair e) {
    const auto [lo, hi] = a.eigenvalues();
    const double slack = 1e-12 * std::max(1.0, e.Lambda);
    return lo >= e.lambda - slack && hi <= e.Lambda + slack;
}

SymMat2 random_matrix(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double a11 = unit(rng);
    const double a12 = unit(rng);
    const double a22 = unit(rng);
    return {a11, a12, a22};
}

}  // namespace

EllipticityPair EllipticityPair::make(double lambda, double Lambda) {
    if (!(lambda > 0.0) || !(Lambda >= lambda) || !std::isfinite(Lambda)) {
        throw ParameterError("ellipticity requires 0 < lambda <= Lambda < inf");
    }
    return {lambda, Lambda};
}

double Modulus::operator()(double t) const {
    return kind == Kind::Power ? std::pow(t, parameter) : parameter * t;
}

double Modulus::inverse(double y) const {
    if (!(parameter > 0.0) || !std::isfinite(parameter)) {
        throw ParameterError("modulus descriptor is not invertible");
    }
    return kind == Kind::Power ? std::pow(y, 1.0 / parameter) : y / parameter;
}

std::string OperatorSpec::name() const {
    return std::visit(overloaded{
                          [](const PucciPlus&) { return std::string("pucci+"); },
                          [](const PucciMinus&) { return std::string("pucci-"); },
                          [](const LinearTrace&) { return std::string("trace"); },
                          [](const BellmanInf&) { return std::string("bellman-inf"); },
                          [](const MMomentum&) { return std::string("m-momentum"); },
                          [](const NormalizedPLaplacian&) { return std::string("p-laplacian"); },
                          [](const InfinityLaplacian&) { return std::string("infinity-laplacian"); },
                          [](const FrozenAt& f) { return "frozen(" + f.inner->name() + ")"; },
                          [](const Rescaled& r) { return "rescaled(" + r.inner->name() + ")"; },
                      },
                      kind);
}

bool OperatorSpec::gradient_dependent() const {
    return std::visit(overloaded{
                          [](const NormalizedPLaplacian&) { return true; },
                          [](const InfinityLaplacian&) { return true; },
                          [](const FrozenAt& f) { return f.inner->gradient_dependent(); },
                          [](const Rescaled& r) { return r.inner->gradient_dependent(); },
                          [](const auto&) { return false; },
                      },
                      kind);
}

OperatorSpec make_pucci_plus(EllipticityPair e) {
    return {PucciPlus{}, EllipticityPair::make(e.lambda, e.Lambda), std::nullopt, 0.0};
}

OperatorSpec make_pucci_minus(EllipticityPair e) {
    return {PucciMinus{}, EllipticityPair::make(e.lambda, e.Lambda), std::nullopt, 0.0};
}

OperatorSpec make_linear_trace(std::function<SymMat2(Point)> a, EllipticityPair e) {
    e = EllipticityPair::make(e.lambda, e.Lambda);
    if (!a) throw ParameterError("linear trace operator needs a coefficient field");
    if (!within_pair(a(Point{}), e)) throw ParameterError("A(0) violates the declared ellipticity pair");
    return {LinearTrace{std::move(a)}, e, std::nullopt, 0.0};
}

OperatorSpec make_laplacian() {
    return make_linear_trace([](Point) { return SymMat2::identity(); }, {1.0, 1.0});
}

OperatorSpec make_bellman_inf(std::vector<SymMat2> family, EllipticityPair e) {
    e = EllipticityPair::make(e.lambda, e.Lambda);
    if (family.empty()) throw ParameterError("Bellman family must be nonempty");
    for (const auto& a : family) {
        if (!within_pair(a, e)) throw ParameterError("Bellman family member outside [lambda Id, Lambda Id]");
    }
    return {BellmanInf{std::move(family)}, e, std::nullopt, 0.0};
}

OperatorSpec make_m_momentum(int m, std::array<double, 2> sigma, EllipticityPair e) {
    if (m < 3 || m % 2 == 0) throw ParameterError("m-momentum requires an odd m >= 3");
    if (!(sigma[0] > 0.0 && sigma[1] > 0.0)) throw ParameterError("m-momentum requires sigma_j > 0");
    return {MMomentum{m, sigma}, EllipticityPair::make(e.lambda, e.Lambda), std::nullopt, 0.0};
}

OperatorSpec make_normalized_p_laplacian(double p, bool zero_gradient_fallback) {
    if (!(p > 1.0)) throw ParameterError("normalized p-Laplacian requires p > 1");
    return {NormalizedPLaplacian{p, zero_gradient_fallback},
            EllipticityPair::make(std::min(p - 1.0, 1.0), std::max(p - 1.0, 1.0)), std::nullopt, 0.0};
}

OperatorSpec make_infinity_laplacian(double xi_bound) {
    if (!(xi_bound > 0.0)) throw ParameterError("infinity Laplacian needs a positive gradient bound");
    const double hi = std::max(xi_bound * xi_bound, kDegenerateEllipticityFloor);
    return {InfinityLaplacian{}, EllipticityPair::make(kDegenerateEllipticityFloor, hi), std::nullopt, 0.0};
}

OperatorSpec make_frozen_at(Point x0, OperatorSpec inner) {
    OperatorSpec out;
    out.ellipticity = inner.ellipticity;
    out.kind = FrozenAt{x0, std::make_shared<const OperatorSpec>(std::move(inner))};
    return out;
}

EllipticityPair m_momentum_ellipticity(int m, std::array<double, 2> sigma, double bound) {
    if (m < 3 || m % 2 == 0) throw ParameterError("m-momentum requires an odd m >= 3");
    double hi = 0.0;
    for (double s : sigma) {
        if (!(bound < s)) throw ParameterError("eigenvalue box reaches the singular point t = -sigma");
        // t^{m-1} (s^m + t^m)^{1/m - 1} vanishes at t = 0 and grows with |t| on (-s, inf).
        for (double t : {-bound, bound}) {
            const double base = std::pow(s, m) + std::pow(t, m);
            hi = std::max(hi, std::pow(t, m - 1) * std::pow(base, 1.0 / m - 1.0));
        }
    }
    return EllipticityPair::make(kDegenerateEllipticityFloor, std::max(hi, kDegenerateEllipticityFloor));
}

double pucci_plus(const SymMat2& X, EllipticityPair e) {
    const auto [e1, e2] = X.eigenvalues();
    auto weight = [&](double t) { return t > 0.0 ? e.Lambda * t : e.lambda * t; };
    return weight(e1) + weight(e2);
}

double pucci_minus(const SymMat2& X, EllipticityPair e) {
    const auto [e1, e2] = X.eigenvalues();
    auto weight = [&](double t) { return t > 0.0 ? e.lambda * t : e.Lambda * t; };
    return weight(e1) + weight(e2);
}

double normalized_p_laplacian(Vec2 xi, const SymMat2& X, double p, bool zero_gradient_fallback) {
    const double n2 = xi.norm2();
    if (n2 == 0.0) {
        if (!zero_gradient_fallback) throw DegenerateGradientError("normalized p-Laplacian at zero gradient");
        return (1.0 + (p - 2.0) / 2.0) * X.trace();
    }
    return X.trace() + (p - 2.0) * X.quad(xi) / n2;
}

double infinity_laplacian(Vec2 xi, const SymMat2& X) { return X.quad(xi); }

double m_momentum(const SymMat2& X, int m, std::array<double, 2> sigma) {
    if (m < 1 || m % 2 == 0) throw ParameterError("m-momentum requires an odd m");
    const auto [e1, e2] = X.eigenvalues();
    const double ev[2] = {e1, e2};
    double sum = 0.0;
    for (int j = 0; j < 2; ++j) {
        const double s = sigma[static_cast<std::size_t>(j)];
        // s ((1 + r)^{1/m} - 1) keeps F(0) = 0 exact and avoids cancellation for small eigenvalues.
        const double r = std::pow(ev[j] / s, m);
        sum += r > -1.0 ? s * std::expm1(std::log1p(r) / m) : odd_root(std::pow(s, m) + std::pow(ev[j], m), m) - s;
    }
    return sum;
}

double evaluate(const OperatorSpec& op, Point x, Vec2 xi, const SymMat2& X) {
    return std::visit(overloaded{
                          [&](const PucciPlus&) { return pucci_plus(X, op.ellipticity); },
                          [&](const PucciMinus&) { return pucci_minus(X, op.ellipticity); },
                          [&](const LinearTrace& lt) { return lt.coefficients(x).contract(X); },
                          [&](const BellmanInf& b) {
                              double best = std::numeric_limits<double>::infinity();
                              for (const auto& a : b.family) best = std::min(best, a.contract(X));
                              return best;
                          },
                          [&](const MMomentum& mm) { return m_momentum(X, mm.m, mm.sigma); },
                          [&](const NormalizedPLaplacian& pl) {
                              return normalized_p_laplacian(xi, X, pl.p, pl.zero_gradient_fallback);
                          },
                          [&](const InfinityLaplacian&) { return infinity_laplacian(xi, X); },
                          [&](const FrozenAt& f) { return evaluate(*f.inner, f.x0, xi, X); },
                          [&](const Rescaled& r) {
                              const double k = r.kappa, t = r.tau;
                              return t * t / k * evaluate(*r.inner, r.x0 + t * x, (k / t) * xi, (k / (t * t)) * X);
                          },
                      },
                      op.kind);
}

double recession(const OperatorSpec& op, const SymMat2& X, double tau, Point x, Vec2 xi) {
    if (!(tau > 0.0)) throw ParameterError("recession requires tau > 0");
    const double v = tau * evaluate(op, x, xi, X * (1.0 / tau));
    if (!std::isfinite(v)) throw NumericError("recession overflow at tau = " + std::to_string(tau));
    return v;
}

std::vector<double> recession_sequence(const OperatorSpec& op, const SymMat2& X, const std::vector<double>& taus,
                                       Point x, Vec2 xi) {
    std::vector<double> out;
    out.reserve(taus.size());
    for (double t : taus) out.push_back(recession(op, X, t, x, xi));
    return out;
}

SandwichReport sandwich_check(const OperatorSpec& op, int samples, std::uint64_t seed, Point x, Vec2 xi) {
    if (samples < 1) throw ParameterError("sandwich_check needs at least one sample");
    std::mt19937_64 rng(seed);
    SandwichReport report;
    report.samples = samples;
    for (int s = 0; s < samples; ++s) {
        const SymMat2 X = random_matrix(rng);
        const SymMat2 Y = random_matrix(rng);
        const double diff = evaluate(op, x, xi, X) - evaluate(op, x, xi, Y);
        const double lo = pucci_minus(X - Y, op.ellipticity);
        const double hi = pucci_plus(X - Y, op.ellipticity);
        if (diff < lo - kSandwichTolerance) report.violations.push_back({X, Y, diff - lo});
        else if (diff > hi + kSandwichTolerance) report.violations.push_back({X, Y, diff - hi});
    }
    return report;
}

double coefficient_oscillation(const OperatorSpec& op, Point x, Point x0, int samples, std::uint64_t seed, Vec2 xi) {
    if (samples < 1) throw ParameterError("coefficient_oscillation needs at least one sample");
    std::mt19937_64 rng(seed);
    double best = 0.0;
    for (int s = 0; s < samples; ++s) {
        SymMat2 X = random_matrix(rng);
        const double nrm = X.frobenius();
        if (nrm == 0.0) continue;
        X = X * (1.0 / nrm);
        best = std::max(best, std::abs(evaluate(op, x, xi, X) - evaluate(op, x0, xi, X)));
    }
    return best;
}

}  // namespace degel
