#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "degel/types.hpp"

namespace degel {

/// Ellipticity constants 0 < lambda <= Lambda.
struct EllipticityPair {
    double lambda = 1.0;
    double Lambda = 1.0;

    /// Throws ParameterError unless 0 < lambda <= Lambda < inf.
    static EllipticityPair make(double lambda, double Lambda);
};

/// Modulus of continuity descriptor for the x-dependence of F.
struct Modulus {
    enum class Kind { Power, Linear };
    Kind kind = Kind::Linear;
    /// exponent for Power (omega(t) = t^alpha), slope for Linear (omega(t) = slope t)
    double parameter = 1.0;

    double operator()(double t) const;
    /// Throws ParameterError when the descriptor cannot be inverted.
    double inverse(double y) const;
};

// Operator variants. Each one evaluates F(x, xi, X).

struct PucciPlus {};
struct PucciMinus {};

struct LinearTrace {
    /// Coefficient field A(x); F = tr(A(x) X).
    std::function<SymMat2(Point)> coefficients;
};

struct BellmanInf {
    /// F = min over the family of tr(A X).
    std::vector<SymMat2> family;
};

struct MMomentum {
    int m = 3;
    std::array<double, 2> sigma{1.0, 1.0};
};

struct NormalizedPLaplacian {
    double p = 2.0;
    /// At xi = 0 use the direction average (1 + (p-2)/N) tr X instead of throwing.
    bool zero_gradient_fallback = true;
};

struct InfinityLaplacian {};

struct OperatorSpec;

struct FrozenAt {
    Point x0;
    std::shared_ptr<const OperatorSpec> inner;
};

/// tau^2/kappa F(x0 + tau x, (kappa/tau) xi, (kappa/tau^2) X).
struct Rescaled {
    double kappa = 1.0;
    double tau = 1.0;
    Point x0;
    std::shared_ptr<const OperatorSpec> inner;
};

using OperatorKind = std::variant<PucciPlus, PucciMinus, LinearTrace, BellmanInf, MMomentum, NormalizedPLaplacian,
                                  InfinityLaplacian, FrozenAt, Rescaled>;

struct OperatorSpec {
    OperatorKind kind;
    EllipticityPair ellipticity;
    std::optional<Modulus> modulus;
    double C_F = 0.0;

    /// Short human-readable tag, e.g. "pucci+".
    std::string name() const;
    /// True for variants whose value depends on xi.
    bool gradient_dependent() const;
};

// Constructors that validate their inputs.
OperatorSpec make_pucci_plus(EllipticityPair e);
OperatorSpec make_pucci_minus(EllipticityPair e);
/// A(x) is trusted to stay within [lambda Id, Lambda Id]; the constant case is checked.
OperatorSpec make_linear_trace(std::function<SymMat2(Point)> a, EllipticityPair e);
OperatorSpec make_laplacian();
/// Every member of the family must satisfy lambda Id <= A <= Lambda Id.
OperatorSpec make_bellman_inf(std::vector<SymMat2> family, EllipticityPair e);
OperatorSpec make_m_momentum(int m, std::array<double, 2> sigma, EllipticityPair e);
/// Ellipticity (min(p-1,1), max(p-1,1)).
OperatorSpec make_normalized_p_laplacian(double p, bool zero_gradient_fallback = true);
/// Declared pair for |xi| <= xi_bound: (floor, xi_bound^2).
OperatorSpec make_infinity_laplacian(double xi_bound = 1.0);
OperatorSpec make_frozen_at(Point x0, OperatorSpec inner);

/// Lower constant used where the exact lower ellipticity bound is zero.
inline constexpr double kDegenerateEllipticityFloor = 1e-12;

/// Ellipticity pair of the m-momentum operator when every eigenvalue that
/// it sees lies in [-bound, bound]: the range of t -> d/dt (s^m + t^m)^{1/m}.
/// Throws ParameterError if the box reaches a singular point t = -sigma_j.
EllipticityPair m_momentum_ellipticity(int m, std::array<double, 2> sigma, double bound);

// Closed-form evaluators.
double pucci_plus(const SymMat2& X, EllipticityPair e);
double pucci_minus(const SymMat2& X, EllipticityPair e);
double normalized_p_laplacian(Vec2 xi, const SymMat2& X, double p, bool zero_gradient_fallback = false);
double infinity_laplacian(Vec2 xi, const SymMat2& X);
double m_momentum(const SymMat2& X, int m, std::array<double, 2> sigma);

/// F(x, xi, X) for any operator variant.
double evaluate(const OperatorSpec& op, Point x, Vec2 xi, const SymMat2& X);

/// tau F(x, xi, X / tau). Throws NumericError on overflow.
double recession(const OperatorSpec& op, const SymMat2& X, double tau, Point x = {}, Vec2 xi = {1.0, 0.0});

/// recession() over a sequence of tau values.
std::vector<double> recession_sequence(const OperatorSpec& op, const SymMat2& X, const std::vector<double>& taus,
                                       Point x = {}, Vec2 xi = {1.0, 0.0});

struct SandwichViolation {
    SymMat2 X;
    SymMat2 Y;
    /// Amount by which the lower (negative) or upper (positive) bound is missed.
    double margin = 0.0;
};

struct SandwichReport {
    int samples = 0;
    std::vector<SandwichViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks M-(X-Y) <= F(x,X) - F(x,Y) <= M+(X-Y) on random pairs with
/// entries in [-1,1] (tolerance 1e-10).
SandwichReport sandwich_check(const OperatorSpec& op, int samples, std::uint64_t seed, Point x = {},
                              Vec2 xi = {1.0, 0.0});

/// Monte-Carlo estimate of sup |F(x,X) - F(x0,X)| over unit-Frobenius X.
double coefficient_oscillation(const OperatorSpec& op, Point x, Point x0, int samples, std::uint64_t seed = 0,
                               Vec2 xi = {1.0, 0.0});

}  // namespace degel
