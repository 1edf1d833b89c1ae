#include "degel/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "degel/errors.hpp"

namespace degel {

ScalingParams ScalingParams::make(double kappa, double tau, double delta, double iota, double rho, double beta,
                                  double alpha_F, Point x0, double p, double C) {
    if (!(kappa > 0.0)) throw ParameterError("kappa must be positive");
    if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("tau must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0,1)");
    if (!(alpha_F > 0.0 && alpha_F <= 1.0)) throw ParameterError("alpha_F must lie in (0,1]");
    if (!(p >= 0.0)) throw ParameterError("p must be nonnegative");
    if (!(beta > 0.0 && beta < alpha_F && beta <= 1.0 / (p + 1.0))) {
        throw ParameterError("beta must lie in (0, alpha_F) and satisfy beta <= 1/(p+1)");
    }
    if (!(C > 0.0)) throw ParameterError("approximation constant must be positive");
    const double rho_max = std::min(0.5, std::pow(3.0 / (4.0 * C), 1.0 / (alpha_F - beta)));
    if (!(rho > 0.0 && rho <= rho_max)) throw ParameterError("rho exceeds min(1/2, (3/(4C))^{1/(alpha_F-beta)})");
    if (!(iota > 0.0 && iota <= std::pow(rho, 1.0 + beta) / 8.0)) {
        throw ParameterError("iota must lie in (0, rho^{1+beta}/8]");
    }
    return {kappa, tau, delta, iota, rho, beta, alpha_F, x0};
}

KappaTau compute_kappa_tau(double norm_u, double norm_f, double delta, double p, double dist, const Modulus& omega,
                           double C_F) {
    if (!(norm_u >= 0.0 && norm_f >= 0.0 && C_F >= 0.0)) throw ParameterError("norms and C_F must be nonnegative");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0,1)");
    if (!(p >= 0.0) || !(dist > 0.0)) throw ParameterError("p must be >= 0 and dist > 0");
    KappaTau kt;
    kt.kappa = norm_u + 1.0 + std::pow(norm_f, 1.0 / (p + 1.0)) / delta;
    kt.tau = std::min({0.5, dist / 4.0, std::pow(delta / (norm_f + 1.0), 1.0 / (p + 2.0)),
                       omega.inverse(delta / (C_F + 1.0))});
    return kt;
}

ProblemSpec rescale_problem(const ProblemSpec& problem, double kappa, double tau, Point x0) {
    if (!(kappa > 0.0 && tau > 0.0)) throw ParameterError("rescaling requires kappa, tau > 0");
    const double p = problem.p();
    const double fscale = std::pow(tau, p + 2.0) / std::pow(kappa, p + 1.0);

    ProblemSpec out;
    out.op = problem.op;
    out.op.kind = Rescaled{kappa, tau, x0, std::make_shared<const OperatorSpec>(problem.op)};

    if (problem.degeneracy) {
        const DegeneracyLaw& law = *problem.degeneracy;
        const double afac = std::pow(kappa / tau, law.q - law.p);
        out.degeneracy = DegeneracyLaw::make(law.p, law.q, law.a.composed(afac, x0, tau), law.eps_reg * tau / kappa,
                                             law.L1, law.L2);
    }

    out.source = std::visit(
        [&](const auto& s) -> SourceSpec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ConstantSource>) {
                return ConstantSource{s.c * fscale};
            } else if constexpr (std::is_same_v<T, DeadCoreSource>) {
                const double factor = fscale * std::pow(kappa, s.mu);
                return DeadCoreSource{[f = s.f, factor, x0, tau](Point x) { return factor * f(x0 + tau * x); }, s.mu};
            } else {
                return BoundedSource{[f = s.f, fscale, kappa, x0, tau](Point x, double v) {
                                         return fscale * f(x0 + tau * x, kappa * v);
                                     },
                                     s.depends_on_u};
            }
        },
        problem.source);

    if (problem.boundary) {
        out.boundary = [g = problem.boundary, kappa, tau, x0](Point x) { return g(x0 + tau * x) / kappa; };
    }
    if (problem.obstacle) {
        out.obstacle = [g = problem.obstacle, kappa, tau, x0](Point x) { return g(x0 + tau * x) / kappa; };
    }
    return out;
}

namespace {

void check_dyadic(int k, double rho, double beta) {
    if (k < 1) throw ParameterError("dyadic step requires k >= 1");
    if (!(rho > 0.0 && rho <= 0.5)) throw ParameterError("rho must lie in (0, 1/2]");
    if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta must lie in (0,1)");
}

}  // namespace

double dyadic_A(int k, double rho, double beta, double grad0) {
    check_dyadic(k, rho, beta);
    const double rb = std::pow(rho, beta);
    const double head = std::pow(rho, k * (1.0 + beta));
    // sum_{j<k} rho^{k+j beta} = rho^k (1 - rho^{k beta}) / (1 - rho^beta)
    const double tail = std::pow(rho, k) * -std::expm1(k * beta * std::log(rho)) / (1.0 - rb);
    return head + grad0 * tail;
}

double dyadic_A_literal(int k, double rho, double beta, double grad0) {
    check_dyadic(k, rho, beta);
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += std::pow(rho, k + j * beta);
    return std::pow(rho, k * (1.0 + beta)) + grad0 * sum;
}

double M0(double rho, double beta) {
    if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("rho must lie in (0,1)");
    if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("beta must lie in (0,1]");
    const double v = 1.0 / (std::pow(rho, 1.0 + beta) * (1.0 - std::pow(rho, beta)));
    if (!std::isfinite(v) || v > 1e300) throw NumericError("M0 overflow beyond 1e300");
    return v;
}

DyadicState dyadic_state(int k, double rho, double beta, double grad0) {
    return {k, dyadic_A(k, rho, beta, grad0), M0(rho, beta)};
}

std::optional<double> critical_radius_r0(double grad0, double beta) {
    if (!(beta > 0.0)) throw ParameterError("beta must be positive");
    if (grad0 < 0.0) throw ParameterError("gradient norm must be nonnegative");
    if (grad0 == 0.0) return std::nullopt;
    return std::pow(grad0, 1.0 / beta);
}

}  // namespace degel
