#pragma once

#include <optional>

#include "degel/operators.hpp"
#include "degel/solver.hpp"
#include "degel/types.hpp"

namespace degel {

/// Normalization and dyadic-iteration parameters.
struct ScalingParams {
    double kappa = 1.0;
    double tau = 0.5;
    double delta = 0.1;
    double iota = 0.0;
    double rho = 0.5;
    double beta = 0.0;
    double alpha_F = 1.0;
    Point x0;

    /// Enforces beta in (0, alpha_F) and beta <= 1/(p+1),
    /// rho <= min(1/2, (3/(4C))^{1/(alpha_F - beta)}) and 0 < iota <= rho^{1+beta}/8.
    /// C is the approximation constant of the frozen problem (default 1).
    static ScalingParams make(double kappa, double tau, double delta, double iota, double rho, double beta,
                              double alpha_F, Point x0, double p, double C = 1.0);
};

struct KappaTau {
    double kappa = 1.0;
    double tau = 0.5;
};

/// kappa = |u| + 1 + |f|^{1/(p+1)} / delta
/// tau   = min(1/2, dist/4, (delta/(|f|+1))^{1/(p+2)}, omega^{-1}(delta/(C_F+1)))
KappaTau compute_kappa_tau(double norm_u, double norm_f, double delta, double p, double dist, const Modulus& omega,
                           double C_F);

/// Problem satisfied by v(x) = u(x0 + tau x)/kappa. Uses the operator's
/// Rescaled variant, a_{k,t} = (kappa/tau)^{q-p} a(x0 + tau x), eps_reg
/// scaled by tau/kappa, f_{k,t}(x,s) = tau^{p+2}/kappa^{p+1} f(x0 + tau x, kappa s),
/// and boundary/obstacle data g(x0 + tau x)/kappa.
ProblemSpec rescale_problem(const ProblemSpec& problem, double kappa, double tau, Point x0);

struct DyadicState {
    int k = 0;
    double A_k = 0.0;
    double M0 = 0.0;
};

/// rho^{k(1+beta)} + grad0 sum_{j<k} rho^{k + j beta}, via the geometric series.
double dyadic_A(int k, double rho, double beta, double grad0);

/// Same sum accumulated term by term.
double dyadic_A_literal(int k, double rho, double beta, double grad0);

/// 1 / (rho^{1+beta} (1 - rho^beta)). Throws NumericError above 1e300.
double M0(double rho, double beta);

DyadicState dyadic_state(int k, double rho, double beta, double grad0);

/// grad0^{1/beta}; nullopt when grad0 == 0 (the point is critical).
std::optional<double> critical_radius_r0(double grad0, double beta);

}  // namespace degel
