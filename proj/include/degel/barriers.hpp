#pragma once

#include <functional>

#include "degel/types.hpp"

namespace degel {

/// Inputs of the non-degeneracy barrier construction.
struct BarrierInputs {
    double p = 2.0;
    double q = 3.0;
    double lambda = 1.0;
    double Lambda = 1.0;
    double L1 = 1.0;
    int N = 2;
    double diam = 2.0;
    double norm_a = 1.0;  ///< sup of the modulating function
    double m_inf = 1.0;   ///< inf of the source
};

/// Constants of the barrier argument.
///
///   Xi2 = L1 (lambda/(p+1) + (N-1) Lambda)
///   Xi3 = |a|_inf gamma^{q+1} (diam/2)^{(q-p)/(p+1)},   gamma = (p+2)/(p+1)
///   g(t) = Xi2 t^{p+1} [gamma^{p+1} + Xi3 t^{q-p}] - m_inf
///
/// T0 is the positive root of g and c the barrier constant in (0, T0).
struct BarrierConstants {
    BarrierInputs in;
    double Xi2 = 0.0;
    double Xi3 = 0.0;
    double T0 = 0.0;
    double c = 0.0;

    double gamma() const { return (in.p + 2.0) / (in.p + 1.0); }
    /// Xi1 evaluated at the barrier constant t.
    double Xi1(double t) const;
};

/// (p+2)/(p+1)
double sharp_exponent(double p);

/// Fills Xi2 and Xi3 only.
BarrierConstants barrier_constants(const BarrierInputs& in);

double g_function(double t, const BarrierConstants& bc);

/// Doubling bracket then bisection to |g| <= 1e-12. c defaults to 0.9 T0.
/// Throws ParameterError when m_inf <= 0.
BarrierConstants smallest_root(const BarrierInputs& in, double c_fraction = 0.9);

/// c |x|^{(p+2)/(p+1)}
double theta_barrier(Point x, double c, double p);

/// C |x|^{(p+2)/(p+1-mu)}; requires 0 < mu < p+1.
double xi_barrier(Point x, double C, double p, double mu);

/// Analytic gradient and Hessian of c |x|^e at x != 0.
struct RadialJet {
    Vec2 grad;
    SymMat2 hess;
};
RadialJet radial_power_jet(Point x, double c, double exponent);

/// Source that makes |x|^{(p+2)/(p+1)} an exact solution of
/// [|Dv|^p + a(x)|Dv|^q] Delta v = f in dimension N:
///   f = (1/(p+1) + N - 1) [gamma^{p+1} + a(x) gamma^{q+1} |x|^{(q-p)/(p+1)}].
double exact_example_source(Point x, double p, double q, int N, const std::function<double(Point)>& a);

/// |x|^{(p+2)/(p+1)}
double exact_example_solution(Point x, double p);

}  // namespace degel
