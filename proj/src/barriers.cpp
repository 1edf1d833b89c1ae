#include "degel/barriers.hpp"

#include <cmath>

#include "degel/errors.hpp"

namespace degel {

double sharp_exponent(double p) { return (p + 2.0) / (p + 1.0); }

double BarrierConstants::Xi1(double t) const {
    const double g = gamma();
    const double p = in.p, q = in.q;
    return std::pow(g, p + 1.0) * std::pow(t, p + 1.0) +
           in.norm_a * std::pow(g, q + 1.0) * std::pow(t, q + 1.0) * std::pow(in.diam / 2.0, (q - p) / (p + 1.0));
}

BarrierConstants barrier_constants(const BarrierInputs& in) {
    if (!(in.p > 0.0 && in.q >= in.p)) throw ParameterError("barrier constants require 0 < p <= q");
    if (!(in.lambda > 0.0 && in.Lambda >= in.lambda)) throw ParameterError("barrier constants require 0 < lambda <= Lambda");
    if (!(in.L1 > 0.0) || in.N < 1 || !(in.diam > 0.0) || !(in.norm_a >= 0.0)) {
        throw ParameterError("barrier constants require L1 > 0, N >= 1, diam > 0, |a| >= 0");
    }
    BarrierConstants bc;
    bc.in = in;
    bc.Xi2 = in.L1 * (in.lambda / (in.p + 1.0) + (in.N - 1) * in.Lambda);
    bc.Xi3 = in.norm_a * std::pow(bc.gamma(), in.q + 1.0) * std::pow(in.diam / 2.0, (in.q - in.p) / (in.p + 1.0));
    return bc;
}

double g_function(double t, const BarrierConstants& bc) {
    const double p = bc.in.p, q = bc.in.q;
    return bc.Xi2 * std::pow(t, p + 1.0) * (std::pow(bc.gamma(), p + 1.0) + bc.Xi3 * std::pow(t, q - p)) - bc.in.m_inf;
}

BarrierConstants smallest_root(const BarrierInputs& in, double c_fraction) {
    if (!(in.m_inf > 0.0)) throw ParameterError("barrier root requires m = inf f > 0");
    if (!(c_fraction > 0.0 && c_fraction < 1.0)) throw ParameterError("barrier constant fraction must lie in (0,1)");
    BarrierConstants bc = barrier_constants(in);

    double lo = 0.0, hi = 1.0;
    while (g_function(hi, bc) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e150) throw NumericError("barrier root bracket overflow");
    }
    // g is strictly increasing on (0, inf), so the bracketed root is the only positive one.
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g_function(mid, bc);
        if (std::abs(gm) <= 1e-12 || hi - lo <= 1e-17 * hi) {
            lo = hi = mid;
            break;
        }
        (gm < 0.0 ? lo : hi) = mid;
    }
    bc.T0 = 0.5 * (lo + hi);
    bc.c = c_fraction * bc.T0;
    return bc;
}

double theta_barrier(Point x, double c, double p) {
    if (!(c > 0.0)) throw ParameterError("theta barrier requires c > 0");
    return c * std::pow(x.norm(), sharp_exponent(p));
}

double xi_barrier(Point x, double C, double p, double mu) {
    if (!(mu > 0.0 && mu < p + 1.0)) throw ParameterError("xi barrier requires 0 < mu < p+1");
    return C * std::pow(x.norm(), (p + 2.0) / (p + 1.0 - mu));
}

RadialJet radial_power_jet(Point x, double c, double exponent) {
    const double r = x.norm();
    if (r == 0.0) throw ParameterError("radial jet is undefined at the origin");
    const double base = c * exponent * std::pow(r, exponent - 2.0);
    RadialJet jet;
    jet.grad = base * x;
    // c e r^{e-2} (Id + (e-2) x x^T / r^2)
    jet.hess = base * (SymMat2::identity() + (exponent - 2.0) / (r * r) * SymMat2::outer(x));
    return jet;
}

double exact_example_source(Point x, double p, double q, int N, const std::function<double(Point)>& a) {
    const double g = sharp_exponent(p);
    const double r = x.norm();
    const double radial = r == 0.0 ? (q > p ? 0.0 : 1.0) : std::pow(r, (q - p) / (p + 1.0));
    return (1.0 / (p + 1.0) + N - 1.0) * (std::pow(g, p + 1.0) + a(x) * std::pow(g, q + 1.0) * radial);
}

double exact_example_solution(Point x, double p) { return std::pow(x.norm(), sharp_exponent(p)); }

}  // namespace degel
