#include "degel/degeneracy.hpp"

#include <algorithm>
#include <cmath>

#include "degel/errors.hpp"

namespace degel {

double power_of(double s, double e) {
    if (e == 0.0) return 1.0;
    if (e == 1.0) return s;
    if (e == 2.0) return s * s;
    if (e == 3.0) return s * s * s;
    if (e == 4.0) {
        const double s2 = s * s;
        return s2 * s2;
    }
    return std::pow(s, e);
}

ModulatingFunction::ModulatingFunction(Profile profile) : profile_(std::move(profile)) {
    if (const auto* c = std::get_if<Constant>(&profile_)) {
        if (!(c->value >= 0.0)) throw ParameterError("modulating constant must be >= 0");
    } else if (const auto* pw = std::get_if<Power>(&profile_)) {
        if (!(pw->alpha >= 0.0)) throw ParameterError("modulating power exponent must be >= 0");
    } else {
        const auto& t = std::get<RadialTable>(profile_);
        if (t.radii.size() < 2 || t.radii.size() != t.values.size()) {
            throw ParameterError("radial table needs >= 2 (radius, value) pairs");
        }
        for (std::size_t k = 0; k < t.radii.size(); ++k) {
            if (!(t.values[k] >= 0.0)) throw ParameterError("radial table values must be >= 0");
            if (k > 0 && !(t.radii[k] > t.radii[k - 1])) throw ParameterError("radial table radii must increase");
        }
    }
}

double ModulatingFunction::base(Point y) const {
    const double r = y.norm();
    if (const auto* c = std::get_if<Constant>(&profile_)) return c->value;
    if (const auto* pw = std::get_if<Power>(&profile_)) return power_of(r, pw->alpha);
    const auto& t = std::get<RadialTable>(profile_);
    if (r <= t.radii.front()) return t.values.front();
    if (r >= t.radii.back()) return t.values.back();
    const auto it = std::upper_bound(t.radii.begin(), t.radii.end(), r);
    const auto k = static_cast<std::size_t>(it - t.radii.begin());
    const double w = (r - t.radii[k - 1]) / (t.radii[k] - t.radii[k - 1]);
    return (1.0 - w) * t.values[k - 1] + w * t.values[k];
}

double ModulatingFunction::operator()(Point x) const { return factor_ * base(shift_ + stretch_ * x); }

ModulatingFunction ModulatingFunction::composed(double factor, Point shift, double stretch) const {
    if (!(factor >= 0.0)) throw ParameterError("modulating factor must be >= 0");
    ModulatingFunction out = *this;
    out.factor_ = factor_ * factor;
    out.shift_ = shift_ + stretch_ * shift;
    out.stretch_ = stretch_ * stretch;
    return out;
}

double ModulatingFunction::sup_on_ball(Point center, double radius) const {
    // Image of the ball under y = shift + stretch x.
    const Point c = shift_ + stretch_ * center;
    const double rad = std::abs(stretch_) * radius;
    const double rmax = c.norm() + rad;
    double s = 0.0;
    if (const auto* k = std::get_if<Constant>(&profile_)) {
        s = k->value;
    } else if (const auto* pw = std::get_if<Power>(&profile_)) {
        s = power_of(rmax, pw->alpha);
    } else {
        const auto& t = std::get<RadialTable>(profile_);
        const double rmin = std::max(0.0, c.norm() - rad);
        s = std::max(base({rmin, 0.0}), base({rmax, 0.0}));
        for (std::size_t k = 0; k < t.radii.size(); ++k) {
            if (t.radii[k] >= rmin && t.radii[k] <= rmax) s = std::max(s, t.values[k]);
        }
    }
    return factor_ * s;
}

DegeneracyLaw DegeneracyLaw::make(double p, double q, ModulatingFunction a, double eps_reg, double L1, double L2) {
    if (!(p > 0.0 && p <= q && std::isfinite(q))) throw ParameterError("degeneracy requires 0 < p <= q < inf");
    if (!(L1 > 0.0 && L1 <= 1.0 && L2 >= 1.0)) throw ParameterError("degeneracy requires 0 < L1 <= 1 <= L2");
    if (!(eps_reg >= 0.0)) throw ParameterError("eps_reg must be >= 0");
    return {p, q, std::move(a), L1, L2, eps_reg};
}

double K(const DegeneracyLaw& law, Point x, double s) {
    if (s < 0.0) throw ParameterError("K: gradient magnitude must be >= 0");
    return power_of(s, law.p) + law.a(x) * power_of(s, law.q);
}

double K_regularized(const DegeneracyLaw& law, Point x, double s) { return K(law, x, std::max(s, law.eps_reg)); }

double H(const DegeneracyLaw& law, Point x, Vec2 xi) { return K_regularized(law, x, xi.norm()); }

double multi_phase_K(double p, const std::vector<PhaseTerm>& terms, Point x, double s) {
    if (!(p > 0.0)) throw ParameterError("multi-phase K requires p > 0");
    if (s < 0.0) throw ParameterError("K: gradient magnitude must be >= 0");
    double prev = p;
    double sum = power_of(s, p);
    for (const auto& t : terms) {
        if (!(t.q >= prev)) throw ParameterError("multi-phase exponents must satisfy p <= q_1 <= ... <= q_N");
        prev = t.q;
        sum += t.a(x) * power_of(s, t.q);
    }
    return sum;
}

}  // namespace degel
