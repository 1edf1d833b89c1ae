#pragma once

#include <variant>
#include <vector>

#include "degel/types.hpp"

namespace degel {

/// Nonnegative modulating function a(x).
///
/// The base profile is one of a constant, |x|^alpha, or a radial table
/// with linear interpolation (clamped at both ends). Any profile can be
/// composed with an affine change of variables and a positive factor:
/// a(x) = factor * base(shift + stretch * x). Rescaling uses this.
class ModulatingFunction {
public:
    struct Constant {
        double value = 0.0;
    };
    struct Power {
        double alpha = 1.0;
    };
    struct RadialTable {
        std::vector<double> radii;
        std::vector<double> values;
    };
    using Profile = std::variant<Constant, Power, RadialTable>;

    ModulatingFunction() : ModulatingFunction(Constant{0.0}) {}
    /// Throws ParameterError on negative values or malformed tables.
    explicit ModulatingFunction(Profile profile);

    static ModulatingFunction constant(double v) { return ModulatingFunction(Constant{v}); }
    static ModulatingFunction power(double alpha) { return ModulatingFunction(Power{alpha}); }
    static ModulatingFunction table(std::vector<double> radii, std::vector<double> values) {
        return ModulatingFunction(RadialTable{std::move(radii), std::move(values)});
    }

    double operator()(Point x) const;

    /// x -> factor * a(shift + stretch x)
    ModulatingFunction composed(double factor, Point shift, double stretch) const;

    const Profile& profile() const noexcept { return profile_; }
    double factor() const noexcept { return factor_; }
    Point shift() const noexcept { return shift_; }
    double stretch() const noexcept { return stretch_; }

    /// sup of a over the ball B_radius(center), computed for the base profiles.
    double sup_on_ball(Point center, double radius) const;

private:
    double base(Point y) const;

    Profile profile_;
    double factor_ = 1.0;
    Point shift_{};
    double stretch_ = 1.0;
};

/// Degeneracy law H(x, xi) = K(x, |xi|) = |xi|^p + a(x) |xi|^q with the
/// bracketing constants L1 <= 1 <= L2.
struct DegeneracyLaw {
    double p = 1.0;
    double q = 1.0;
    ModulatingFunction a;
    double L1 = 1.0;
    double L2 = 1.0;
    /// Gradient floor: the regularized law uses max(s, eps_reg).
    double eps_reg = 0.0;

    /// Validates 0 < p <= q, 0 < L1 <= 1 <= L2 and eps_reg >= 0.
    static DegeneracyLaw make(double p, double q, ModulatingFunction a, double eps_reg = 0.0, double L1 = 1.0,
                              double L2 = 1.0);
};

/// s^p + a(x) s^q. Throws ParameterError for s < 0.
double K(const DegeneracyLaw& law, Point x, double s);

/// K(law, x, max(s, eps_reg)).
double K_regularized(const DegeneracyLaw& law, Point x, double s);

/// H(x, xi); equal to K_regularized(law, x, |xi|).
double H(const DegeneracyLaw& law, Point x, Vec2 xi);

struct PhaseTerm {
    double q = 1.0;
    ModulatingFunction a;
};

/// s^p + sum_i a_i(x) s^{q_i}. Requires 0 < p <= q_1 <= ... <= q_N.
double multi_phase_K(double p, const std::vector<PhaseTerm>& terms, Point x, double s);

/// s^e with a multiplication fast path for small integer exponents.
double power_of(double s, double e);

}  // namespace degel
