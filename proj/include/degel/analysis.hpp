#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "degel/grid.hpp"

namespace degel {

/// Least-squares line through (log r, log value).
struct ExponentFit {
    std::vector<double> radii;
    std::vector<double> values;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Needs at least 4 samples with strictly increasing positive radii and positive values.
ExponentFit fit_exponent(const std::vector<double>& radii, const std::vector<double>& values);

/// Log-spaced radii in [r_min, r_max] with `per_decade` points per decade,
/// never fewer than `min_count`. Both endpoints are included.
std::vector<double> log_spaced_radii(double r_min, double r_max, int per_decade = 8, int min_count = 4);

/// sup over masked nodes in B_r(x0) of |u - l|, l the tangent plane at the
/// node nearest x0 built from the discrete gradient. Requires r >= 4h.
double oscillation(const ScalarField& u, Point x0, double r);

/// sup over interior nodes in B_r(x0) of |grad u - grad u(x0)|.
double gradient_growth(const ScalarField& u, Point x0, double r);

/// sup over interior nodes in B_r(x0) of |grad u|.
double sup_gradient_over_ball(const ScalarField& u, Point x0, double r);

/// Interior nodes with |grad u| <= r^beta.
std::vector<Node> critical_zone(const ScalarField& u, double r, double beta);

struct NondegeneracyResult {
    double min_ratio = 0.0;
    std::vector<double> radii;
    std::vector<double> ratios;
};

/// (sup_{dB_r(x0)} u - u(x0)) / r^exponent for each radius.
NondegeneracyResult nondegeneracy_ratio(const ScalarField& u, Point x0, const std::vector<double>& radii,
                                        double exponent);

struct DensityReport {
    std::vector<double> radii;
    std::vector<double> ratios;
    double theta_min = 0.0;
};

/// Interior nodes with u <= threshold and a 4-neighbor above it.
std::vector<Node> free_boundary(const ScalarField& u, double threshold);

/// Free-boundary node closest to the ray {center + t e1, t > 0}, outermost
/// on ties. Throws PreconditionError when fb is empty.
Node free_boundary_node_on_ray(const std::vector<Node>& fb, const Grid2D& g);

/// Node-count fraction of {u > threshold} in B_r(z0). z0 must lie within
/// one diagonal step of the discrete free boundary.
DensityReport positive_density(const ScalarField& u, Point z0, const std::vector<double>& radii, double threshold);

/// max(sup |u - v|, sup |grad u - grad v|) over B_radius(grid center).
double approximation_distance(const ScalarField& u, const ScalarField& v, double radius);

/// `r,value` rows followed by `slope=..,intercept=..,r2=..`.
void write_fit_csv(std::ostream& os, const ExponentFit& fit);
void write_fit_csv(const std::string& path, const ExponentFit& fit);

}  // namespace degel
