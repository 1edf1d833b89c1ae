#include "degel/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "degel/discretization.hpp"
#include "degel/errors.hpp"

namespace degel {

namespace {

// Calls fn(node, x) for every node with the given kind mask inside B_r(x0).
template <class Fn>
void for_nodes_in_ball(const Grid2D& g, Point x0, double r, bool interior_only, Fn&& fn) {
    const double h = g.h();
    const int i_lo = std::max(0, static_cast<int>(std::floor((x0.x - r + 1.0) / h)));
    const int i_hi = std::min(g.n() - 1, static_cast<int>(std::ceil((x0.x + r + 1.0) / h)));
    const int j_lo = std::max(0, static_cast<int>(std::floor((x0.y - r + 1.0) / h)));
    const int j_hi = std::min(g.n() - 1, static_cast<int>(std::ceil((x0.y + r + 1.0) / h)));
    const double r2 = r * r * (1.0 + 1e-12);
    for (int j = j_lo; j <= j_hi; ++j) {
        for (int i = i_lo; i <= i_hi; ++i) {
            const NodeKind k = g.kind(i, j);
            if (k == NodeKind::Exterior || (interior_only && k != NodeKind::Interior)) continue;
            const Point x = g.coord(i, j);
            if ((x - x0).norm2() <= r2) fn(Node{i, j}, x);
        }
    }
}

Node anchor_node(const ScalarField& u, Point x0) {
    const Grid2D& g = u.grid();
    const Node nd = g.nearest_node(x0);
    if (!g.is_interior(nd)) throw ParameterError("x0 must be near an interior node of the mask");
    if ((g.coord(nd) - x0).norm() > 2.0 * g.h()) throw ParameterError("x0 must lie within 2h of a node");
    return nd;
}

}  // namespace

ExponentFit fit_exponent(const std::vector<double>& radii, const std::vector<double>& values) {
    if (radii.size() != values.size()) throw ParameterError("radii and values differ in length");
    if (radii.size() < 4) throw ParameterError("exponent fit needs at least 4 samples");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0.0)) throw ParameterError("radii must be positive");
        if (!(values[k] > 0.0)) throw ParameterError("exponent fit needs positive values");
        if (k > 0 && !(radii[k] > radii[k - 1])) throw ParameterError("radii must be strictly increasing");
    }
    const double n = static_cast<double>(radii.size());
    double sx = 0, sy = 0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        sx += std::log(radii[k]);
        sy += std::log(values[k]);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        const double dx = std::log(radii[k]) - mx, dy = std::log(values[k]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    ExponentFit fit;
    fit.radii = radii;
    fit.values = values;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        const double e = std::log(values[k]) - (fit.intercept + fit.slope * std::log(radii[k]));
        ss_res += e * e;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

std::vector<double> log_spaced_radii(double r_min, double r_max, int per_decade, int min_count) {
    if (!(r_min > 0.0 && r_max > r_min)) throw ParameterError("radii range must satisfy 0 < r_min < r_max");
    if (per_decade < 1 || min_count < 2) throw ParameterError("need per_decade >= 1 and min_count >= 2");
    const double decades = std::log10(r_max / r_min);
    const int count = std::max(min_count, static_cast<int>(std::ceil(decades * per_decade)) + 1);
    std::vector<double> r(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) r[static_cast<std::size_t>(k)] = r_min * std::pow(r_max / r_min, k / double(count - 1));
    r.back() = r_max;
    return r;
}

double oscillation(const ScalarField& u, Point x0, double r) {
    const Grid2D& g = u.grid();
    if (!(r >= 4.0 * g.h() * (1.0 - 1e-12))) throw ParameterError("oscillation radius must be >= 4h");
    const Node nd = anchor_node(u, x0);
    const Point c = g.coord(nd);
    const DiscreteJet jet = jet_at(u, nd);
    const double u0 = u[nd];
    double sup = 0.0;
    for_nodes_in_ball(g, c, r, false, [&](Node m, Point x) {
        sup = std::max(sup, std::abs(u[m] - u0 - jet.grad.dot(x - c)));
    });
    return sup;
}

double gradient_growth(const ScalarField& u, Point x0, double r) {
    const Grid2D& g = u.grid();
    const Node nd = anchor_node(u, x0);
    const Point c = g.coord(nd);
    const Vec2 g0 = jet_at(u, nd).grad;
    double sup = 0.0;
    for_nodes_in_ball(g, c, r, true, [&](Node m, Point) { sup = std::max(sup, (jet_at(u, m).grad - g0).norm()); });
    return sup;
}

double sup_gradient_over_ball(const ScalarField& u, Point x0, double r) {
    double sup = 0.0;
    for_nodes_in_ball(u.grid(), x0, r, true, [&](Node m, Point) { sup = std::max(sup, jet_at(u, m).grad.norm()); });
    return sup;
}

std::vector<Node> critical_zone(const ScalarField& u, double r, double beta) {
    if (!(r > 0.0)) throw ParameterError("critical zone radius must be positive");
    const Grid2D& g = u.grid();
    const double bound = std::pow(r, beta);
    std::vector<Node> out;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.kinds()[k] != NodeKind::Interior) continue;
        const Node nd = g.node_at(k);
        if (jet_at(u, nd).grad.norm() <= bound) out.push_back(nd);
    }
    return out;
}

NondegeneracyResult nondegeneracy_ratio(const ScalarField& u, Point x0, const std::vector<double>& radii,
                                        double exponent) {
    if (radii.empty()) throw ParameterError("nondegeneracy ratio needs at least one radius");
    const Grid2D& g = u.grid();
    const Node nd = g.nearest_node(x0);
    if (!g.is_masked(nd)) throw ParameterError("x0 must lie in the mask");
    const Point c = g.coord(nd);
    NondegeneracyResult res;
    res.min_ratio = std::numeric_limits<double>::infinity();
    for (double r : radii) {
        if (!(r >= 2.0 * g.h() * (1.0 - 1e-12))) throw ParameterError("nondegeneracy radii must be >= 2h");
        const double ratio = (sup_over_sphere(u, c, r) - u[nd]) / std::pow(r, exponent);
        res.radii.push_back(r);
        res.ratios.push_back(ratio);
        res.min_ratio = std::min(res.min_ratio, ratio);
    }
    return res;
}

std::vector<Node> free_boundary(const ScalarField& u, double threshold) {
    const Grid2D& g = u.grid();
    std::vector<Node> out;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.kinds()[k] != NodeKind::Interior) continue;
        const Node nd = g.node_at(k);
        if (u[nd] > threshold) continue;
        const bool touches = u(nd.i + 1, nd.j) > threshold || u(nd.i - 1, nd.j) > threshold ||
                             u(nd.i, nd.j + 1) > threshold || u(nd.i, nd.j - 1) > threshold;
        if (touches) out.push_back(nd);
    }
    return out;
}

Node free_boundary_node_on_ray(const std::vector<Node>& fb, const Grid2D& g) {
    if (fb.empty()) throw PreconditionError("no free boundary: the zero set is empty");
    const Point c = g.center();
    return *std::min_element(fb.begin(), fb.end(), [&](Node a, Node b) {
        const Point xa = g.coord(a) - c, xb = g.coord(b) - c;
        const bool ra = xa.x > 0.0, rb = xb.x > 0.0;
        if (ra != rb) return ra;
        if (std::abs(xa.y) != std::abs(xb.y)) return std::abs(xa.y) < std::abs(xb.y);
        return xa.x > xb.x;
    });
}

DensityReport positive_density(const ScalarField& u, Point z0, const std::vector<double>& radii, double threshold) {
    const Grid2D& g = u.grid();
    const auto fb = free_boundary(u, threshold);
    const Node nd = g.nearest_node(z0);
    const bool near = std::any_of(fb.begin(), fb.end(), [&](Node m) {
        return std::abs(m.i - nd.i) <= 1 && std::abs(m.j - nd.j) <= 1;
    });
    if (!near) throw ParameterError("z0 is not on the discrete free boundary");
    const Point c = g.coord(nd);
    DensityReport rep;
    rep.theta_min = 1.0;
    for (double r : radii) {
        std::size_t total = 0, positive = 0;
        for_nodes_in_ball(g, c, r, false, [&](Node m, Point) {
            ++total;
            if (u[m] > threshold) ++positive;
        });
        const double ratio = total ? static_cast<double>(positive) / static_cast<double>(total) : 0.0;
        rep.radii.push_back(r);
        rep.ratios.push_back(ratio);
        rep.theta_min = std::min(rep.theta_min, ratio);
    }
    return rep;
}

double approximation_distance(const ScalarField& u, const ScalarField& v, double radius) {
    if (!(u.grid() == v.grid())) throw ParameterError("approximation distance needs fields on the same grid");
    if (!(radius > 0.0)) throw ParameterError("sub-ball radius must be positive");
    const Grid2D& g = u.grid();
    double val = 0.0, grad = 0.0;
    for_nodes_in_ball(g, g.center(), radius, false, [&](Node m, Point) {
        val = std::max(val, std::abs(u[m] - v[m]));
        if (g.kind(m) == NodeKind::Interior) grad = std::max(grad, (jet_at(u, m).grad - jet_at(v, m).grad).norm());
    });
    return std::max(val, grad);
}

void write_fit_csv(std::ostream& os, const ExponentFit& fit) {
    os << "r,value\n";
    for (std::size_t k = 0; k < fit.radii.size(); ++k) {
        os << format_real(fit.radii[k]) << ',' << format_real(fit.values[k]) << '\n';
    }
    os << "slope=" << format_real(fit.slope) << ",intercept=" << format_real(fit.intercept)
       << ",r2=" << format_real(fit.r2) << '\n';
}

void write_fit_csv(const std::string& path, const ExponentFit& fit) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_fit_csv(os, fit);
}

}  // namespace degel
