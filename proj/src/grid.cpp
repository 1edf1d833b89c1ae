#include "degel/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "degel/errors.hpp"

namespace degel {

namespace {

// Absorbs round-off in |x - c| <= R for nodes lying exactly on the sphere.
constexpr double kMaskSlack = 1e-12;

}  // namespace

Grid2D Grid2D::make(int n, Point center, double radius) {
    if (n < 9 || n % 2 == 0) {
        throw ParameterError("n must be odd and >= 9 (got " + std::to_string(n) + ")");
    }
    if (!(radius > 0.0 && radius <= 1.0)) {
        throw ParameterError("radius must lie in (0,1]");
    }
    if (std::abs(center.x) + radius > 1.0 + kMaskSlack || std::abs(center.y) + radius > 1.0 + kMaskSlack) {
        throw ParameterError("ball must lie inside [-1,1]^2");
    }

    Grid2D g;
    g.n_ = n;
    g.h_ = 2.0 / (n - 1);
    g.center_ = center;
    g.radius_ = radius;
    g.kinds_.assign(static_cast<std::size_t>(n) * n, NodeKind::Exterior);

    std::vector<char> masked(g.kinds_.size(), 0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            masked[g.index(i, j)] = (g.coord(i, j) - center).norm() <= radius + kMaskSlack;
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!masked[g.index(i, j)]) continue;
            bool interior = true;
            for (int dj = -1; dj <= 1 && interior; ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    if (!g.in_range(i + di, j + dj) || !masked[g.index(i + di, j + dj)]) {
                        interior = false;
                        break;
                    }
                }
            }
            g.kinds_[g.index(i, j)] = interior ? NodeKind::Interior : NodeKind::Ring;
        }
    }
    return g;
}

std::size_t Grid2D::count(NodeKind k) const {
    return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), k));
}

Node Grid2D::nearest_node(Point p) const {
    auto clamp_index = [this](double t) {
        const long k = std::lround((t + 1.0) / h_);
        return static_cast<int>(std::clamp<long>(k, 0, n_ - 1));
    };
    return {clamp_index(p.x), clamp_index(p.y)};
}

Grid2D make_grid(int n, Point center, double radius) { return Grid2D::make(n, center, radius); }

ScalarField::ScalarField(Grid2D grid, double fill) : grid_(std::move(grid)), values_(grid_.size(), fill) {
    const auto kinds = grid_.kinds();
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (kinds[k] == NodeKind::Exterior) values_[k] = std::numeric_limits<double>::quiet_NaN();
    }
}

ScalarField ScalarField::sample(const Grid2D& grid, const std::function<double(Point)>& f) {
    ScalarField u(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid.kinds()[k] != NodeKind::Exterior) u.values_[k] = f(grid.coord(grid.node_at(k)));
    }
    return u;
}

ScalarField ScalarField::restricted_to(const Grid2D& target) const {
    if (target.n() != grid_.n()) {
        throw ParameterError("restriction requires the same lattice");
    }
    ScalarField out(target);
    for (std::size_t k = 0; k < target.size(); ++k) {
        if (target.kinds()[k] == NodeKind::Exterior) continue;
        if (grid_.kinds()[k] == NodeKind::Exterior) {
            throw ParameterError("target mask is not contained in the source mask");
        }
        out.values_[k] = values_[k];
    }
    return out;
}

void ScalarField::require_same_grid(const ScalarField& o) const {
    if (!(grid_ == o.grid_)) throw ParameterError("fields live on different grids");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same_grid(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same_grid(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
}

double sup_over_ball(const ScalarField& u, Point x0, double r) {
    const Grid2D& g = u.grid();
    if (r < 2.0 * g.h() * (1.0 - 1e-12)) throw ParameterError("sup_over_ball: r must be >= 2h");
    double best = -1.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.kinds()[k] == NodeKind::Exterior) continue;
        if ((g.coord(g.node_at(k)) - x0).norm() <= r) best = std::max(best, std::abs(u.values()[k]));
    }
    if (best < 0.0) throw ParameterError("sup_over_ball: no masked node in the ball");
    return best;
}

double sup_over_sphere(const ScalarField& u, Point x0, double r) {
    const Grid2D& g = u.grid();
    if (r < 2.0 * g.h() * (1.0 - 1e-12)) throw ParameterError("sup_over_sphere: r must be >= 2h");
    double best = -std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.kinds()[k] == NodeKind::Exterior) continue;
        const double d = (g.coord(g.node_at(k)) - x0).norm();
        if (d > r - g.h() && d <= r) {
            best = std::max(best, u.values()[k]);
            ++count;
        }
    }
    if (count < 8) throw ParameterError("sup_over_sphere: shell holds fewer than 8 masked nodes");
    return best;
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_field_csv(std::ostream& os, const ScalarField& u) {
    const Grid2D& g = u.grid();
    os << "n=" << g.n() << ",h=" << format_real(g.h()) << ",cx=" << format_real(g.center().x)
       << ",cy=" << format_real(g.center().y) << ",R=" << format_real(g.radius()) << '\n';
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            if (i) os << ',';
            os << format_real(g.kind(i, j) == NodeKind::Exterior ? std::numeric_limits<double>::quiet_NaN() : u(i, j));
        }
        os << '\n';
    }
}

void write_field_csv(const std::string& path, const ScalarField& u) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_field_csv(os, u);
}

ScalarField read_field_csv(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw ParameterError("field csv: missing header");
    int n = 0;
    double h = 0, cx = 0, cy = 0, radius = 0;
    if (std::sscanf(header.c_str(), "n=%d,h=%lf,cx=%lf,cy=%lf,R=%lf", &n, &h, &cx, &cy, &radius) != 5) {
        throw ParameterError("field csv: malformed header '" + header + "'");
    }
    Grid2D g = Grid2D::make(n, {cx, cy}, radius);
    if (std::abs(g.h() - h) > 1e-14) throw ParameterError("field csv: h inconsistent with n");
    ScalarField u(g);
    std::string line;
    for (int j = 0; j < n; ++j) {
        if (!std::getline(is, line)) throw ParameterError("field csv: too few rows");
        std::stringstream ss(line);
        std::string cell;
        for (int i = 0; i < n; ++i) {
            if (!std::getline(ss, cell, ',')) throw ParameterError("field csv: too few columns in row " + std::to_string(j));
            const double v = cell == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(cell);
            if (g.kind(i, j) != NodeKind::Exterior) {
                if (!std::isfinite(v)) throw ParameterError("field csv: non-finite value at a masked node");
                u(i, j) = v;
            }
        }
    }
    return u;
}

}  // namespace degel
