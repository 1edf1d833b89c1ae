#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "degel/types.hpp"

namespace degel {

enum class NodeKind : std::uint8_t { Interior, Ring, Exterior };

/// Lattice index: i runs along x, j along y.
struct Node {
    int i = 0;
    int j = 0;
    constexpr bool operator==(const Node&) const = default;
};

/// Uniform grid on [-1,1]^2 with a ball mask B_R(center).
///
/// A node is masked when |x - center| <= R. Masked nodes whose eight
/// neighbors are all masked are interior; the remaining masked nodes form
/// the boundary ring where Dirichlet data is imposed. Everything else is
/// exterior.
class Grid2D {
public:
    /// Throws ParameterError for even or too small n, a radius outside
    /// (0,1], or a ball that leaves the unit square.
    static Grid2D make(int n, Point center, double radius);

    int n() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    Point center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }

    std::size_t size() const noexcept { return kinds_.size(); }
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
    }
    std::size_t index(Node nd) const noexcept { return index(nd.i, nd.j); }
    Node node_at(std::size_t idx) const noexcept {
        return {static_cast<int>(idx % static_cast<std::size_t>(n_)), static_cast<int>(idx / static_cast<std::size_t>(n_))};
    }
    bool in_range(int i, int j) const noexcept { return i >= 0 && j >= 0 && i < n_ && j < n_; }

    Point coord(int i, int j) const noexcept { return {-1.0 + i * h_, -1.0 + j * h_}; }
    Point coord(Node nd) const noexcept { return coord(nd.i, nd.j); }

    NodeKind kind(int i, int j) const noexcept { return kinds_[index(i, j)]; }
    NodeKind kind(Node nd) const noexcept { return kinds_[index(nd)]; }
    bool is_interior(Node nd) const noexcept { return in_range(nd.i, nd.j) && kind(nd) == NodeKind::Interior; }
    bool is_masked(Node nd) const noexcept { return in_range(nd.i, nd.j) && kind(nd) != NodeKind::Exterior; }

    std::span<const NodeKind> kinds() const noexcept { return kinds_; }
    std::size_t count(NodeKind k) const;

    /// Lattice node closest to p (may be exterior).
    Node nearest_node(Point p) const;

    /// Grids built from the same (n, center, radius) are identical.
    bool operator==(const Grid2D& o) const noexcept {
        return n_ == o.n_ && center_ == o.center_ && radius_ == o.radius_;
    }

private:
    Grid2D() = default;

    int n_ = 0;
    double h_ = 0.0;
    Point center_{};
    double radius_ = 0.0;
    std::vector<NodeKind> kinds_;
};

/// Grid-sampled function. Exterior nodes hold NaN.
class ScalarField {
public:
    explicit ScalarField(Grid2D grid, double fill = 0.0);

    /// Samples f at every masked node.
    static ScalarField sample(const Grid2D& grid, const std::function<double(Point)>& f);

    const Grid2D& grid() const noexcept { return grid_; }

    double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
    double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
    double operator[](Node nd) const noexcept { return values_[grid_.index(nd)]; }
    double& operator[](Node nd) noexcept { return values_[grid_.index(nd)]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    /// Copy of this field on `target`, which must share the lattice (same n).
    /// Nodes masked in target but exterior here raise ParameterError.
    ScalarField restricted_to(const Grid2D& target) const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }

private:
    void require_same_grid(const ScalarField& o) const;

    Grid2D grid_;
    std::vector<double> values_;
};

Grid2D make_grid(int n, Point center, double radius);

/// max |u| over masked nodes with |x - x0| <= r.
double sup_over_ball(const ScalarField& u, Point x0, double r);

/// max u over masked nodes in the shell r - h < |x - x0| <= r.
double sup_over_sphere(const ScalarField& u, Point x0, double r);

/// Field CSV: header `n=..,h=..,cx=..,cy=..,R=..`, then n rows (row j is
/// y = -1 + j h) of n values with 17 significant digits; exterior as `nan`.
void write_field_csv(std::ostream& os, const ScalarField& u);
void write_field_csv(const std::string& path, const ScalarField& u);
ScalarField read_field_csv(std::istream& is);

/// "%.17g" with a plain `nan` spelling.
std::string format_real(double v);

}  // namespace degel
