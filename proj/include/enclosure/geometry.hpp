// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace enclosure
{
//---------------------------------------------------------------------------//
struct Vec2
{
    double x = 0;
    double y = 0;
};

inline constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

//---------------------------------------------------------------------------//
/*!
 * A probing direction and its counterclockwise perpendicular.
 *
 * The pair (omega, omega_perp) defines the complex frequency
 * rho = omega + i omega_perp of the exponential probes.
 */
class Direction
{
  public:
    //! Direction at the given angle (radians); perp is rotated by +pi/2.
    static Direction from_angle(double angle);
    //! Normalizes \c omega; throws InputError for a zero vector.
    static Direction from_vector(Vec2 omega);
    //! Explicit pair; throws InputError unless orthonormal to 1e-14.
    Direction(Vec2 omega, Vec2 omega_perp);

    Vec2 omega() const { return omega_; }
    Vec2 perp() const { return perp_; }
    double angle() const { return std::atan2(omega_.y, omega_.x); }

  private:
    Vec2 omega_;
    Vec2 perp_;
};

//---------------------------------------------------------------------------//
//! One node of the enumerated boundary.
struct BoundaryNode
{
    std::size_t node = 0;  //!< flat grid index
    Vec2 position;
    Vec2 normal;  //!< unit outward normal (averaged at corners)
    double weight = 0;  //!< trapezoidal arc-length weight
    double arc_length = 0;  //!< counterclockwise from (xmin, ymin)
    //! Inward grid steps (di, dj) used by one-sided normal stencils: one for
    //! edge nodes, two (one per axis) for corners.
    std::array<std::array<int, 2>, 2> inward{};
    int stencil_count = 1;
};

/*!
 * Rectangular domain with a uniform square-cell grid.
 *
 * Nodes are cell corners, including the boundary; node (i, j) sits at
 * (xmin + i*dx, ymin + j*dx) with flat index i + j*(n_cells+1). The boundary
 * is enumerated counterclockwise starting at (xmin, ymin).
 */
class GridDomain
{
  public:
    GridDomain(double xmin, double xmax, double ymin, double ymax, int n_cells);

    double xmin() const { return xmin_; }
    double xmax() const { return xmax_; }
    double ymin() const { return ymin_; }
    double ymax() const { return ymax_; }
    int n_cells() const { return n_cells_; }
    int nodes_per_side() const { return n_cells_ + 1; }
    double spacing() const { return dx_; }
    std::size_t node_count() const
    {
        auto n = static_cast<std::size_t>(n_cells_ + 1);
        return n * n;
    }
    double perimeter() const { return 2 * (xmax_ - xmin_) + 2 * (ymax_ - ymin_); }

    std::size_t index(int i, int j) const
    {
        return static_cast<std::size_t>(i)
               + static_cast<std::size_t>(j) * static_cast<std::size_t>(n_cells_ + 1);
    }
    std::pair<int, int> coords(std::size_t node) const
    {
        auto n = static_cast<std::size_t>(n_cells_ + 1);
        return {static_cast<int>(node % n), static_cast<int>(node / n)};
    }
    Vec2 position(int i, int j) const { return {xmin_ + i * dx_, ymin_ + j * dx_}; }
    Vec2 position(std::size_t node) const
    {
        auto [i, j] = coords(node);
        return position(i, j);
    }
    bool is_boundary(int i, int j) const
    {
        return i == 0 || j == 0 || i == n_cells_ || j == n_cells_;
    }

    std::span<const BoundaryNode> boundary() const { return boundary_; }
    //! Rectangle corners, counterclockwise from (xmin, ymin).
    std::array<Vec2, 4> corners() const;

    //! Same bounds and resolution.
    bool same_grid(GridDomain const& other) const;

  private:
    double xmin_, xmax_, ymin_, ymax_;
    int n_cells_;
    double dx_;
    std::vector<BoundaryNode> boundary_;
};

//---------------------------------------------------------------------------//
// Inclusion shapes
//---------------------------------------------------------------------------//
struct Disk
{
    Vec2 center;
    double radius = 0;
};

//! Convex polygon, vertices counterclockwise after construction.
class ConvexPolygon
{
  public:
    //! Accepts either orientation; throws InputError if not strictly convex
    //! or of zero area.
    explicit ConvexPolygon(std::vector<Vec2> vertices);
    std::span<const Vec2> vertices() const { return vertices_; }

  private:
    std::vector<Vec2> vertices_;
};

struct DiskUnion
{
    std::vector<Disk> disks;
};

using InclusionShape = std::variant<Disk, ConvexPolygon, DiskUnion>;

//! Whether the point lies in the (open) shape.
bool contains(InclusionShape const& shape, Vec2 p);
double area(InclusionShape const& shape);
//! Distance from the shape to the domain boundary (negative if it pokes out).
double clearance(InclusionShape const& shape, GridDomain const& domain);
//! Throws InputError unless area > 0 and clearance >= 2 dx.
void validate_shape(InclusionShape const& shape, GridDomain const& domain);
//! Points on the shape boundary, for containment checks and plotting.
std::vector<Vec2> sample_boundary(InclusionShape const& shape, std::size_t count);

//---------------------------------------------------------------------------//
//! Convex polygon produced by half-plane intersection; may be empty.
struct HullPolygon
{
    std::vector<Vec2> vertices;  //!< counterclockwise
    bool empty() const { return vertices.size() < 3; }
    double area() const;
};

//---------------------------------------------------------------------------//
// Operations
//---------------------------------------------------------------------------//
struct SupportBounds
{
    double lower;  //!< b(omega) = min over the closed domain of omega . x
    double upper;  //!< B(omega) = max
};

SupportBounds support_bounds(GridDomain const& domain, Direction const& dir);

//! 0/1 indicator at grid nodes strictly inside any of the shapes.
std::vector<double>
inclusion_mask(std::span<InclusionShape const> shapes, GridDomain const& domain);
std::vector<double> inclusion_mask(InclusionShape const& shape, GridDomain const& domain);

//! Infimum of omega . x over the shape.
double true_support(InclusionShape const& shape, Direction const& dir);

struct HalfPlane
{
    Direction dir;
    double offset;  //!< keeps {x : omega . x >= offset}
};

//! Domain rectangle intersected with all half-planes. Needs >= 3 of them.
HullPolygon hull_from_halfplanes(std::span<HalfPlane const> halfplanes,
                                 GridDomain const& domain);

//! Symmetric Hausdorff distance between the filled polygons, evaluated on
//! boundary samples no farther apart than \c sample_spacing.
double hausdorff_distance(HullPolygon const& p, HullPolygon const& q, double sample_spacing);

//! Polygon approximating a shape's convex hull with \c count boundary samples.
HullPolygon convex_hull_of(InclusionShape const& shape, std::size_t count = 2048);

//! Convex hull (Andrew monotone chain) of a point set.
HullPolygon convex_hull(std::vector<Vec2> points);

}  // namespace enclosure
