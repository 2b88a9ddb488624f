// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include "enclosure/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

#include "enclosure/error.hpp"

namespace enclosure
{
//---------------------------------------------------------------------------//
Direction Direction::from_angle(double angle)
{
    Vec2 w{std::cos(angle), std::sin(angle)};
    return Direction(w, Vec2{-w.y, w.x});
}

Direction Direction::from_vector(Vec2 omega)
{
    double len = norm(omega);
    if (!(len > 0) || !std::isfinite(len))
    {
        throw InputError("direction vector must be nonzero and finite");
    }
    Vec2 w = (1 / len) * omega;
    return Direction(w, Vec2{-w.y, w.x});
}

Direction::Direction(Vec2 omega, Vec2 omega_perp) : omega_(omega), perp_(omega_perp)
{
    constexpr double tol = 1e-14;
    if (std::abs(dot(omega, omega) - 1) > tol || std::abs(dot(omega_perp, omega_perp) - 1) > tol
        || std::abs(dot(omega, omega_perp)) > tol)
    {
        throw InputError("direction pair must be orthonormal");
    }
}

//---------------------------------------------------------------------------//
GridDomain::GridDomain(double xmin, double xmax, double ymin, double ymax, int n_cells)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), n_cells_(n_cells)
{
    if (n_cells < 2)
    {
        throw InputError("grid needs at least 2 cells per axis");
    }
    if (!(xmax > xmin) || !(ymax > ymin))
    {
        throw InputError("domain bounds must be increasing");
    }
    double wx = xmax - xmin;
    double wy = ymax - ymin;
    if (std::abs(wx - wy) > 1e-12 * std::max(wx, wy))
    {
        throw InputError("domain must have square cells: x and y extents differ");
    }
    dx_ = wx / n_cells;

    int n = n_cells;
    boundary_.reserve(4 * static_cast<std::size_t>(n));
    constexpr double s2 = std::numbers::sqrt2 / 2;
    double s = 0;
    auto push_edge = [&](int i, int j, Vec2 normal, std::array<int, 2> in) {
        BoundaryNode b;
        b.node = index(i, j);
        b.position = position(i, j);
        b.normal = normal;
        b.weight = dx_;
        b.arc_length = s;
        b.inward[0] = in;
        b.stencil_count = 1;
        boundary_.push_back(b);
        s += dx_;
    };
    auto push_corner = [&](int i, int j, Vec2 normal, std::array<int, 2> in_x, std::array<int, 2> in_y) {
        BoundaryNode b;
        b.node = index(i, j);
        b.position = position(i, j);
        b.normal = normal;
        b.weight = dx_;  // dx/2 from each incident edge
        b.arc_length = s;
        b.inward[0] = in_x;
        b.inward[1] = in_y;
        b.stencil_count = 2;
        boundary_.push_back(b);
        s += dx_;
    };

    push_corner(0, 0, {-s2, -s2}, {1, 0}, {0, 1});
    for (int i = 1; i < n; ++i)
        push_edge(i, 0, {0, -1}, {0, 1});
    push_corner(n, 0, {s2, -s2}, {-1, 0}, {0, 1});
    for (int j = 1; j < n; ++j)
        push_edge(n, j, {1, 0}, {-1, 0});
    push_corner(n, n, {s2, s2}, {-1, 0}, {0, -1});
    for (int i = n - 1; i > 0; --i)
        push_edge(i, n, {0, 1}, {0, -1});
    push_corner(0, n, {-s2, s2}, {1, 0}, {0, -1});
    for (int j = n - 1; j > 0; --j)
        push_edge(0, j, {-1, 0}, {1, 0});
}

std::array<Vec2, 4> GridDomain::corners() const
{
    return {Vec2{xmin_, ymin_}, Vec2{xmax_, ymin_}, Vec2{xmax_, ymax_}, Vec2{xmin_, ymax_}};
}

bool GridDomain::same_grid(GridDomain const& other) const
{
    return xmin_ == other.xmin_ && xmax_ == other.xmax_ && ymin_ == other.ymin_
           && ymax_ == other.ymax_ && n_cells_ == other.n_cells_;
}

//---------------------------------------------------------------------------//
namespace
{
double signed_area(std::span<const Vec2> v)
{
    double a = 0;
    for (std::size_t k = 0; k < v.size(); ++k)
    {
        a += cross(v[k], v[(k + 1) % v.size()]);
    }
    return a / 2;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b)
{
    Vec2 ab = b - a;
    double len2 = dot(ab, ab);
    double s = len2 > 0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    return norm(p - (a + s * ab));
}

//! Distance from p to a convex CCW polygon region (0 inside).
double point_polygon_distance(Vec2 p, std::span<const Vec2> v)
{
    bool inside = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < v.size(); ++k)
    {
        Vec2 a = v[k];
        Vec2 b = v[(k + 1) % v.size()];
        if (cross(b - a, p - a) < 0)
            inside = false;
        best = std::min(best, point_segment_distance(p, a, b));
    }
    return inside ? 0.0 : best;
}

template<class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};
template<class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double disk_clearance(Disk const& d, GridDomain const& dom)
{
    return std::min({d.center.x - d.radius - dom.xmin(), dom.xmax() - d.center.x - d.radius,
                     d.center.y - d.radius - dom.ymin(), dom.ymax() - d.center.y - d.radius});
}
}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices))
{
    if (vertices_.size() < 3)
    {
        throw InputError("polygon needs at least 3 vertices");
    }
    if (signed_area(vertices_) < 0)
    {
        std::reverse(vertices_.begin(), vertices_.end());
    }
    if (!(signed_area(vertices_) > 0))
    {
        throw InputError("polygon has zero area");
    }
    for (std::size_t k = 0; k < vertices_.size(); ++k)
    {
        Vec2 a = vertices_[k];
        Vec2 b = vertices_[(k + 1) % vertices_.size()];
        Vec2 c = vertices_[(k + 2) % vertices_.size()];
        if (!(cross(b - a, c - b) > 0))
        {
            throw InputError("polygon must be strictly convex");
        }
    }
}

bool contains(InclusionShape const& shape, Vec2 p)
{
    return std::visit(
        Overloaded{
            [&](Disk const& d) { return norm(p - d.center) < d.radius; },
            [&](ConvexPolygon const& poly) {
                auto v = poly.vertices();
                for (std::size_t k = 0; k < v.size(); ++k)
                {
                    if (!(cross(v[(k + 1) % v.size()] - v[k], p - v[k]) > 0))
                        return false;
                }
                return true;
            },
            [&](DiskUnion const& u) {
                return std::any_of(u.disks.begin(), u.disks.end(),
                                   [&](Disk const& d) { return norm(p - d.center) < d.radius; });
            },
        },
        shape);
}

double area(InclusionShape const& shape)
{
    return std::visit(
        Overloaded{
            [](Disk const& d) { return std::numbers::pi * d.radius * d.radius; },
            [](ConvexPolygon const& poly) { return signed_area(poly.vertices()); },
            [](DiskUnion const& u) {
                // Overlaps are not subtracted; this is only used as a
                // positivity check.
                double a = 0;
                for (auto const& d : u.disks)
                    a += std::numbers::pi * d.radius * d.radius;
                return a;
            },
        },
        shape);
}

double clearance(InclusionShape const& shape, GridDomain const& domain)
{
    return std::visit(
        Overloaded{
            [&](Disk const& d) { return disk_clearance(d, domain); },
            [&](ConvexPolygon const& poly) {
                double c = std::numeric_limits<double>::infinity();
                for (Vec2 p : poly.vertices())
                {
                    c = std::min({c, p.x - domain.xmin(), domain.xmax() - p.x, p.y - domain.ymin(),
                                  domain.ymax() - p.y});
                }
                return c;
            },
            [&](DiskUnion const& u) {
                double c = std::numeric_limits<double>::infinity();
                for (auto const& d : u.disks)
                    c = std::min(c, disk_clearance(d, domain));
                return c;
            },
        },
        shape);
}

void validate_shape(InclusionShape const& shape, GridDomain const& domain)
{
    if (auto const* u = std::get_if<DiskUnion>(&shape); u && u->disks.empty())
    {
        throw InputError("disk union has no disks");
    }
    if (!(area(shape) > 0))
    {
        throw InputError("inclusion must have positive area");
    }
    double c = clearance(shape, domain);
    if (!(c >= 2 * domain.spacing()))
    {
        throw InputError("inclusion too close to the domain boundary: clearance "
                         + std::to_string(c) + " < 2 dx");
    }
}

std::vector<Vec2> sample_boundary(InclusionShape const& shape, std::size_t count)
{
    std::vector<Vec2> out;
    auto circle = [&](Disk const& d, std::size_t m) {
        for (std::size_t k = 0; k < m; ++k)
        {
            double a = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
            out.push_back(d.center + d.radius * Vec2{std::cos(a), std::sin(a)});
        }
    };
    std::visit(Overloaded{
                   [&](Disk const& d) { circle(d, count); },
                   [&](ConvexPolygon const& poly) {
                       auto v = poly.vertices();
                       std::size_t per_edge = std::max<std::size_t>(1, count / v.size());
                       for (std::size_t k = 0; k < v.size(); ++k)
                       {
                           Vec2 a = v[k];
                           Vec2 b = v[(k + 1) % v.size()];
                           for (std::size_t m = 0; m < per_edge; ++m)
                           {
                               double s = static_cast<double>(m) / static_cast<double>(per_edge);
                               out.push_back(a + s * (b - a));
                           }
                       }
                   },
                   [&](DiskUnion const& u) {
                       std::size_t per = std::max<std::size_t>(8, count / std::max<std::size_t>(1, u.disks.size()));
                       for (auto const& d : u.disks)
                           circle(d, per);
                   },
               },
               shape);
    return out;
}

double HullPolygon::area() const
{
    return empty() ? 0.0 : signed_area(vertices);
}

//---------------------------------------------------------------------------//
SupportBounds support_bounds(GridDomain const& domain, Direction const& dir)
{
    SupportBounds r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (Vec2 c : domain.corners())
    {
        double v = dot(dir.omega(), c);
        r.lower = std::min(r.lower, v);
        r.upper = std::max(r.upper, v);
    }
    return r;
}

std::vector<double>
inclusion_mask(std::span<InclusionShape const> shapes, GridDomain const& domain)
{
    for (auto const& s : shapes)
        validate_shape(s, domain);

    std::vector<double> mask(domain.node_count(), 0.0);
    for (std::size_t k = 0; k < mask.size(); ++k)
    {
        Vec2 p = domain.position(k);
        for (auto const& s : shapes)
        {
            if (contains(s, p))
            {
                mask[k] = 1.0;
                break;
            }
        }
    }
    return mask;
}

std::vector<double> inclusion_mask(InclusionShape const& shape, GridDomain const& domain)
{
    return inclusion_mask(std::span<InclusionShape const>(&shape, 1), domain);
}

double true_support(InclusionShape const& shape, Direction const& dir)
{
    Vec2 w = dir.omega();
    return std::visit(
        Overloaded{
            [&](Disk const& d) { return dot(w, d.center) - d.radius; },
            [&](ConvexPolygon const& poly) {
                double t = std::numeric_limits<double>::infinity();
                for (Vec2 p : poly.vertices())
                    t = std::min(t, dot(w, p));
                return t;
            },
            [&](DiskUnion const& u) {
                double t = std::numeric_limits<double>::infinity();
                for (auto const& d : u.disks)
                    t = std::min(t, dot(w, d.center) - d.radius);
                return t;
            },
        },
        shape);
}

//---------------------------------------------------------------------------//
namespace
{
//! Sutherland-Hodgman step against {omega . x >= t}.
std::vector<Vec2> clip(std::vector<Vec2> const& poly, Vec2 w, double t)
{
    std::vector<Vec2> out;
    if (poly.empty())
        return out;
    constexpr double eps = 1e-14;
    for (std::size_t k = 0; k < poly.size(); ++k)
    {
        Vec2 a = poly[k];
        Vec2 b = poly[(k + 1) % poly.size()];
        double fa = dot(w, a) - t;
        double fb = dot(w, b) - t;
        bool ina = fa >= -eps;
        bool inb = fb >= -eps;
        if (ina)
            out.push_back(a);
        if (ina != inb)
        {
            double s = fa / (fa - fb);
            out.push_back(a + s * (b - a));
        }
    }
    // Drop coincident consecutive vertices.
    std::vector<Vec2> dedup;
    for (Vec2 p : out)
    {
        if (dedup.empty() || norm(p - dedup.back()) > 1e-12)
            dedup.push_back(p);
    }
    while (dedup.size() > 1 && norm(dedup.front() - dedup.back()) <= 1e-12)
        dedup.pop_back();
    return dedup;
}
}  // namespace

HullPolygon hull_from_halfplanes(std::span<HalfPlane const> halfplanes, GridDomain const& domain)
{
    if (halfplanes.size() < 3)
    {
        throw InputError("hull reconstruction needs at least 3 directions");
    }
    auto c = domain.corners();
    std::vector<Vec2> poly(c.begin(), c.end());
    for (auto const& hp : halfplanes)
    {
        poly = clip(poly, hp.dir.omega(), hp.offset);
        if (poly.size() < 3)
            return HullPolygon{};
    }
    HullPolygon hull{std::move(poly)};
    if (!(hull.area() > 0))
        return HullPolygon{};
    return hull;
}

double hausdorff_distance(HullPolygon const& p, HullPolygon const& q, double sample_spacing)
{
    if (p.empty() || q.empty())
    {
        throw InputError("hausdorff distance of an empty polygon");
    }
    if (!(sample_spacing > 0))
    {
        throw InputError("sample spacing must be positive");
    }
    auto one_sided = [&](HullPolygon const& a, HullPolygon const& b) {
        double worst = 0;
        auto const& v = a.vertices;
        for (std::size_t k = 0; k < v.size(); ++k)
        {
            Vec2 s = v[k];
            Vec2 e = v[(k + 1) % v.size()];
            auto m = static_cast<std::size_t>(std::ceil(norm(e - s) / sample_spacing));
            m = std::max<std::size_t>(m, 1);
            for (std::size_t i = 0; i < m; ++i)
            {
                Vec2 x = s + (static_cast<double>(i) / static_cast<double>(m)) * (e - s);
                worst = std::max(worst, point_polygon_distance(x, b.vertices));
            }
        }
        return worst;
    };
    return std::max(one_sided(p, q), one_sided(q, p));
}

HullPolygon convex_hull(std::vector<Vec2> pts)
{
    std::sort(pts.begin(), pts.end(),
              [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    if (pts.size() < 3)
        return HullPolygon{};
    std::vector<Vec2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0)
            --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i)
    {
        while (k >= t && cross(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= 0)
            --k;
        h[k++] = pts[i - 1];
    }
    h.resize(k - 1);
    return HullPolygon{std::move(h)};
}

HullPolygon convex_hull_of(InclusionShape const& shape, std::size_t count)
{
    if (auto const* poly = std::get_if<ConvexPolygon>(&shape))
    {
        auto v = poly->vertices();
        return HullPolygon{std::vector<Vec2>(v.begin(), v.end())};
    }
    return convex_hull(sample_boundary(shape, count));
}

}  // namespace enclosure
