// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include "enclosure/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace enclosure
{
namespace
{
constexpr double canvas = 400;
constexpr double pad = 20;

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

struct Frame
{
    double x0, x1, y0, y1;
    double sx(double x) const { return pad + (x - x0) / (x1 - x0) * (canvas - 2 * pad); }
    // SVG y grows downward
    double sy(double y) const { return canvas - pad - (y - y0) / (y1 - y0) * (canvas - 2 * pad); }
};

std::string header()
{
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(canvas) + "\" height=\""
           + num(canvas) + "\" viewBox=\"0 0 " + num(canvas) + " " + num(canvas) + "\">\n";
}

std::string path(Frame const& fr, std::span<Vec2 const> pts, char const* style, bool closed)
{
    std::string d;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        d += (i == 0 ? "M" : " L") + num(fr.sx(pts[i].x)) + "," + num(fr.sy(pts[i].y));
    }
    if (closed)
        d += " Z";
    return "  <path d=\"" + d + "\" " + style + "/>\n";
}

std::string placeholder(char const* text)
{
    return header() + "  <text x=\"" + num(canvas / 2) + "\" y=\"" + num(canvas / 2)
           + "\" text-anchor=\"middle\">" + text + "</text>\n</svg>\n";
}
}  // namespace

std::string svg_reconstruction(GridDomain const& domain, HullPolygon const& hull,
                               std::span<HalfPlane const> planes, HullPolygon const* reference)
{
    Frame fr{domain.xmin(), domain.xmax(), domain.ymin(), domain.ymax()};
    auto c = domain.corners();
    std::string out = header();
    out += path(fr, c, "fill=\"none\" stroke=\"black\"", true);
    for (auto const& hp : planes)
    {
        // Chord of the line omega.x = offset across the domain.
        Vec2 w = hp.dir.omega();
        Vec2 p = hp.dir.perp();
        Vec2 base = hp.offset * w;
        double reach = std::hypot(domain.xmax() - domain.xmin(), domain.ymax() - domain.ymin());
        std::vector<Vec2> seg{base - reach * p, base + reach * p};
        out += path(fr, seg, "stroke=\"#bbbbbb\" stroke-width=\"0.5\"", false);
    }
    if (reference && !reference->empty())
        out += path(fr, reference->vertices, "fill=\"none\" stroke=\"#1f77b4\" stroke-dasharray=\"4 2\"", true);
    if (!hull.empty())
        out += path(fr, hull.vertices, "fill=\"#d62728\" fill-opacity=\"0.25\" stroke=\"#d62728\"", true);
    out += "</svg>\n";
    return out;
}

std::string svg_hull(HullPolygon const& hull)
{
    if (hull.empty())
        return placeholder("empty hull");
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (auto v : hull.vertices)
    {
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
    }
    double span = std::max({x1 - x0, y1 - y0, 1e-12});
    Frame fr{x0, x0 + span, y0, y0 + span};
    return header() + path(fr, hull.vertices, "fill=\"none\" stroke=\"black\"", true) + "</svg>\n";
}

std::string svg_indicator_plot(std::span<IndicatorPoint const> points)
{
    std::map<double, std::vector<std::pair<double, double>>> by_t;
    for (auto const& p : points)
    {
        if (std::isfinite(p.scaled_log) && p.h > 0)
            by_t[p.t].emplace_back(1 / p.h, p.scaled_log);
    }
    if (by_t.empty())
        return placeholder("no indicator samples");

    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (auto& [t, pts] : by_t)
    {
        std::sort(pts.begin(), pts.end());
        for (auto [x, y] : pts)
        {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (x1 == x0)
        x1 = x0 + 1;
    if (y1 == y0)
        y1 = y0 + 1;
    Frame fr{x0, x1, y0, y1};
    std::string out = header();
    for (auto const& [t, pts] : by_t)
    {
        std::vector<Vec2> v;
        for (auto [x, y] : pts)
            v.push_back({x, y});
        out += "  <!-- t=" + num(t) + " -->\n";
        out += path(fr, v, "fill=\"none\" stroke=\"black\"", false);
    }
    out += "</svg>\n";
    return out;
}

}  // namespace enclosure
