// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace enclosure
{
//! Domain outline, half-plane boundary lines, reconstructed hull and an
//! optional reference shape.
std::string svg_reconstruction(GridDomain const& domain, HullPolygon const& hull,
                               std::span<HalfPlane const> planes,
                               HullPolygon const* reference = nullptr);

//! A closed polygon path; an empty hull gives a placeholder drawing.
std::string svg_hull(HullPolygon const& hull);

struct IndicatorPoint
{
    double t;
    double h;
    double scaled_log;
};

//! scaled_log against 1/h, one polyline per offset t.
std::string svg_indicator_plot(std::span<IndicatorPoint const> points);

}  // namespace enclosure
