// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "enclosure/field.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/nonlinearity.hpp"

namespace enclosure::test
{
inline DomainPtr square(int n, double lo = -1, double hi = 1)
{
    return std::make_shared<GridDomain const>(lo, hi, lo, hi, n);
}

inline RealField constant(DomainPtr const& d, double v)
{
    return RealField(d, v);
}

//! Kerr medium with constant coefficients and an optional disk defect.
inline NonlinearityModel kerr(DomainPtr const& d, double q0, double q1b, double q1d,
                              std::vector<InclusionShape> const& shapes = {},
                              ModelParams params = {})
{
    auto mask = shapes.empty() ? RealField(d, 0.0)
                               : RealField(d, inclusion_mask(std::span(shapes), *d));
    return NonlinearityModel(constant(d, q0), constant(d, q1b), constant(d, q1d), std::move(mask),
                             params);
}

inline double log_slope(std::vector<double> const& x, std::vector<double> const& y)
{
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

}  // namespace enclosure::test
