// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include "enclosure/probe.hpp"

#include <cmath>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "enclosure/error.hpp"
#include "enclosure/pde.hpp"

namespace enclosure
{
void ProbeParams::validate(GridDomain const& domain) const
{
    auto [b, B] = support_bounds(domain, dir);
    if (!(t > b && t < B))
    {
        throw InputError("probe offset t = " + std::to_string(t) + " outside (b, B) = ("
                         + std::to_string(b) + ", " + std::to_string(B) + ")");
    }
    if (!(h > 0 && h < 1))
        throw InputError("probe parameter h must lie in (0, 1)");
    if (!(std::isfinite(J) && J > 0))
        throw InputError("probe shift J must be positive and finite");
}

double choose_J(GridDomain const& domain, Direction const& dir, int alpha1, double alpha2,
                double margin)
{
    if (!(margin > 0))
        throw InputError("J margin must be positive (the lower bound on J is strict)");
    if (alpha1 < 2)
        throw InputError("alpha1 must be >= 2");
    if (!(alpha2 > alpha1))
        throw InputError("alpha2 must exceed alpha1");
    auto [b, B] = support_bounds(domain, dir);
    double w = B - b;
    double a1 = alpha1;
    double first = w * (2 + 2 * a1) / a1;
    double second = w * (2 + alpha2) / (alpha2 - a1);
    return std::max(first, second) + margin;
}

void require_probe_resolution(GridDomain const& domain, double h)
{
    if (domain.spacing() > h / 10 * (1 + 1e-12))
    {
        throw InputError("grid spacing " + std::to_string(domain.spacing())
                         + " does not resolve h = " + std::to_string(h) + " (need dx <= h/10)");
    }
}

//---------------------------------------------------------------------------//
namespace
{
// Interior stencil of h^2(Delta_h - (2/h) rho.grad_h + q0) at node (i, j):
// coefficients for center, -x, +x, -y, +y.
struct PhStencil
{
    Complex center, west, east, south, north;
};

PhStencil ph_stencil(double dx, double h, Complex rx, Complex ry, double q0)
{
    double h2 = h * h;
    double lap = h2 / (dx * dx);
    Complex gx = h2 * (2 / h) * rx / (2 * dx);
    Complex gy = h2 * (2 / h) * ry / (2 * dx);
    return {-4 * lap + h2 * q0, lap + gx, lap - gx, lap + gy, lap - gy};
}

bool all_zero(RealField const& f)
{
    for (double v : f.values())
    {
        if (v != 0)
            return false;
    }
    return true;
}
}  // namespace

ComplexField cgo_remainder(RealField const& q0, ProbeParams const& params)
{
    auto const& dom = q0.domain();
    require_probe_resolution(dom, params.h);
    ComplexField r(q0.domain_ptr());
    if (all_zero(q0))
        return r;

    int n = dom.n_cells();
    int m = n - 1;
    double dx = dom.spacing();
    Complex rx(params.dir.omega().x, params.dir.perp().x);
    Complex ry(params.dir.omega().y, params.dir.perp().y);
    auto unknown = [m](int i, int j) { return (i - 1) + (j - 1) * m; };

    std::vector<Eigen::Triplet<Complex>> trip;
    Eigen::VectorXcd rhs(m * m);
    for (int j = 1; j < n; ++j)
    {
        for (int i = 1; i < n; ++i)
        {
            int k = unknown(i, j);
            double qv = q0[dom.index(i, j)];
            auto s = ph_stencil(dx, params.h, rx, ry, qv);
            trip.emplace_back(k, k, s.center);
            if (i > 1)
                trip.emplace_back(k, unknown(i - 1, j), s.west);
            if (i < n - 1)
                trip.emplace_back(k, unknown(i + 1, j), s.east);
            if (j > 1)
                trip.emplace_back(k, unknown(i, j - 1), s.south);
            if (j < n - 1)
                trip.emplace_back(k, unknown(i, j + 1), s.north);
            rhs(k) = -params.h * params.h * qv;
        }
    }
    Eigen::SparseMatrix<Complex> a(m * m, m * m);
    a.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success)
        throw SolverError("CGO remainder system is singular");
    Eigen::VectorXcd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite())
        throw SolverError("CGO remainder solve failed");
    for (int j = 1; j < n; ++j)
    {
        for (int i = 1; i < n; ++i)
            r[dom.index(i, j)] = x(unknown(i, j));
    }
    return r;
}

double cgo_residual(RealField const& q0, ProbeParams const& params, ComplexField const& r)
{
    auto const& dom = q0.domain();
    int n = dom.n_cells();
    double dx = dom.spacing();
    Complex rx(params.dir.omega().x, params.dir.perp().x);
    Complex ry(params.dir.omega().y, params.dir.perp().y);
    double worst = 0;
    for (int j = 1; j < n; ++j)
    {
        for (int i = 1; i < n; ++i)
        {
            double qv = q0[dom.index(i, j)];
            auto s = ph_stencil(dx, params.h, rx, ry, qv);
            Complex v = s.center * r[dom.index(i, j)] + s.west * r[dom.index(i - 1, j)]
                        + s.east * r[dom.index(i + 1, j)] + s.south * r[dom.index(i, j - 1)]
                        + s.north * r[dom.index(i, j + 1)] + params.h * params.h * qv;
            worst = std::max(worst, std::abs(v));
        }
    }
    return worst;
}

//---------------------------------------------------------------------------//
CgoProbe build_probe(DomainPtr const& domain, RealField const& q0, ProbeParams const& params)
{
    params.validate(*domain);
    require_probe_resolution(*domain, params.h);
    if (!q0.domain().same_grid(*domain))
        throw InputError("q0 lives on a different grid than the probe");

    ComplexField r = cgo_remainder(q0, params);
    ComplexField v(domain);
    Vec2 w = params.dir.omega();
    Vec2 wp = params.dir.perp();
    for (std::size_t k = 0; k < v.size(); ++k)
    {
        Vec2 x = domain->position(k);
        double log_mag = -(params.J - params.t + dot(w, x)) / params.h;
        double phase = -dot(wp, x) / params.h;
        v[k] = std::polar(std::exp(log_mag), phase) * (1.0 + r[k]);
    }
    auto f = restrict_to_boundary(v);
    return CgoProbe{params, std::move(v), std::move(f), sup_norm(r)};
}

AdmissibilityReport check_admissibility(CgoProbe const& probe, double delta0)
{
    auto const& p = probe.params;
    auto [b, B] = support_bounds(probe.f.domain(), p.dir);
    AdmissibilityReport rep;
    rep.sup_norm = sup_norm(probe.f);
    rep.envelope = 2 * std::exp(-(p.J - p.t + b) / p.h);
    rep.delta0 = delta0;
    rep.passes = rep.sup_norm <= delta0;
    return rep;
}

}  // namespace enclosure
