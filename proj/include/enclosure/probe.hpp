// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "field.hpp"
#include "geometry.hpp"

namespace enclosure
{
/*!
 * Parameters of one exponential probe
 * v_h = exp(-J/h) exp(-(omega.x - t + i omega_perp.x)/h)(1 + r_rho).
 */
struct ProbeParams
{
    Direction dir = Direction::from_angle(0);
    double t = 0;
    double J = 0;
    double h = 0.5;

    //! Throws InputError unless b < t < B, 0 < h < 1, J finite and positive.
    void validate(GridDomain const& domain) const;
};

//! J = max{(B-b)(2+2 alpha1)/alpha1, (B-b)(2+alpha2)/(alpha2-alpha1)} + margin.
double choose_J(GridDomain const& domain, Direction const& dir, int alpha1, double alpha2,
                double margin);

//! Throws InputError unless dx <= h/10.
void require_probe_resolution(GridDomain const& domain, double h);

/*!
 * r_rho solving h^2(Delta_h - (2/h) rho.grad_h + q0) r = -h^2 q0 with
 * central differences and zero Dirichlet data. Zero without a solve when
 * q0 vanishes.
 */
ComplexField cgo_remainder(RealField const& q0, ProbeParams const& params);

//! Max-norm of P_h r + h^2 q0 over interior nodes.
double cgo_residual(RealField const& q0, ProbeParams const& params, ComplexField const& r);

struct CgoProbe
{
    ProbeParams params;
    ComplexField v;  //!< v_h at every node
    BoundaryTrace f;  //!< v_h on the boundary
    double remainder_sup = 0;  //!< ||r_rho||_inf
};

CgoProbe build_probe(DomainPtr const& domain, RealField const& q0, ProbeParams const& params);

struct AdmissibilityReport
{
    bool passes = false;
    double sup_norm = 0;  //!< ||f_h||_inf
    double envelope = 0;  //!< 2 exp(-(J - t + b)/h)
    double delta0 = 0;
};

//! Passes iff ||f_h||_inf <= delta0; the envelope is reported alongside.
AdmissibilityReport check_admissibility(CgoProbe const& probe, double delta0);

}  // namespace enclosure
