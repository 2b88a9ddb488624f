// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <memory>

#include "field.hpp"

namespace enclosure
{
/*!
 * The 5-point operator Delta_h + q0 on interior nodes, with Dirichlet
 * elimination of boundary nodes, and its sparse Cholesky factorization.
 *
 * Built once per (grid, q0) and reused for every right-hand side. The
 * factorization is immutable, so concurrent solves are safe.
 */
class DiscreteOperator
{
  public:
    //! Throws InputError if q0 > 0 anywhere or q0 lives on another grid,
    //! SolverError if the factorization fails.
    explicit DiscreteOperator(RealField q0);

    GridDomain const& domain() const { return q0_.domain(); }
    DomainPtr const& domain_ptr() const { return q0_.domain_ptr(); }
    RealField const& q0() const { return q0_; }
    bool q0_is_zero() const { return q0_zero_; }

    /*!
     * Solve (Delta_h + q0) u = source at interior nodes with u = dirichlet on
     * the boundary. Either argument may be null (zero).
     */
    ComplexField solve(ComplexField const* source, BoundaryTrace const* dirichlet) const;

    //! (Delta_h + q0) u at interior nodes; zero at boundary nodes.
    ComplexField apply(ComplexField const& u) const;

    //! Max-norm residual of a solve, relative to the operator scale
    //! ||source|| + (4/dx^2 + ||q0||) ||u||.
    double relative_residual(ComplexField const& u, ComplexField const* source) const;

  private:
    struct Factorization;
    RealField q0_;
    bool q0_zero_ = true;
    double q0_sup_ = 0;
    std::shared_ptr<Factorization const> factor_;
};

//---------------------------------------------------------------------------//
//! Zero-extension of boundary data into a grid field.
ComplexField zero_extension(BoundaryTrace const& f);
//! Boundary restriction of a field, tagged as Dirichlet data.
BoundaryTrace restrict_to_boundary(ComplexField const& u);
//! Boundary values of a closed-form function.
template<class F>
BoundaryTrace boundary_data(DomainPtr const& domain, F&& fn)
{
    std::vector<Complex> v;
    v.reserve(domain->boundary().size());
    for (auto const& b : domain->boundary())
        v.push_back(Complex(fn(b.position)));
    return BoundaryTrace(domain, TraceRole::dirichlet, std::move(v));
}
//! Node values of a closed-form function.
template<class T, class F>
GridFunction<T> sample_field(DomainPtr const& domain, F&& fn)
{
    std::vector<T> v(domain->node_count());
    for (std::size_t k = 0; k < v.size(); ++k)
        v[k] = static_cast<T>(fn(domain->position(k)));
    return GridFunction<T>(domain, std::move(v));
}

//! v with (Delta_h + q0) v = 0 inside and v = f on the boundary.
ComplexField solve_linear_dirichlet(DiscreteOperator const& op, BoundaryTrace const& f);
ComplexField solve_linear_dirichlet(RealField const& q0, BoundaryTrace const& f);

//! S[F]: w with (Delta_h + q0) w = F inside and w = 0 on the boundary.
ComplexField apply_source_solver(DiscreteOperator const& op, ComplexField const& source);
ComplexField apply_source_solver(RealField const& q0, ComplexField const& source);

/*!
 * Outward normal derivative by the second-order one-sided stencil
 * (3 u0 - 4 u1 + u2) / (2 dx) along -nu; corners combine the two axis
 * stencils with the averaged normal. Needs n_cells >= 4.
 */
BoundaryTrace neumann_trace(ComplexField const& u);

//! Trace of base + correction, kept as the exact two-term sum of the
//! component traces.
BoundaryTrace neumann_trace(ComplexField const& base, ComplexField const& correction);

//! Sum_k w_k g_k conj(f_k) with arc-length weights.
Complex boundary_inner_product(BoundaryTrace const& g, BoundaryTrace const& f);

//! a - b, with compensated tails cancelled exactly.
BoundaryTrace trace_difference(BoundaryTrace const& a, BoundaryTrace const& b);

double sup_norm(ComplexField const& u);
double sup_norm(BoundaryTrace const& f);
double sup_norm(RealField const& u);

//! Rows "x,y,re,im" in node order with 17 significant digits.
void write_field_csv(std::ostream& os, ComplexField const& u);

}  // namespace enclosure
