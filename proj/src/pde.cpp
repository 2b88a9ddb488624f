// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include "enclosure/pde.hpp"

#include <array>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "enclosure/compensated.hpp"
#include "enclosure/error.hpp"

namespace enclosure
{
//---------------------------------------------------------------------------//
BoundaryTrace::BoundaryTrace(DomainPtr domain, TraceRole role)
    : domain_(std::move(domain)), role_(role), head_(domain_->boundary().size())
{
}

BoundaryTrace::BoundaryTrace(DomainPtr domain, TraceRole role, std::vector<Complex> head,
                             std::vector<Complex> tail)
    : domain_(std::move(domain)), role_(role), head_(std::move(head)), tail_(std::move(tail))
{
    if (head_.size() != domain_->boundary().size())
    {
        throw InputError("boundary trace length " + std::to_string(head_.size())
                         + " does not match boundary node count "
                         + std::to_string(domain_->boundary().size()));
    }
    if (!tail_.empty() && tail_.size() != head_.size())
    {
        throw InputError("boundary trace tail length mismatch");
    }
}

//---------------------------------------------------------------------------//
namespace
{
using SparseMatrix = Eigen::SparseMatrix<double>;
using Solver = Eigen::SimplicialLDLT<SparseMatrix>;

void require_same_grid(GridDomain const& a, GridDomain const& b, char const* what)
{
    if (&a != &b && !a.same_grid(b))
    {
        throw InputError(std::string(what) + ": fields live on different grids");
    }
}
}  // namespace

struct DiscreteOperator::Factorization
{
    int m = 0;  // interior nodes per side
    SparseMatrix matrix;  // -(Delta_h + q0) dx^2, SPD
    Solver solver;
};

DiscreteOperator::DiscreteOperator(RealField q0) : q0_(std::move(q0))
{
    auto const& dom = q0_.domain();
    for (double v : q0_.values())
    {
        if (!std::isfinite(v))
            throw InputError("q0 must be finite");
        if (v > 0)
            throw InputError("q0 must be nonpositive everywhere");
        q0_zero_ = q0_zero_ && v == 0;
        q0_sup_ = std::max(q0_sup_, -v);
    }

    auto f = std::make_shared<Factorization>();
    int n = dom.n_cells();
    int m = n - 1;
    f->m = m;
    double dx2 = dom.spacing() * dom.spacing();
    auto unknown = [m](int i, int j) { return (i - 1) + (j - 1) * m; };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m) * m * 5);
    for (int j = 1; j < n; ++j)
    {
        for (int i = 1; i < n; ++i)
        {
            int k = unknown(i, j);
            trip.emplace_back(k, k, 4.0 - q0_[dom.index(i, j)] * dx2);
            if (i > 1)
                trip.emplace_back(k, unknown(i - 1, j), -1.0);
            if (i < n - 1)
                trip.emplace_back(k, unknown(i + 1, j), -1.0);
            if (j > 1)
                trip.emplace_back(k, unknown(i, j - 1), -1.0);
            if (j < n - 1)
                trip.emplace_back(k, unknown(i, j + 1), -1.0);
        }
    }
    f->matrix.resize(m * m, m * m);
    f->matrix.setFromTriplets(trip.begin(), trip.end());
    f->solver.compute(f->matrix);
    if (f->solver.info() != Eigen::Success)
    {
        throw SolverError("factorization of Delta_h + q0 failed");
    }
    factor_ = std::move(f);
}

ComplexField DiscreteOperator::solve(ComplexField const* source, BoundaryTrace const* dirichlet) const
{
    auto const& dom = domain();
    if (source)
        require_same_grid(dom, source->domain(), "solve");
    if (dirichlet)
        require_same_grid(dom, dirichlet->domain(), "solve");

    int n = dom.n_cells();
    int m = factor_->m;
    double dx2 = dom.spacing() * dom.spacing();

    ComplexField u(domain_ptr());
    if (dirichlet)
    {
        auto bnd = dom.boundary();
        for (std::size_t k = 0; k < bnd.size(); ++k)
            u[bnd[k].node] = (*dirichlet)[k];
    }

    Eigen::MatrixX2d rhs(static_cast<Eigen::Index>(m) * m, 2);
    for (int j = 1; j < n; ++j)
    {
        for (int i = 1; i < n; ++i)
        {
            Complex b = source ? -dx2 * (*source)[dom.index(i, j)] : Complex{};
            if (dirichlet)
            {
                if (i == 1)
                    b += u[dom.index(0, j)];
                if (i == n - 1)
                    b += u[dom.index(n, j)];
                if (j == 1)
                    b += u[dom.index(i, 0)];
                if (j == n - 1)
                    b += u[dom.index(i, n)];
            }
            auto k = (i - 1) + (j - 1) * m;
            rhs(k, 0) = b.real();
            rhs(k, 1) = b.imag();
        }
    }

    Eigen::MatrixX2d x = factor_->solver.solve(rhs);
    // One step of iterative refinement keeps the residual at roundoff level
    // even when q0 makes the diagonal large.
    Eigen::MatrixX2d r = rhs - factor_->matrix * x;
    if (r.cwiseAbs().maxCoeff() > 1e-15 * std::max(rhs.cwiseAbs().maxCoeff(), 1e-300))
    {
        x += factor_->solver.solve(r);
    }
    if (factor_->solver.info() != Eigen::Success || !x.allFinite())
    {
        throw SolverError("linear solve produced non-finite values");
    }

    for (int j = 1; j < n; ++j)
    {
        for (int i = 1; i < n; ++i)
        {
            auto k = (i - 1) + (j - 1) * m;
            u[dom.index(i, j)] = Complex(x(k, 0), x(k, 1));
        }
    }
    return u;
}

ComplexField DiscreteOperator::apply(ComplexField const& u) const
{
    auto const& dom = domain();
    require_same_grid(dom, u.domain(), "apply");
    int n = dom.n_cells();
    double inv_dx2 = 1 / (dom.spacing() * dom.spacing());
    ComplexField out(domain_ptr());
    for (int j = 1; j < n; ++j)
    {
        for (int i = 1; i < n; ++i)
        {
            auto c = dom.index(i, j);
            // Single rounding per component: the stencil terms cancel to
            // many digits on near-solutions.
            Complex nb[4] = {u[dom.index(i - 1, j)], u[dom.index(i + 1, j)],
                             u[dom.index(i, j - 1)], u[dom.index(i, j + 1)]};
            auto part = [&](auto get) {
                return exact_sum(std::array<double, 6>{
                    get(nb[0]) * inv_dx2, get(nb[1]) * inv_dx2, get(nb[2]) * inv_dx2,
                    get(nb[3]) * inv_dx2, -4 * inv_dx2 * get(u[c]), q0_[c] * get(u[c])});
            };
            out[c] = Complex(part([](Complex z) { return z.real(); }),
                             part([](Complex z) { return z.imag(); }));
        }
    }
    return out;
}

double DiscreteOperator::relative_residual(ComplexField const& u, ComplexField const* source) const
{
    auto au = apply(u);
    auto const& dom = domain();
    double worst = 0;
    double src_sup = source ? sup_norm(*source) : 0.0;
    int n = dom.n_cells();
    for (int j = 1; j < n; ++j)
    {
        for (int i = 1; i < n; ++i)
        {
            auto c = dom.index(i, j);
            Complex r = au[c] - (source ? (*source)[c] : Complex{});
            worst = std::max(worst, std::abs(r));
        }
    }
    double scale = src_sup + (4 / (dom.spacing() * dom.spacing()) + q0_sup_) * sup_norm(u);
    return scale > 0 ? worst / scale : worst;
}

//---------------------------------------------------------------------------//
ComplexField zero_extension(BoundaryTrace const& f)
{
    ComplexField u(f.domain_ptr());
    auto bnd = f.domain().boundary();
    for (std::size_t k = 0; k < bnd.size(); ++k)
        u[bnd[k].node] = f[k];
    return u;
}

BoundaryTrace restrict_to_boundary(ComplexField const& u)
{
    auto bnd = u.domain().boundary();
    std::vector<Complex> v(bnd.size());
    for (std::size_t k = 0; k < bnd.size(); ++k)
        v[k] = u[bnd[k].node];
    return BoundaryTrace(u.domain_ptr(), TraceRole::dirichlet, std::move(v));
}

ComplexField solve_linear_dirichlet(DiscreteOperator const& op, BoundaryTrace const& f)
{
    return op.solve(nullptr, &f);
}

ComplexField solve_linear_dirichlet(RealField const& q0, BoundaryTrace const& f)
{
    return solve_linear_dirichlet(DiscreteOperator(q0), f);
}

ComplexField apply_source_solver(DiscreteOperator const& op, ComplexField const& source)
{
    return op.solve(&source, nullptr);
}

ComplexField apply_source_solver(RealField const& q0, ComplexField const& source)
{
    return apply_source_solver(DiscreteOperator(q0), source);
}

//---------------------------------------------------------------------------//
namespace
{
Complex normal_derivative(ComplexField const& u, BoundaryNode const& b)
{
    auto const& dom = u.domain();
    auto [i, j] = dom.coords(b.node);
    double inv = 1 / (2 * dom.spacing());
    auto one_sided = [&](std::array<int, 2> d) {
        Complex u1 = u[dom.index(i + d[0], j + d[1])];
        Complex u2 = u[dom.index(i + 2 * d[0], j + 2 * d[1])];
        return (3.0 * u[b.node] - 4.0 * u1 + u2) * inv;
    };
    if (b.stencil_count == 1)
        return one_sided(b.inward[0]);
    // Each stencil is the outward derivative along one axis; the averaged
    // normal has weight 1/sqrt(2) on each.
    return (one_sided(b.inward[0]) + one_sided(b.inward[1])) * (std::numbers::sqrt2 / 2);
}

void require_trace_resolution(GridDomain const& dom)
{
    if (dom.n_cells() < 4)
    {
        throw InputError("grid too coarse for the one-sided normal stencil (n_cells < 4)");
    }
}
}  // namespace

BoundaryTrace neumann_trace(ComplexField const& u)
{
    auto const& dom = u.domain();
    require_trace_resolution(dom);
    auto bnd = dom.boundary();
    std::vector<Complex> v(bnd.size());
    for (std::size_t k = 0; k < bnd.size(); ++k)
        v[k] = normal_derivative(u, bnd[k]);
    return BoundaryTrace(u.domain_ptr(), TraceRole::neumann, std::move(v));
}

BoundaryTrace neumann_trace(ComplexField const& base, ComplexField const& correction)
{
    auto const& dom = base.domain();
    require_same_grid(dom, correction.domain(), "neumann_trace");
    require_trace_resolution(dom);
    auto bnd = dom.boundary();
    std::vector<Complex> head(bnd.size());
    std::vector<Complex> tail(bnd.size());
    for (std::size_t k = 0; k < bnd.size(); ++k)
    {
        Complex a = normal_derivative(base, bnd[k]);
        Complex c = normal_derivative(correction, bnd[k]);
        auto re = two_sum(a.real(), c.real());
        auto im = two_sum(a.imag(), c.imag());
        head[k] = Complex(re.sum, im.sum);
        tail[k] = Complex(re.err, im.err);
    }
    return BoundaryTrace(base.domain_ptr(), TraceRole::neumann, std::move(head), std::move(tail));
}

Complex boundary_inner_product(BoundaryTrace const& g, BoundaryTrace const& f)
{
    require_same_grid(g.domain(), f.domain(), "boundary_inner_product");
    auto bnd = g.domain().boundary();
    Complex acc{};
    for (std::size_t k = 0; k < bnd.size(); ++k)
        acc += bnd[k].weight * g[k] * std::conj(f[k]);
    return acc;
}

BoundaryTrace trace_difference(BoundaryTrace const& a, BoundaryTrace const& b)
{
    require_same_grid(a.domain(), b.domain(), "trace_difference");
    std::vector<Complex> out(a.size());
    auto ah = a.head();
    auto bh = b.head();
    for (std::size_t k = 0; k < out.size(); ++k)
    {
        Complex at = a.has_tail() ? a.tail()[k] : Complex{};
        Complex bt = b.has_tail() ? b.tail()[k] : Complex{};
        out[k] = compensated_difference(ah[k], at, bh[k], bt);
    }
    return BoundaryTrace(a.domain_ptr(), a.role(), std::move(out));
}

double sup_norm(ComplexField const& u)
{
    double m = 0;
    for (Complex v : u.values())
        m = std::max(m, std::abs(v));
    return m;
}

double sup_norm(BoundaryTrace const& f)
{
    double m = 0;
    for (std::size_t k = 0; k < f.size(); ++k)
        m = std::max(m, std::abs(f[k]));
    return m;
}

double sup_norm(RealField const& u)
{
    double m = 0;
    for (double v : u.values())
        m = std::max(m, std::abs(v));
    return m;
}

void write_field_csv(std::ostream& os, ComplexField const& u)
{
    os << "x,y,re,im\n";
    char buf[128];
    for (std::size_t k = 0; k < u.size(); ++k)
    {
        Vec2 p = u.domain().position(k);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.x, p.y, u[k].real(),
                      u[k].imag());
        os << buf;
    }
}

}  // namespace enclosure
