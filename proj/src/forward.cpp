// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include "enclosure/forward.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "enclosure/error.hpp"
#include "enclosure/parallel.hpp"

namespace enclosure
{
ComplexField SplitField::total() const
{
    ComplexField u(base.domain_ptr());
    for (std::size_t k = 0; k < u.size(); ++k)
        u[k] = base[k] + correction[k];
    return u;
}

namespace
{
double sup_difference(ComplexField const& a, ComplexField const& b)
{
    double m = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

void require_in_ball(ComplexField const& v)
{
    double s = sup_norm(v);
    if (s > 1)
    {
        throw AdmissibilityError("linear response reaches |v| = " + std::to_string(s)
                                 + " > 1; shrink the boundary data");
    }
}

// ||Delta_h u + q(|u|) u||_inf with u = v + w, evaluated piecewise.
double semilinear_residual(ForwardSolver const& s, SplitField const& u)
{
    auto const& dom = s.op().domain();
    auto av = s.op().apply(u.base);
    auto aw = s.op().apply(u.correction);
    auto src = nonlinear_source(s.model(), u.total());
    double worst = 0;
    int n = dom.n_cells();
    for (int j = 1; j < n; ++j)
    {
        for (int i = 1; i < n; ++i)
        {
            auto k = dom.index(i, j);
            worst = std::max(worst, std::abs(av[k] + aw[k] - src[k]));
        }
    }
    return worst;
}
}  // namespace

//---------------------------------------------------------------------------//
ForwardSolver::ForwardSolver(NonlinearityModel model)
    : model_(std::move(model)), op_(model_.q0())
{
}

SplitField ForwardSolver::solve_semilinear(BoundaryTrace const& f, SolverOptions const& opts,
                                           FixedPointReport* report) const
{
    if (!(opts.tol > 0))
        throw InputError("fixed-point tolerance must be positive");
    if (opts.max_iter < 1)
        throw InputError("max_iter must be at least 1");
    double fnorm = sup_norm(f);
    if (fnorm > opts.delta0)
    {
        throw AdmissibilityError("boundary data amplitude " + std::to_string(fnorm)
                                 + " exceeds the admissible radius "
                                 + std::to_string(opts.delta0));
    }

    FixedPointReport rep;
    ComplexField v = op_.solve(nullptr, &f);
    require_in_ball(v);
    ComplexField w(v.domain_ptr());
    SplitField u{v, w};

    for (int it = 1; it <= opts.max_iter; ++it)
    {
        auto src = nonlinear_source(model_, u.total());
        ComplexField next = op_.solve(&src, nullptr);
        double inc = sup_difference(next, u.correction);
        u.correction = std::move(next);
        if (!rep.increments.empty() && rep.increments.back() > 0)
            rep.contraction = std::max(rep.contraction, inc / rep.increments.back());
        rep.increments.push_back(inc);
        rep.iterations = it;
        if ((it == 1 && inc == 0) || (it >= 2 && inc <= opts.tol * fnorm))
        {
            rep.converged = true;
            break;
        }
    }
    if (!rep.converged)
    {
        if (report)
            *report = rep;
        throw SolverError("fixed-point iteration did not converge in "
                          + std::to_string(opts.max_iter) + " iterations (last increment "
                          + std::to_string(rep.increments.back()) + ")");
    }

    require_in_ball(u.total());
    rep.residual = semilinear_residual(*this, u);
    // The second term is the rounding floor of storing u in double precision:
    // each node value is off by eps|u|, which the stencil amplifies by 8/dx^2.
    double dx = op_.domain().spacing();
    double floor = 8 * std::numeric_limits<double>::epsilon()
                   * (8 / (dx * dx) + sup_norm(model_.q0())) * sup_norm(u.base);
    if (rep.residual > 10 * opts.tol * fnorm + floor)
    {
        if (report)
            *report = rep;
        throw SolverError("semilinear residual " + std::to_string(rep.residual)
                          + " exceeds 10 tol ||f||");
    }
    if (report)
        *report = rep;
    return u;
}

SplitField ForwardSolver::solve_linearized(BoundaryTrace const& f) const
{
    ComplexField v = op_.solve(nullptr, &f);
    auto src = nonlinear_source(model_, v);
    ComplexField w = op_.solve(&src, nullptr);
    return SplitField{std::move(v), std::move(w)};
}

//---------------------------------------------------------------------------//
BackgroundSolver::BackgroundSolver(BackgroundModel background)
    : bg_(std::move(background)), op_(bg_.q0)
{
    if (!bg_.q1b.domain().same_grid(bg_.q0.domain()))
        throw InputError("q1b lives on a different grid than q0");
}

SplitField BackgroundSolver::solve_background_linearized(BoundaryTrace const& f) const
{
    ComplexField v = op_.solve(nullptr, &f);
    require_in_ball(v);
    auto const& dom = v.domain();
    ComplexField src(v.domain_ptr());
    int n = dom.n_cells();
    for (int j = 1; j < n; ++j)
    {
        for (int i = 1; i < n; ++i)
        {
            auto k = dom.index(i, j);
            src[k] = -bg_.q1b[k] * std::pow(std::abs(v[k]), bg_.alpha1) * v[k];
        }
    }
    ComplexField w = op_.solve(&src, nullptr);
    return SplitField{std::move(v), std::move(w)};
}

//---------------------------------------------------------------------------//
std::pair<SplitField, FixedPointReport>
solve_semilinear(NonlinearityModel const& model, BoundaryTrace const& f, SolverOptions const& opts)
{
    ForwardSolver s(model);
    FixedPointReport rep;
    auto u = s.solve_semilinear(f, opts, &rep);
    return {std::move(u), std::move(rep)};
}

SplitField solve_linearized(NonlinearityModel const& model, BoundaryTrace const& f)
{
    return ForwardSolver(model).solve_linearized(f);
}

SplitField solve_background_linearized(BackgroundModel const& background, BoundaryTrace const& f)
{
    return BackgroundSolver(background).solve_background_linearized(f);
}

//---------------------------------------------------------------------------//
std::vector<BoundaryTrace> radius_battery(DomainPtr const& domain)
{
    auto const& d = *domain;
    double cx = (d.xmin() + d.xmax()) / 2;
    double cy = (d.ymin() + d.ymax()) / 2;
    double rx = (d.xmax() - d.xmin()) / 2;
    double ry = (d.ymax() - d.ymin()) / 2;
    double per = d.perimeter();

    std::vector<BoundaryTrace> out;
    out.push_back(boundary_data(domain, [](Vec2) { return 1.0; }));
    out.push_back(boundary_data(domain, [&](Vec2 p) { return (p.x - cx) / rx; }));
    out.push_back(boundary_data(domain, [&](Vec2 p) { return ((p.x - cx) / rx + (p.y - cy) / ry) / 2; }));
    out.push_back(boundary_data(domain, [&](Vec2 p) {
        return std::cos(std::numbers::pi * (p.x - cx) / rx) * std::cos(std::numbers::pi * (p.y - cy) / ry);
    }));
    // Unit modulus with one full phase winding along the boundary.
    std::vector<Complex> wind;
    for (auto const& b : d.boundary())
        wind.push_back(std::polar(1.0, 2 * std::numbers::pi * b.arc_length / per));
    out.emplace_back(domain, TraceRole::dirichlet, std::move(wind));
    return out;
}

AdmissibleRadius
suggest_delta0(ForwardSolver const& solver, std::span<double const> ladder, SolverOptions opts)
{
    if (ladder.empty())
        throw InputError("amplitude ladder is empty");
    for (std::size_t i = 0; i < ladder.size(); ++i)
    {
        if (!(ladder[i] > 0 && ladder[i] <= 1))
            throw InputError("ladder amplitudes must lie in (0, 1]");
        if (i > 0 && !(ladder[i] < ladder[i - 1]))
            throw InputError("amplitude ladder must be strictly decreasing");
    }

    auto battery = radius_battery(solver.domain_ptr());
    opts.delta0 = 1;
    AdmissibleRadius out;
    for (double amp : ladder)
    {
        double worst = 0;
        for (auto const& shape : battery)
        {
            std::vector<Complex> scaled(shape.head().begin(), shape.head().end());
            for (auto& z : scaled)
                z *= amp;
            BoundaryTrace f(shape.domain_ptr(), TraceRole::dirichlet, std::move(scaled));
            FixedPointReport rep;
            try
            {
                solver.solve_semilinear(f, opts, &rep);
                worst = std::max(worst, rep.contraction);
            }
            catch (SolverError const&)
            {
                worst = INFINITY;
            }
            catch (AdmissibilityError const&)
            {
                worst = INFINITY;
            }
            if (!(worst <= 0.5))
                break;
        }
        bool ok = worst <= 0.5;
        out.evidence.push_back({amp, worst, ok});
        if (ok)
        {
            out.delta0 = amp;
            return out;
        }
    }
    throw SolverError("no ladder amplitude passed the contraction test (smallest tried: "
                      + std::to_string(ladder.back()) + ")");
}

//---------------------------------------------------------------------------//
NonlinearityModel MediumSpec::build(DomainPtr const& domain) const
{
    RealField q0f(domain, q0);
    RealField q1bf(domain, q1b);
    RealField q1df(domain, q1d);
    RealField mask(domain, inclusion_mask(inclusions, *domain));
    NonlinearityVariant variant = KerrVariant{};
    if (custom)
    {
        if (custom->values.size() != custom->moduli.size())
            throw InputError("medium tables must be spatially uniform");
        variant = *custom;
    }
    else if (ginzburg_landau)
    {
        variant = GinzburgLandauVariant{RealField(domain, q2)};
    }
    return NonlinearityModel(std::move(q0f), std::move(q1bf), std::move(q1df), std::move(mask),
                             params, std::move(variant));
}

BackgroundModel MediumSpec::background(DomainPtr const& domain) const
{
    return BackgroundModel{RealField(domain, q0), RealField(domain, q1b), params.alpha1,
                           params.alpha2};
}

BoundaryTrace coarsen_trace(BoundaryTrace const& fine, DomainPtr const& coarse)
{
    auto const& fd = fine.domain();
    auto const& cd = *coarse;
    if (fd.n_cells() != 2 * cd.n_cells() || fd.xmin() != cd.xmin() || fd.xmax() != cd.xmax()
        || fd.ymin() != cd.ymin() || fd.ymax() != cd.ymax())
    {
        throw InputError("coarsen_trace needs the same domain with twice the cells");
    }
    std::size_t nc = cd.boundary().size();
    std::vector<Complex> head(nc);
    std::vector<Complex> tail;
    if (fine.has_tail())
        tail.resize(nc);
    for (std::size_t k = 0; k < nc; ++k)
    {
        head[k] = fine.head()[2 * k];
        if (fine.has_tail())
            tail[k] = fine.tail()[2 * k];
    }
    return BoundaryTrace(coarse, fine.role(), std::move(head), std::move(tail));
}

//---------------------------------------------------------------------------//
namespace
{
MeasurementRecord measure_with(ForwardSolver const& solver, ProbeSpec const& probe,
                               SolverOptions const& opts)
{
    auto cgo = build_probe(solver.domain_ptr(), solver.model().q0(), probe.params);
    auto adm = check_admissibility(cgo, opts.delta0);
    if (!adm.passes)
    {
        throw AdmissibilityError("sup |f_h| = " + std::to_string(adm.sup_norm)
                                 + " exceeds delta0 = " + std::to_string(opts.delta0));
    }
    FixedPointReport rep;
    auto u = solver.solve_semilinear(cgo.f, opts, &rep);
    return MeasurementRecord{probe.id, probe.params, std::move(cgo.f), u.neumann(), std::move(rep)};
}

template<class F>
auto tag_probe(int id, F&& fn)
{
    std::string tag = "probe " + std::to_string(id) + ": ";
    try
    {
        return fn();
    }
    catch (AdmissibilityError const& e)
    {
        throw AdmissibilityError(tag + e.what());
    }
    catch (InputError const& e)
    {
        throw InputError(tag + e.what());
    }
    catch (SolverError const& e)
    {
        throw SolverError(tag + e.what());
    }
}

MeasurementSet collect(std::span<ProbeSpec const> probes, int jobs, DomainPtr domain,
                       std::string hash, bool crime,
                       std::function<MeasurementRecord(ProbeSpec const&)> const& one)
{
    std::vector<std::size_t> order(probes.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return probes[a].id < probes[b].id; });
    for (std::size_t i = 1; i < order.size(); ++i)
    {
        if (probes[order[i]].id == probes[order[i - 1]].id)
            throw InputError("duplicate probe id " + std::to_string(probes[order[i]].id));
    }

    std::vector<std::optional<MeasurementRecord>> slots(probes.size());
    parallel_for(order.size(), jobs, [&](std::size_t i) {
        auto const& p = probes[order[i]];
        slots[i] = tag_probe(p.id, [&] { return one(p); });
    });

    MeasurementSet set;
    set.domain = std::move(domain);
    set.background_hash = std::move(hash);
    set.crime = crime;
    set.records.reserve(slots.size());
    for (auto& s : slots)
        set.records.push_back(std::move(*s));
    return set;
}
}  // namespace

MeasurementDevice::MeasurementDevice(MediumSpec const& spec, DomainPtr domain, SynthesisOptions opts)
    : domain_(std::move(domain)), opts_(opts)
{
    hash_ = spec.background(domain_).hash_hex();
    coarse_ = std::make_shared<ForwardSolver const>(spec.build(domain_));
    if (!opts_.crime)
    {
        auto const& d = *domain_;
        auto fine = std::make_shared<GridDomain const>(d.xmin(), d.xmax(), d.ymin(), d.ymax(),
                                                       2 * d.n_cells());
        fine_ = std::make_shared<ForwardSolver const>(spec.build(fine));
    }
}

MeasurementRecord MeasurementDevice::measure_untagged(ProbeSpec const& probe) const
{
    if (opts_.crime)
        return measure_with(*coarse_, probe, opts_.solver);
    auto rec = measure_with(*fine_, probe, opts_.solver);
    rec.f = coarsen_trace(rec.f, domain_);
    rec.dnu = coarsen_trace(rec.dnu, domain_);
    return rec;
}

MeasurementRecord MeasurementDevice::measure(ProbeSpec const& probe) const
{
    return tag_probe(probe.id, [&] { return measure_untagged(probe); });
}

MeasurementSet MeasurementDevice::measure_all(std::span<ProbeSpec const> probes) const
{
    return collect(probes, opts_.jobs, domain_, hash_, opts_.crime,
                   [this](ProbeSpec const& p) { return measure_untagged(p); });
}

MeasurementSet synthesize_measurements(ForwardSolver const& solver,
                                       std::span<ProbeSpec const> probes,
                                       SolverOptions const& opts, int jobs)
{
    return collect(probes, jobs, solver.domain_ptr(), solver.model().background().hash_hex(), true,
                   [&](ProbeSpec const& p) { return measure_with(solver, p, opts); });
}

}  // namespace enclosure
