// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include "enclosure/enclosure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

#include "enclosure/error.hpp"
#include "enclosure/parallel.hpp"

namespace enclosure
{
//---------------------------------------------------------------------------//
Complex indicator_boundary(BoundaryTrace const& measured_neumann,
                           BoundaryTrace const& background_neumann, BoundaryTrace const& f)
{
    if (!measured_neumann.domain().same_grid(f.domain())
        || !background_neumann.domain().same_grid(f.domain()))
    {
        throw InputError("indicator traces live on different grids");
    }
    return boundary_inner_product(trace_difference(measured_neumann, background_neumann), f);
}

Complex indicator_tilde_boundary(BoundaryTrace const& linearized_neumann,
                                 BoundaryTrace const& background_neumann, BoundaryTrace const& f)
{
    return indicator_boundary(linearized_neumann, background_neumann, f);
}

Complex indicator_tilde_volume(NonlinearityModel const& model, ComplexField const& v)
{
    auto const& dom = v.domain();
    if (!dom.same_grid(model.domain()))
        throw InputError("indicator_tilde_volume: field and model on different grids");
    double dx2 = dom.spacing() * dom.spacing();
    double a1 = model.alpha1();
    double acc = 0;
    int n = dom.n_cells();
    for (int j = 1; j < n; ++j)
    {
        for (int i = 1; i < n; ++i)
        {
            auto k = dom.index(i, j);
            double r = std::abs(v[k]);
            double r2 = r * r;
            double term = model.remainder(k, r) * r2;
            if (model.mask()[k] != 0)
                term += model.q1d()[k] * std::pow(r, 2 + a1);
            acc += term;
        }
    }
    return Complex(-dx2 * acc, 0);
}

double scaled_log_indicator(ProbeParams const& params, double log_abs_I, int alpha1)
{
    if (log_abs_I == -INFINITY)
        return -INFINITY;
    return (alpha1 + 2) * params.J / params.h + log_abs_I;
}

IndicatorSample make_indicator_sample(int probe_id, ProbeParams const& params, Complex I, int alpha1)
{
    IndicatorSample s;
    s.probe_id = probe_id;
    s.params = params;
    double mag = std::abs(I);
    s.log_abs_I = mag > 0 ? std::log(mag) : -INFINITY;
    s.phase = mag > 0 ? std::arg(I) : 0.0;
    s.scaled_log = scaled_log_indicator(params, s.log_abs_I, alpha1);
    return s;
}

//---------------------------------------------------------------------------//
char const* to_string(Verdict v)
{
    switch (v)
    {
        case Verdict::below:
            return "below";
        case Verdict::above:
            return "above";
        case Verdict::undecided:
            return "undecided";
    }
    return "?";
}

char const* to_string(SlopeModel m)
{
    return m == SlopeModel::exponential ? "exponential" : "exponential_with_prefactor";
}

char const* to_string(SupportMethod m)
{
    return m == SupportMethod::bisection ? "bisection" : "slope_regression";
}

double default_dead_zone(int alpha1, double dx) { return (alpha1 + 2) * dx; }

namespace
{
struct Fit
{
    double intercept = 0, slope = 0, prefactor = 0, misfit = 0;
};

Fit fit_scaled_log(std::span<IndicatorSample const* const> pts, SlopeModel model)
{
    auto n = static_cast<Eigen::Index>(pts.size());
    Eigen::Index p = model == SlopeModel::exponential ? 2 : 3;
    Eigen::MatrixXd a(n, p);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        double h = pts[i]->params.h;
        a(i, 0) = 1;
        a(i, 1) = 1 / h;
        if (p == 3)
            a(i, 2) = std::log(h);
        y(i) = pts[i]->scaled_log;
    }
    Eigen::VectorXd x = a.colPivHouseholderQr().solve(y);
    Eigen::VectorXd resid = y - a * x;
    double spread = (y.array() - y.mean()).matrix().norm();
    Fit f;
    f.intercept = x(0);
    f.slope = x(1);
    f.prefactor = p == 3 ? x(2) : 0.0;
    f.misfit = spread > 0 ? resid.norm() / spread : 0.0;
    return f;
}
}  // namespace

Classification classify_offset(std::span<IndicatorSample const> samples, ClassifyOptions const& opts)
{
    if (samples.size() < 3)
        throw InputError("classify_offset needs at least 3 h values");
    auto const& p0 = samples.front().params;
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        auto const& p = samples[i].params;
        if (p.t != p0.t || p.J != p0.J || p.dir.omega().x != p0.dir.omega().x
            || p.dir.omega().y != p0.dir.omega().y)
        {
            throw InputError("classify_offset samples must share (omega, t, J)");
        }
        if (i > 0 && !(p.h < samples[i - 1].params.h))
            throw InputError("classify_offset needs strictly decreasing h values");
    }

    std::vector<IndicatorSample const*> pts;
    for (auto const& s : samples)
    {
        if (s.scaled_log != -INFINITY)
            pts.push_back(&s);
    }
    Classification c;
    if (pts.empty())
    {
        c.verdict = Verdict::below;
        c.slope = -INFINITY;
        return c;
    }
    std::size_t params = opts.model == SlopeModel::exponential ? 2 : 3;
    if (pts.size() < 3 || pts.size() < params)
    {
        c.verdict = Verdict::undecided;
        c.points_used = pts.size();
        return c;
    }

    Fit fit = fit_scaled_log(pts, opts.model);
    if (fit.misfit > opts.misfit_threshold && pts.size() - 1 >= std::max<std::size_t>(params + 1, 3))
    {
        pts.erase(pts.begin());
        fit = fit_scaled_log(pts, opts.model);
        c.dropped_largest_h = true;
    }
    c.slope = fit.slope;
    c.intercept = fit.intercept;
    c.prefactor = fit.prefactor;
    c.misfit = fit.misfit;
    c.points_used = pts.size();
    if (fit.slope < -opts.dead_zone)
        c.verdict = Verdict::below;
    else if (fit.slope > opts.dead_zone)
        c.verdict = Verdict::above;
    else
        c.verdict = Verdict::undecided;
    return c;
}

//---------------------------------------------------------------------------//
SupportEstimate estimate_support_bisection(GridDomain const& domain, Direction const& dir,
                                           OffsetClassifier const& classify, double tol_t)
{
    if (!(tol_t > 0))
        throw InputError("bisection tolerance must be positive");
    auto [b, B] = support_bounds(domain, dir);
    double lo = b;
    double hi = B;
    SupportEstimate est;
    est.dir = dir;
    est.method = SupportMethod::bisection;
    std::size_t decided = 0;
    while (hi - lo > tol_t)
    {
        double mid = (lo + hi) / 2;
        auto c = classify(mid);
        ++est.samples_used;
        if (c.verdict == Verdict::below)
        {
            lo = mid;
            ++decided;
        }
        else if (c.verdict == Verdict::above)
        {
            hi = mid;
            ++decided;
        }
        else
        {
            // Nothing decided yet: an undecided verdict needs a decided neighbour.
            if (decided == 0)
            {
                est.samples_used += 2;
                if (classify(mid - tol_t).verdict == Verdict::undecided
                    && classify(mid + tol_t).verdict == Verdict::undecided)
                    throw SolverError("all verdicts undecided");
            }
            est.t_star_est = mid;
            est.confidence = hi - lo;
            return est;
        }
    }
    est.t_star_est = (lo + hi) / 2;
    est.confidence = hi - lo;
    return est;
}

SupportEstimate estimate_support_grid(GridDomain const& domain, Direction const& dir,
                                      std::span<double const> t_grid,
                                      std::function<Classification(std::size_t)> const& classify)
{
    if (t_grid.empty())
        throw InputError("offset grid is empty");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
    {
        if (!(t_grid[i] > t_grid[i - 1]))
            throw InputError("offset grid must be strictly increasing");
    }
    auto [b, B] = support_bounds(domain, dir);
    auto at = [&](long i) {
        if (i < 0)
            return b;
        if (i >= static_cast<long>(t_grid.size()))
            return B;
        return t_grid[i];
    };
    long lo = -1;
    long hi = static_cast<long>(t_grid.size());
    SupportEstimate est;
    est.dir = dir;
    est.method = SupportMethod::bisection;
    std::size_t decided = 0;
    while (hi - lo > 1)
    {
        long mid = lo + (hi - lo) / 2;
        auto c = classify(static_cast<std::size_t>(mid));
        ++est.samples_used;
        if (c.verdict == Verdict::below)
        {
            lo = mid;
            ++decided;
        }
        else if (c.verdict == Verdict::above)
        {
            hi = mid;
            ++decided;
        }
        else
        {
            if (decided == 0)
            {
                auto undecided_at = [&](long i) {
                    if (i < 0 || i >= static_cast<long>(t_grid.size()))
                        return true;
                    ++est.samples_used;
                    return classify(static_cast<std::size_t>(i)).verdict == Verdict::undecided;
                };
                if (undecided_at(mid - 1) && undecided_at(mid + 1))
                    throw SolverError("all verdicts undecided");
            }
            est.t_star_est = at(mid);
            est.confidence = at(hi) - at(lo);
            return est;
        }
    }
    if (decided == 0)
        throw SolverError("all verdicts undecided");
    est.t_star_est = (at(lo) + at(hi)) / 2;
    est.confidence = at(hi) - at(lo);
    return est;
}

SupportEstimate estimate_support_slope(GridDomain const& domain, Direction const& dir,
                                       std::span<SlopeObservation const> obs, int alpha1)
{
    auto [b, B] = support_bounds(domain, dir);
    std::vector<double> ts;
    for (auto const& o : obs)
    {
        if (o.c.verdict == Verdict::undecided || !std::isfinite(o.c.slope))
            continue;
        ts.push_back(std::clamp(o.t - o.c.slope / (alpha1 + 2), b, B));
    }
    if (ts.empty())
        throw SolverError("all offset verdicts undecided");
    std::sort(ts.begin(), ts.end());
    auto quantile = [&](double q) {
        double pos = q * static_cast<double>(ts.size() - 1);
        auto i = static_cast<std::size_t>(std::floor(pos));
        double frac = pos - static_cast<double>(i);
        if (i + 1 >= ts.size())
            return ts.back();
        return ts[i] * (1 - frac) + ts[i + 1] * frac;
    };
    SupportEstimate est;
    est.dir = dir;
    est.method = SupportMethod::slope_regression;
    est.t_star_est = quantile(0.5);
    est.confidence = quantile(0.75) - quantile(0.25);
    est.samples_used = ts.size();
    return est;
}

//---------------------------------------------------------------------------//
Reconstruction reconstruct(GridDomain const& domain, std::vector<SupportEstimate> estimates,
                           std::vector<SkippedDirection> skipped)
{
    if (estimates.size() < 3)
    {
        throw SolverError("reconstruction needs at least 3 successful directions, got "
                          + std::to_string(estimates.size()));
    }
    std::vector<HalfPlane> planes;
    for (auto const& e : estimates)
        planes.push_back(HalfPlane{e.dir, e.t_star_est});
    Reconstruction r;
    r.hull = hull_from_halfplanes(planes, domain);
    r.estimates = std::move(estimates);
    r.skipped = std::move(skipped);
    return r;
}

std::vector<Direction> uniform_directions(int n)
{
    if (n < 1)
        throw InputError("direction count must be positive");
    std::vector<Direction> out;
    for (int k = 0; k < n; ++k)
        out.push_back(Direction::from_angle(2 * std::numbers::pi * k / n));
    return out;
}

//---------------------------------------------------------------------------//
InversionEngine::InversionEngine(BackgroundModel background) : solver_(std::move(background)) {}

IndicatorSample InversionEngine::evaluate(MeasurementRecord const& record) const
{
    if (!record.f.domain().same_grid(domain()))
        throw InputError("measurement grid does not match the background model grid");
    auto bg = solver_.solve_background_linearized(record.f).neumann();
    Complex I = indicator_boundary(record.dnu, bg, record.f);
    return make_indicator_sample(record.probe_id, record.params, I, alpha1());
}

namespace
{
ClassifyOptions resolved(ClassifyOptions c, int alpha1, double dx)
{
    if (!(c.dead_zone > 0))
        c.dead_zone = default_dead_zone(alpha1, dx);
    return c;
}
}  // namespace

OffsetQuery query_offset(MeasurementDevice const& device, InversionEngine const& engine,
                         Direction const& dir, double t, double J, PipelineOptions const& opts,
                         int first_probe_id)
{
    OffsetQuery q;
    q.t = t;
    for (std::size_t k = 0; k < opts.h_ladder.size(); ++k)
    {
        ProbeSpec spec{first_probe_id + static_cast<int>(k), ProbeParams{dir, t, J, opts.h_ladder[k]}};
        auto rec = device.measure(spec);
        q.samples.push_back(engine.evaluate(rec));
    }
    q.c = classify_offset(q.samples,
                          resolved(opts.classify, engine.alpha1(), engine.domain().spacing()));
    return q;
}

DirectionReport probe_direction(MeasurementDevice const& device, InversionEngine const& engine,
                                Direction const& dir, PipelineOptions const& opts, int probe_id_base)
{
    DirectionReport rep;
    rep.dir = dir;
    rep.estimate.dir = dir;
    try
    {
        rep.J = choose_J(engine.domain(), dir, engine.alpha1(), engine.alpha2(), opts.j_margin);
        int stride = static_cast<int>(opts.h_ladder.size());
        rep.estimate = estimate_support_bisection(engine.domain(), dir, [&](double t) {
            int id = probe_id_base + static_cast<int>(rep.queries.size()) * stride;
            rep.queries.push_back(query_offset(device, engine, dir, t, rep.J, opts, id));
            return rep.queries.back().c;
        }, opts.tol_t);
        rep.ok = true;
    }
    catch (std::exception const& e)
    {
        rep.ok = false;
        rep.error = e.what();
    }
    return rep;
}

std::pair<Reconstruction, std::vector<DirectionReport>>
reconstruct_online(MeasurementDevice const& device, InversionEngine const& engine,
                   std::span<Direction const> directions, PipelineOptions const& opts)
{
    std::vector<DirectionReport> reports(directions.size());
    parallel_for(directions.size(), opts.jobs, [&](std::size_t i) {
        reports[i] = probe_direction(device, engine, directions[i], opts,
                                     static_cast<int>(i) * 100000);
    });
    std::vector<SupportEstimate> est;
    std::vector<SkippedDirection> skipped;
    for (auto const& r : reports)
    {
        if (r.ok)
            est.push_back(r.estimate);
        else
            skipped.push_back({r.dir, r.error});
    }
    auto rec = reconstruct(engine.domain(), std::move(est), std::move(skipped));
    return {std::move(rec), std::move(reports)};
}

}  // namespace enclosure
