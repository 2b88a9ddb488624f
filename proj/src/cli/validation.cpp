// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include "enclosure/cli/validation.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "enclosure/enclosure.hpp"
#include "enclosure/error.hpp"
#include "enclosure/parallel.hpp"

namespace enclosure::cli
{
namespace
{
std::string fmt(char const* f, double a, double b = 0, double c = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double loglog_slope(std::vector<double> const& x, std::vector<double> const& y)
{
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}
}  // namespace

SuiteResult suite_power_difference(std::uint64_t seed, std::size_t pairs)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::size_t violations = 0;
    double worst = 0;
    for (double alpha : {0.5, 1.0, 2.0, 3.0, 4.0})
    {
        for (std::size_t i = 0; i < pairs; ++i)
        {
            Complex a(u(rng), u(rng));
            Complex b(u(rng), u(rng));
            auto r = power_difference_bound(a, b, alpha);
            if (r.rhs > 0)
                worst = std::max(worst, r.lhs / r.rhs);
            if (r.lhs > r.rhs * (1 + 1e-12))
                ++violations;
        }
    }
    return {"power_difference_inequality", violations == 0,
            fmt("violations=%g worst_ratio=%.6f", double(violations), worst)};
}

SuiteResult suite_kerr_condition(NonlinearityModel const& model, std::uint64_t seed)
{
    auto rep = check_kerr_condition(model, 20000, seed);
    return {"generalized_kerr_condition", rep.max_violation <= 1,
            fmt("max_violation=%.6f pairs=%g nodes=%g", rep.max_violation,
                double(rep.pairs_checked), double(rep.distinct_nodes))};
}

SuiteResult suite_maximum_principle(NonlinearityModel const& model, std::uint64_t seed,
                                    int n_data, int n_potentials)
{
    auto dom = model.domain_ptr();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<RealField> potentials{model.q0()};
    for (int p = 1; p < n_potentials; ++p)
    {
        // Smooth random nonpositive potential.
        double a = 10 * (u(rng) + 1) / 2;
        double kx = 3 * u(rng);
        double ky = 3 * u(rng);
        potentials.push_back(sample_field<double>(dom, [&](Vec2 x) {
            return -a * (1 + std::sin(kx * x.x + ky * x.y)) / 2;
        }));
    }
    double worst = 0;
    for (auto const& q0 : potentials)
    {
        DiscreteOperator op(q0);
        for (int d = 0; d < n_data; ++d)
        {
            std::vector<Complex> vals(dom->boundary().size());
            for (auto& z : vals)
                z = Complex(u(rng), u(rng));
            BoundaryTrace f(dom, TraceRole::dirichlet, std::move(vals));
            auto v = solve_linear_dirichlet(op, f);
            worst = std::max(worst, sup_norm(v) / sup_norm(f));
        }
    }
    return {"maximum_principle", worst <= 1 + 1e-8,
            fmt("max sup|v|/sup|f|=%.15f over %g solves", worst, double(n_data * n_potentials))};
}

SuiteResult suite_contraction(ForwardSolver const& solver, double tol, double amplitude)
{
    SolverOptions opts;
    opts.tol = tol;
    opts.max_iter = 30;
    int worst_it = 0;
    double worst_c = 0;
    bool ok = true;
    std::string failure;
    for (auto const& shape : radius_battery(solver.domain_ptr()))
    {
        std::vector<Complex> vals(shape.head().begin(), shape.head().end());
        for (auto& z : vals)
            z *= amplitude;
        BoundaryTrace f(shape.domain_ptr(), TraceRole::dirichlet, std::move(vals));
        FixedPointReport rep;
        try
        {
            solver.solve_semilinear(f, opts, &rep);
        }
        catch (std::exception const& e)
        {
            ok = false;
            failure = e.what();
        }
        worst_it = std::max(worst_it, rep.iterations);
        worst_c = std::max(worst_c, rep.contraction);
    }
    ok = ok && worst_c <= 0.5 && worst_it <= 30;
    auto detail = fmt("amplitude=%g max_iterations=%g max_contraction=%.3e", amplitude, worst_it, worst_c);
    if (!failure.empty())
        detail += " error: " + failure;
    return {"fixed_point_contraction", ok, detail};
}

SuiteResult suite_linearization_scaling(ForwardSolver const& solver, double tol)
{
    auto dom = solver.domain_ptr();
    int a1 = solver.model().alpha1();
    SolverOptions opts;
    opts.tol = tol;
    std::vector<double> ladder{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> du, di;
    for (double delta : ladder)
    {
        auto f = boundary_data(dom, [&](Vec2 x) {
            return delta * Complex(x.x, x.y) / std::numbers::sqrt2;
        });
        auto u = solver.solve_semilinear(f, opts);
        auto ut = solver.solve_linearized(f);
        double d = 0;
        for (std::size_t k = 0; k < u.correction.size(); ++k)
            d = std::max(d, std::abs(u.correction[k] - ut.correction[k]));
        du.push_back(d);
        di.push_back(std::abs(boundary_inner_product(trace_difference(u.neumann(), ut.neumann()), f)));
    }
    bool nonlinear = std::all_of(du.begin(), du.end(), [](double v) { return v > 0; });
    if (!nonlinear)
        return {"linearization_scaling", true, "linear medium: u = u~ exactly"};
    double s1 = loglog_slope(ladder, du);
    bool ok = s1 >= (1 + 2 * a1) - 0.4;
    std::string detail = fmt("slope ||u-u~||=%.3f (need >= %.1f)", s1, (1 + 2 * a1) - 0.4);
    if (std::all_of(di.begin(), di.end(), [](double v) { return v > 0; }))
    {
        double s2 = loglog_slope(ladder, di);
        ok = ok && s2 >= (2 + 2 * a1) - 0.5;
        detail += fmt(" slope |I-I~|=%.3f (need >= %.1f)", s2, (2 + 2 * a1) - 0.5);
    }
    return {"linearization_scaling", ok, detail};
}

SuiteResult suite_green_identity(ForwardSolver const& solver)
{
    auto const& model = solver.model();
    auto dom = solver.domain_ptr();
    BackgroundSolver bg(model.background());
    double worst = 0;
    double floor = 1e-300;
    for (auto const& dir : uniform_directions(5))
    {
        double J = choose_J(*dom, dir, model.alpha1(), model.alpha2(), 0.5);
        auto probe = build_probe(dom, model.q0(), ProbeParams{dir, 0.0, J, 0.5});
        auto lin = solver.solve_linearized(probe.f);
        auto back = bg.solve_background_linearized(probe.f);
        Complex ib = indicator_tilde_boundary(lin.neumann(), back.neumann(), probe.f);
        Complex iv = indicator_tilde_volume(model, lin.base);
        double rel = std::abs(ib - iv) / std::max(std::abs(iv), floor);
        if (std::abs(iv) == 0 && std::abs(ib) == 0)
            rel = 0;
        worst = std::max(worst, rel);
    }
    return {"green_identity", worst <= 1e-3,
            fmt("max relative gap boundary/volume=%.3e over 5 probes at h=0.5", worst)};
}

std::vector<SuiteResult> run_validation_suites(ValidationInputs const& in)
{
    auto model = in.medium.build(in.domain);
    ForwardSolver solver(model);
    static char const* const names[] = {"power_difference_inequality", "generalized_kerr_condition",
                                        "maximum_principle", "fixed_point_contraction",
                                        "linearization_scaling", "green_identity"};
    auto run_one = [&](std::size_t i) -> SuiteResult {
        switch (i)
        {
            case 0:
                return suite_power_difference(in.seed);
            case 1:
                return suite_kerr_condition(model, in.seed);
            case 2:
                return suite_maximum_principle(model, in.seed);
            case 3:
                return suite_contraction(solver, in.tol);
            case 4:
                return suite_linearization_scaling(solver, in.tol);
            default:
                return suite_green_identity(solver);
        }
    };
    std::vector<SuiteResult> out(6);
    parallel_for(out.size(), in.jobs, [&](std::size_t i) {
        try
        {
            out[i] = run_one(i);
        }
        catch (std::exception const& e)
        {
            out[i] = SuiteResult{names[i], false, std::string("error: ") + e.what()};
        }
    });
    return out;
}

}  // namespace enclosure::cli
