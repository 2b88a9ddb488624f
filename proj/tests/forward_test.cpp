// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include <Eigen/SparseLU>
#include <doctest.h>

#include "enclosure/error.hpp"
#include "enclosure/forward.hpp"
#include "helpers.hpp"

using namespace enclosure;
using enclosure::test::constant;
using enclosure::test::square;

namespace
{
/*!
 * Newton's method on the real 2N-dimensional system
 * (Delta_h + q0) u + q1 |u|^2 u = 0 at interior nodes, u = f on the boundary,
 * assembled here from scratch.
 */
ComplexField newton_kerr(DomainPtr const& d, double q0, double q1, BoundaryTrace const& f)
{
    int n = d->n_cells();
    int m = n - 1;
    auto id = [&](int i, int j) { return (i - 1) + (j - 1) * m; };
    double inv = 1.0 / (d->spacing() * d->spacing());
    ComplexField u(d);
    for (std::size_t k = 0; k < f.size(); ++k)
        u[d->boundary()[k].node] = f[k];

    int unknowns = 2 * m * m;
    for (int iter = 0; iter < 30; ++iter)
    {
        Eigen::VectorXd g(unknowns);
        std::vector<Eigen::Triplet<double>> jac;
        for (int j = 1; j < n; ++j)
        {
            for (int i = 1; i < n; ++i)
            {
                auto k = d->index(i, j);
                Complex lap = (u[d->index(i + 1, j)] + u[d->index(i - 1, j)] + u[d->index(i, j + 1)]
                               + u[d->index(i, j - 1)] - 4.0 * u[k])
                              * inv;
                double a = u[k].real(), b = u[k].imag();
                Complex val = lap + q0 * u[k] + q1 * (a * a + b * b) * u[k];
                int r = id(i, j);
                g[2 * r] = val.real();
                g[2 * r + 1] = val.imag();
                double diag = -4 * inv + q0;
                jac.emplace_back(2 * r, 2 * r, diag + q1 * (3 * a * a + b * b));
                jac.emplace_back(2 * r, 2 * r + 1, q1 * 2 * a * b);
                jac.emplace_back(2 * r + 1, 2 * r, q1 * 2 * a * b);
                jac.emplace_back(2 * r + 1, 2 * r + 1, diag + q1 * (a * a + 3 * b * b));
                for (auto [ii, jj] : {std::pair{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}})
                {
                    if (d->is_boundary(ii, jj))
                        continue;
                    int c = id(ii, jj);
                    jac.emplace_back(2 * r, 2 * c, inv);
                    jac.emplace_back(2 * r + 1, 2 * c + 1, inv);
                }
            }
        }
        Eigen::SparseMatrix<double> J(unknowns, unknowns);
        J.setFromTriplets(jac.begin(), jac.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(J);
        Eigen::VectorXd step = lu.solve(g);
        double biggest = 0;
        for (int j = 1; j < n; ++j)
        {
            for (int i = 1; i < n; ++i)
            {
                int r = id(i, j);
                Complex s(step[2 * r], step[2 * r + 1]);
                u[d->index(i, j)] -= s;
                biggest = std::max(biggest, std::abs(s));
            }
        }
        if (biggest < 1e-17)
            break;
    }
    return u;
}

double max_diff(ComplexField const& a, ComplexField const& b)
{
    double e = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        e = std::max(e, std::abs(a[k] - b[k]));
    return e;
}

bool bitwise_equal(ComplexField const& a, ComplexField const& b)
{
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] != b[k])
            return false;
    return true;
}

MediumSpec disk_medium()
{
    MediumSpec m;
    m.inclusions = {Disk{{0.3, 0}, 0.2}};
    return m;
}
}  // namespace

TEST_CASE("semilinear solve against a Newton oracle")
{
    auto d = square(32);
    auto model = test::kerr(d, 0.0, 1.0, 1.0);
    auto f = boundary_data(d, [](Vec2 x) { return 0.05 * x.x; });
    FixedPointReport rep;
    auto u = ForwardSolver(model).solve_semilinear(f, {}, &rep);
    CHECK(rep.converged);
    CHECK(rep.contraction <= 0.5);
    auto oracle = newton_kerr(d, 0.0, 1.0, f);
    CHECK(max_diff(u.total(), oracle) <= 1e-10);
    // Nonlinear part scales like the cube of the amplitude.
    CHECK(sup_norm(u.correction) <= std::pow(0.05, 3));
    CHECK(sup_norm(u.correction) > 0);

    // Complex data and nonzero q0.
    auto model2 = test::kerr(d, -2.0, 1.0, 1.0);
    auto g = boundary_data(d, [](Vec2 x) { return 0.2 * Complex(x.x, x.y) / std::numbers::sqrt2; });
    auto u2 = ForwardSolver(model2).solve_semilinear(g, {});
    CHECK(max_diff(u2.total(), newton_kerr(d, -2.0, 1.0, g)) <= 1e-10);
}

TEST_CASE("semilinear residual and report")
{
    auto d = square(32);
    auto model = test::kerr(d, -0.5, 2.0, 1.0);
    auto f = boundary_data(d, [](Vec2 x) { return 0.1 * std::cos(2 * x.x) * std::cos(x.y); });
    FixedPointReport rep;
    auto u = ForwardSolver(model).solve_semilinear(f, {}, &rep);
    CHECK(rep.converged);
    CHECK(rep.iterations == static_cast<int>(rep.increments.size()));
    CHECK(rep.increments.back() <= 1e-12 * sup_norm(f));
    for (double v : rep.increments)
        CHECK(std::isfinite(v));
    CHECK(rep.residual <= 10 * 1e-12 * sup_norm(f) + 1e-14);
}

TEST_CASE("linear medium and zero data")
{
    auto d = square(32);
    auto lin = test::kerr(d, -1.0, 0.0, 1.0);
    auto f = boundary_data(d, [](Vec2 x) { return Complex(0.3 * std::exp(x.x), 0.2 * x.y); });
    FixedPointReport rep;
    ForwardSolver solver(lin);
    auto u = solver.solve_semilinear(f, {}, &rep);
    CHECK(rep.iterations == 1);
    CHECK(bitwise_equal(u.total(), solve_linear_dirichlet(lin.q0(), f)));
    CHECK(bitwise_equal(solver.solve_linearized(f).total(), u.base));

    auto kerr = ForwardSolver(test::kerr(d, 0.0, 1.0, 1.0));
    auto zero = boundary_data(d, [](Vec2) { return 0.0; });
    CHECK(sup_norm(kerr.solve_semilinear(zero, {}).total()) == 0.0);
    CHECK(sup_norm(kerr.solve_linearized(zero).total()) == 0.0);
}

TEST_CASE("admissibility and non-convergence are reported")
{
    auto d = square(16);
    ForwardSolver solver(test::kerr(d, 0.0, 1.0, 1.0));
    auto f = boundary_data(d, [](Vec2 x) { return 0.3 * x.x; });
    SolverOptions opts;
    opts.delta0 = 0.1;
    CHECK_THROWS_AS(solver.solve_semilinear(f, opts), AdmissibilityError);

    ForwardSolver strong(test::kerr(d, 0.0, 500.0, 1.0));
    auto g = boundary_data(d, [](Vec2) { return 0.9; });
    SolverOptions few;
    few.max_iter = 3;
    CHECK_THROWS_AS(strong.solve_semilinear(g, few), std::runtime_error);
}

TEST_CASE("linearized error scales with the fifth power")
{
    auto d = square(32);
    ForwardSolver solver(test::kerr(d, 0.0, 1.0, 1.0));
    std::vector<double> deltas{0.1, 0.05, 0.025}, ratios;
    for (double delta : deltas)
    {
        auto f = boundary_data(d, [&](Vec2 x) { return delta * x.x; });
        auto u = solver.solve_semilinear(f, {});
        auto ut = solver.solve_linearized(f);
        ratios.push_back(max_diff(u.correction, ut.correction) / std::pow(delta, 5));
    }
    double lo = *std::min_element(ratios.begin(), ratios.end());
    double hi = *std::max_element(ratios.begin(), ratios.end());
    CHECK(lo > 0);
    CHECK(hi / lo <= 1.5);
}

TEST_CASE("background linearization")
{
    auto d = square(32);
    auto f = boundary_data(d, [](Vec2 x) { return 0.1 * Complex(x.x, x.y); });
    auto plain = test::kerr(d, -0.3, 0.0, 1.0, {Disk{{0.3, 0}, 0.2}});
    auto vb = solve_background_linearized(plain.background(), f);
    CHECK(bitwise_equal(vb.total(), solve_linear_dirichlet(plain.q0(), f)));

    auto same = test::kerr(d, -0.3, 1.0, 1.0);
    auto ub = solve_background_linearized(same.background(), f);
    auto ut = solve_linearized(same, f);
    CHECK(bitwise_equal(ub.base, ut.base));
    CHECK(bitwise_equal(ub.correction, ut.correction));

    auto zero = boundary_data(d, [](Vec2) { return 0.0; });
    CHECK(sup_norm(solve_background_linearized(same.background(), zero).total()) == 0.0);
}

TEST_CASE("admissible radius")
{
    auto d = square(32);
    std::vector<double> ladder{0.4, 0.2, 0.1, 0.05};
    auto lin = suggest_delta0(ForwardSolver(test::kerr(d, -1.0, 0.0, 1.0)), ladder);
    CHECK(lin.delta0 == 0.4);

    auto kerr = suggest_delta0(ForwardSolver(test::kerr(d, 0.0, 1.0, 1.0)), ladder);
    CHECK(kerr.delta0 > 0);
    bool seen = false;
    for (auto const& e : kerr.evidence)
    {
        if (e.accepted)
        {
            CHECK(e.contraction <= 0.5);
            seen = seen || e.amplitude == kerr.delta0;
        }
    }
    CHECK(seen);
    CHECK(radius_battery(d).size() == 5);

    std::vector<double> rising{0.1, 0.2};
    CHECK_THROWS_AS(suggest_delta0(ForwardSolver(test::kerr(d, 0.0, 1.0, 1.0)), rising), InputError);
}

TEST_CASE("synthesis")
{
    auto d = square(128);
    ForwardSolver lin(test::kerr(d, 0.0, 0.0, 1.0));
    std::vector<ProbeSpec> none;
    CHECK(synthesize_measurements(lin, none, {}).records.empty());

    auto east = Direction::from_angle(0);
    std::vector<ProbeSpec> one{{3, ProbeParams{east, 0.4, 6.5, 0.5}}};
    auto set = synthesize_measurements(lin, one, {});
    REQUIRE(set.records.size() == 1);
    auto v = solve_linear_dirichlet(lin.model().q0(), set.records[0].f);
    auto expect = neumann_trace(v);
    for (std::size_t k = 0; k < expect.size(); ++k)
        CHECK(std::abs(set.records[0].dnu[k] - expect[k]) <= 1e-12 * std::abs(expect[k]) + 1e-300);

    // Disk defect: Neumann data sized like the exponential envelope over h.
    MeasurementDevice device(disk_medium(), d, {});
    auto rec = device.measure(one[0]);
    double peak = 0;
    for (std::size_t k = 0; k < rec.dnu.size(); ++k)
    {
        CHECK(is_finite(rec.dnu[k]));
        peak = std::max(peak, std::abs(rec.dnu[k]));
    }
    double predicted = -(6.5 - 0.4 - 1.0) / 0.5 - std::log(0.5);
    CHECK(std::abs(std::log(peak) - predicted) <= 3);
    CHECK(device.background_hash() == disk_medium().background(d).hash_hex());
}

TEST_CASE("measurement device ordering and errors")
{
    auto d = square(64);
    MeasurementDevice device(disk_medium(), d, {});
    auto east = Direction::from_angle(0);
    std::vector<ProbeSpec> probes{{9, {east, 0.3, 6.5, 0.6}}, {2, {east, 0.0, 6.5, 0.5}}};
    auto set = device.measure_all(probes);
    REQUIRE(set.records.size() == 2);
    CHECK(set.records[0].probe_id == 2);
    CHECK(set.records[1].probe_id == 9);

    std::vector<ProbeSpec> dup{{1, {east, 0.0, 6.5, 0.5}}, {1, {east, 0.1, 6.5, 0.5}}};
    CHECK_THROWS_AS(device.measure_all(dup), InputError);

    // Unresolved h names the probe.
    std::vector<ProbeSpec> coarse{{7, {east, 0.0, 6.5, 0.2}}};
    try
    {
        device.measure_all(coarse);
        FAIL("expected an input error");
    }
    catch (InputError const& e)
    {
        CHECK(std::string(e.what()).rfind("probe 7: ", 0) == 0);
    }

    SynthesisOptions tiny;
    tiny.solver.delta0 = 1e-9;
    MeasurementDevice small(disk_medium(), d, tiny);
    CHECK_THROWS_AS(small.measure(probes[0]), AdmissibilityError);
}

TEST_CASE("finer synthesis grid")
{
    auto d = square(64);
    SynthesisOptions off;
    off.crime = false;
    MeasurementDevice fine(disk_medium(), d, off);
    MeasurementDevice same(disk_medium(), d, {});
    ProbeSpec p{0, {Direction::from_angle(0.3), 0.0, 6.5, 0.5}};
    auto a = fine.measure(p);
    auto b = same.measure(p);
    REQUIRE(a.dnu.size() == b.dnu.size());
    double err = 0, scale = 0;
    for (std::size_t k = 0; k < a.dnu.size(); ++k)
    {
        CHECK(a.f[k] == b.f[k]);
        err = std::max(err, std::abs(a.dnu[k] - b.dnu[k]));
        scale = std::max(scale, std::abs(b.dnu[k]));
    }
    // Discretization error of the Neumann data, not an exact match.
    CHECK(err > 0);
    CHECK(err <= 0.05 * scale);

    auto fd = square(8);
    std::vector<Complex> vals;
    for (auto const& node : fd->boundary())
        vals.push_back(Complex(node.position.x, node.position.y));
    auto coarse = coarsen_trace(BoundaryTrace(fd, TraceRole::neumann, vals), square(4));
    for (std::size_t k = 0; k < coarse.size(); ++k)
    {
        auto pos = coarse.domain().boundary()[k].position;
        CHECK(coarse[k] == Complex(pos.x, pos.y));
    }
}
