// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include <doctest.h>

#include "enclosure/error.hpp"
#include "enclosure/pde.hpp"
#include "enclosure/probe.hpp"
#include "helpers.hpp"

using namespace enclosure;
using enclosure::test::constant;
using enclosure::test::square;

TEST_CASE("choose J")
{
    auto d = square(16);
    auto east = Direction::from_angle(0);
    CHECK(choose_J(*d, east, 2, 4.0, 0.5) == doctest::Approx(6.5).epsilon(1e-15));
    CHECK(choose_J(*d, east, 2, 6.0, 0.5) == doctest::Approx(6.5).epsilon(1e-15));
    // alpha2 close to alpha1 makes the second term dominate.
    CHECK(choose_J(*d, east, 2, 3.0, 0.5) == doctest::Approx(2 * 5 + 0.5).epsilon(1e-15));
    CHECK_THROWS_AS(choose_J(*d, east, 2, 4.0, 0.0), InputError);
    CHECK_THROWS_AS(choose_J(*d, east, 2, 2.0, 0.5), InputError);
}

TEST_CASE("probe parameter validation")
{
    auto d = square(64);
    auto east = Direction::from_angle(0);
    CHECK_NOTHROW(ProbeParams{east, 0.4, 6.5, 0.5}.validate(*d));
    CHECK_THROWS_AS(ProbeParams({east, 1.0, 6.5, 0.5}).validate(*d), InputError);
    CHECK_THROWS_AS(ProbeParams({east, 0.0, 6.5, 1.0}).validate(*d), InputError);
    CHECK_THROWS_AS(ProbeParams({east, 0.0, -1, 0.5}).validate(*d), InputError);
    CHECK_THROWS_AS(require_probe_resolution(*square(32), 0.3), InputError);
    CHECK_NOTHROW(require_probe_resolution(*square(128), 0.3));
}

TEST_CASE("exponential probe values")
{
    auto d = square(64);
    auto east = Direction::from_angle(0);
    auto p = build_probe(d, constant(d, 0.0), {east, 0.0, 6.5, 0.5});
    CHECK(p.remainder_sup == 0.0);
    auto c = p.v[d->index(32, 32)];
    CHECK(std::abs(c) == doctest::Approx(std::exp(-13.0)).epsilon(1e-14));
    CHECK(std::abs(std::arg(c)) <= 1e-15);
    CHECK(std::abs(c) == doctest::Approx(2.2603e-6).epsilon(1e-4));

    // Node with omega.x = t.
    auto q = build_probe(d, constant(d, 0.0), {east, 0.25, 6.5, 0.5});
    CHECK(std::abs(q.v[d->index(40, 7)]) == doctest::Approx(std::exp(-13.0)).epsilon(1e-14));

    // Maximum where omega.x = b.
    double mx = 0;
    for (std::size_t k = 0; k < q.v.size(); ++k)
        mx = std::max(mx, std::abs(q.v[k]));
    CHECK(mx == doctest::Approx(std::exp(-(6.5 - 0.25 - 1.0) / 0.5)).epsilon(1e-12));

    // f is the boundary restriction.
    for (std::size_t k = 0; k < q.f.size(); ++k)
        CHECK(q.f[k] == q.v[d->boundary()[k].node]);

    // Exact per-step decay along omega.
    double ratio = std::abs(q.v[d->index(11, 5)]) / std::abs(q.v[d->index(10, 5)]);
    CHECK(ratio == doctest::Approx(std::exp(-d->spacing() / 0.5)).epsilon(1e-13));
}

TEST_CASE("probe values stay finite at small h")
{
    auto d = square(256);
    auto dir = Direction::from_angle(2.0);
    auto p = build_probe(d, constant(d, 0.0), {dir, 0.0, 30.0, 0.08});
    CHECK(p.v.all_finite());
    CHECK(sup_norm(p.f) > 0);
}

namespace
{
std::vector<double> remainder_sups(std::vector<double> const& hs)
{
    auto d = square(128);
    auto q0 = constant(d, -1.0);
    std::vector<double> sups;
    for (double h : hs)
        sups.push_back(sup_norm(cgo_remainder(q0, {Direction::from_angle(0.4), 0.0, 6.5, h})));
    return sups;
}
}  // namespace

TEST_CASE("remainder residual")
{
    auto d = square(128);
    auto q0 = constant(d, -1.0);
    auto dir = Direction::from_angle(0.4);
    for (double h : {0.5, 0.4, 0.3})
    {
        ProbeParams p{dir, 0.0, 6.5, h};
        auto r = cgo_remainder(q0, p);
        CHECK(cgo_residual(q0, p, r) <= 1e-10 * h * h);
    }
    CHECK(sup_norm(cgo_remainder(constant(d, 0.0), {dir, 0.0, 6.5, 0.5})) == 0.0);
}

TEST_CASE("probe with remainder matches the Dirichlet solution")
{
    // With zero data for r, v_h solves (Delta + q0) v = 0 with its own trace.
    std::vector<double> dx, gap;
    for (int n : {64, 128})
    {
        auto d = square(n);
        auto q0 = constant(d, -1.0);
        auto probe = build_probe(d, q0, {Direction::from_angle(0.4), 0.0, 6.5, 0.4});
        auto u = solve_linear_dirichlet(q0, probe.f);
        double e = 0;
        for (std::size_t k = 0; k < u.size(); ++k)
            e = std::max(e, std::abs(u[k] - probe.v[k]));
        dx.push_back(d->spacing());
        gap.push_back(e / sup_norm(probe.v));
    }
    CHECK(gap[1] <= 1e-4);
    CHECK(test::log_slope(dx, gap) >= 1.8);
}

TEST_CASE("remainder sup decreases with h" * doctest::should_fail())
{
    // Zero Dirichlet data pins r to -1 times the mismatch at the boundary,
    // amplified by exp(omega.x/h): the sup grows as h shrinks.
    auto sups = remainder_sups({0.5, 0.4, 0.3});
    CHECK(sups[0] > sups[1]);
    CHECK(sups[1] > sups[2]);
}

TEST_CASE("admissibility")
{
    auto d = square(64);
    auto east = Direction::from_angle(0);
    auto p = build_probe(d, constant(d, 0.0), {east, 0.4, 6.5, 0.5});
    auto rep = check_admissibility(p, 1e-4);
    CHECK(rep.envelope == doctest::Approx(2 * std::exp(-10.2)).epsilon(1e-14));
    CHECK(rep.envelope == doctest::Approx(7.4e-5).epsilon(1e-2));
    CHECK(rep.passes);
    CHECK(rep.sup_norm <= rep.envelope);
    CHECK_FALSE(check_admissibility(p, 1e-6).passes);

    // Decision follows the measured sup-norm, not the envelope.
    auto big = build_probe(d, constant(d, 0.0), {east, 0.4, 6.5, 0.99});
    auto r2 = check_admissibility(big, rep.envelope);
    CHECK(r2.passes == (r2.sup_norm <= rep.envelope));
    CHECK(r2.sup_norm <= r2.envelope);
}
