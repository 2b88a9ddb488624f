// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enclosure/forward.hpp"

namespace enclosure::cli
{
struct SuiteResult
{
    std::string name;
    bool passed = false;
    std::string detail;  //!< measured numbers
};

struct ValidationInputs
{
    DomainPtr domain;
    MediumSpec medium;
    std::uint64_t seed = 1;
    double tol = 1e-12;
    int jobs = 1;
};

//! ||a|^alpha a - |b|^alpha b| <= 2(|a|+|b|)^alpha |a-b| on random pairs.
SuiteResult suite_power_difference(std::uint64_t seed, std::size_t pairs = 10000);
//! Sampled generalized Kerr condition of the medium.
SuiteResult suite_kerr_condition(NonlinearityModel const& model, std::uint64_t seed);
//! sup|v_f| <= sup|f| for random data, the medium's q0 and random q0 <= 0.
SuiteResult suite_maximum_principle(NonlinearityModel const& model, std::uint64_t seed,
                                    int n_data = 20, int n_potentials = 5);
//! Battery at amplitude 0.05: <= 30 iterations, contraction <= 1/2.
SuiteResult suite_contraction(ForwardSolver const& solver, double tol, double amplitude = 0.05);
//! Log-log slopes of ||u - u~|| and |I - I~| over a dyadic amplitude ladder.
SuiteResult suite_linearization_scaling(ForwardSolver const& solver, double tol);
//! Boundary versus volume form of I~ on five exponential probes at h = 0.5.
SuiteResult suite_green_identity(ForwardSolver const& solver);

std::vector<SuiteResult> run_validation_suites(ValidationInputs const& in);

}  // namespace enclosure::cli
