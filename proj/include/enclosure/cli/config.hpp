// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "enclosure/enclosure.hpp"
#include "enclosure/forward.hpp"

namespace enclosure::cli
{
struct DomainConfig
{
    double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
    int n_cells = 128;

    DomainPtr make() const;
};

struct ProbeConfig
{
    std::vector<Direction> directions = uniform_directions(16);
    //! Offsets b + k*t_step inside (b, B), unless t_values is given.
    double t_step = 0.025;
    std::vector<double> t_values;
    std::vector<double> h_ladder{0.6, 0.5, 0.4, 0.3};
    double j_margin = 0.5;

    //! Offsets used for one direction, increasing.
    std::vector<double> offsets(GridDomain const& domain, Direction const& dir) const;
};

struct SolverConfig
{
    double tol = 1e-12;
    int max_iter = 50;
    bool crime = true;
    //! Fixed admissible radius; estimated from delta_ladder when absent.
    std::optional<double> delta0;
    std::vector<double> delta_ladder{0.4, 0.2, 0.1, 0.05};
};

struct ReconstructBlock
{
    //! "bisection" or "slope"
    std::string method = "bisection";
    SlopeModel slope_model = SlopeModel::exponential_with_prefactor;
    double dead_zone = 0;  //!< 0 selects (alpha1 + 2) dx
    double misfit_threshold = 0.1;
};

/*!
 * Forward-side run: full medium including the inclusion.
 */
struct ForwardConfig
{
    DomainConfig domain;
    MediumSpec medium;
    bool has_inclusion = false;
    ProbeConfig probes;
    SolverConfig solver;
    ReconstructBlock reconstruct;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
};

//! Background knowledge available to the inversion.
struct BackgroundSpec
{
    double q0 = 0;
    double q1b = 0;
    int alpha1 = 2;
    double alpha2 = 4;

    BackgroundModel build(DomainPtr const& domain) const;
};

/*!
 * Inversion-side run. There is deliberately no field for the inclusion or
 * the defect coefficients.
 */
struct InverseConfig
{
    DomainConfig domain;
    BackgroundSpec background;
    ProbeConfig probes;
    SolverConfig solver;
    ReconstructBlock reconstruct;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
};

//! Throws InputError on syntax errors, unknown keys or invalid values.
ForwardConfig parse_forward_config(nlohmann::json const& j);
//! As above; additionally refuses inclusion and defect keys.
InverseConfig parse_inverse_config(nlohmann::json const& j);

nlohmann::json load_json(std::filesystem::path const& path);

}  // namespace enclosure::cli
