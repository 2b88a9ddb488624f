// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nonlinearity.hpp"
#include "pde.hpp"
#include "probe.hpp"

namespace enclosure
{
/*!
 * A solution kept as base + correction.
 *
 * The base is the linear response v_f; the correction is the (much smaller)
 * nonlinear part. Keeping them apart lets Neumann traces carry the exact sum
 * of the two component traces.
 */
struct SplitField
{
    ComplexField base;
    ComplexField correction;

    ComplexField total() const;
    //! Compensated trace of base + correction.
    BoundaryTrace neumann() const { return neumann_trace(base, correction); }
};

struct SolverOptions
{
    //! Stop once the sup-norm increment is <= tol * ||f||_inf.
    double tol = 1e-12;
    int max_iter = 50;
    //! Data with ||f||_inf above this are refused.
    double delta0 = 1;
};

struct FixedPointReport
{
    int iterations = 0;
    std::vector<double> increments;  //!< ||w_{k+1} - w_k||_inf
    bool converged = false;
    //! Largest ratio of consecutive increments (0 with fewer than two).
    double contraction = 0;
    //! ||Delta_h u + q(|u|) u||_inf at interior nodes.
    double residual = 0;
};

//---------------------------------------------------------------------------//
/*!
 * Full-knowledge forward solver: the medium model plus its cached linear
 * factorization. Thread-safe for concurrent solves.
 */
class ForwardSolver
{
  public:
    explicit ForwardSolver(NonlinearityModel model);

    NonlinearityModel const& model() const { return model_; }
    DiscreteOperator const& op() const { return op_; }
    DomainPtr const& domain_ptr() const { return model_.domain_ptr(); }

    /*!
     * Fixed point of w -> S[-qtilde(|v_f + w|)(v_f + w)] from w = 0.
     *
     * Throws AdmissibilityError if ||f|| > delta0 or |u| leaves the unit
     * ball, SolverError on non-convergence or an excessive final residual.
     */
    SplitField solve_semilinear(BoundaryTrace const& f, SolverOptions const& opts,
                                FixedPointReport* report = nullptr) const;

    //! v_f + S[-qtilde(|v_f|) v_f].
    SplitField solve_linearized(BoundaryTrace const& f) const;

  private:
    NonlinearityModel model_;
    DiscreteOperator op_;
};

/*!
 * Inversion-side solver: only q0, q1b and alpha1 are known.
 */
class BackgroundSolver
{
  public:
    explicit BackgroundSolver(BackgroundModel background);

    BackgroundModel const& background() const { return bg_; }
    DiscreteOperator const& op() const { return op_; }
    DomainPtr const& domain_ptr() const { return bg_.q0.domain_ptr(); }

    //! v_f + S[-q1b |v_f|^alpha1 v_f].
    SplitField solve_background_linearized(BoundaryTrace const& f) const;

  private:
    BackgroundModel bg_;
    DiscreteOperator op_;
};

//---------------------------------------------------------------------------//
// One-shot conveniences (factorize per call)
std::pair<SplitField, FixedPointReport>
solve_semilinear(NonlinearityModel const& model, BoundaryTrace const& f, SolverOptions const& opts);
SplitField solve_linearized(NonlinearityModel const& model, BoundaryTrace const& f);
SplitField solve_background_linearized(BackgroundModel const& background, BoundaryTrace const& f);

//---------------------------------------------------------------------------//
struct RadiusEvidence
{
    double amplitude;
    double contraction;  //!< worst over the battery; inf if a solve failed
    bool accepted;
};

//! Empirical admissible radius; not the (uncomputable) theoretical one.
struct AdmissibleRadius
{
    double delta0 = 0;
    std::vector<RadiusEvidence> evidence;
};

//! The five boundary shapes used to probe contraction, sup-norm one each.
std::vector<BoundaryTrace> radius_battery(DomainPtr const& domain);

/*!
 * Largest ladder amplitude whose battery solves all converge with
 * contraction <= 1/2. Ladder must be decreasing and <= 1. Throws
 * SolverError if none qualifies.
 */
AdmissibleRadius suggest_delta0(ForwardSolver const& solver, std::span<double const> ladder,
                                SolverOptions opts = {});

//---------------------------------------------------------------------------//
// Measurements
//---------------------------------------------------------------------------//
struct ProbeSpec
{
    int id = 0;
    ProbeParams params;
};

struct MeasurementRecord
{
    int probe_id = 0;
    ProbeParams params;
    BoundaryTrace f;  //!< Dirichlet data f_h
    BoundaryTrace dnu;  //!< measured Neumann data, compensated
    FixedPointReport report;  //!< not persisted
};

/*!
 * Records sorted by probe id. Metadata describe the grid and the
 * background only.
 */
struct MeasurementSet
{
    DomainPtr domain;
    std::string background_hash;
    bool crime = true;
    std::vector<MeasurementRecord> records;
};

/*!
 * Forward-side description of a medium with constant coefficients.
 *
 * Unlike a NonlinearityModel, it can be rasterized on any grid, which the
 * finer synthesis grid of crime-off runs requires.
 */
struct MediumSpec
{
    double q0 = 0;
    double q1b = 0;
    double q1d = 1;
    std::vector<InclusionShape> inclusions;
    ModelParams params;
    //! Ginzburg-Landau coefficient; used when \c ginzburg_landau is set.
    double q2 = 0;
    bool ginzburg_landau = false;
    //! Spatially uniform qtilde table; overrides the closed forms if set.
    std::optional<CustomVariant> custom;

    NonlinearityModel build(DomainPtr const& domain) const;
    BackgroundModel background(DomainPtr const& domain) const;
};

struct SynthesisOptions
{
    SolverOptions solver;
    int jobs = 1;
    //! Synthesize on the inversion grid (true) or on a 2x finer grid and
    //! restrict the traces (false).
    bool crime = true;
};

/*!
 * The forward side of an experiment: produces Neumann data for requested
 * probes. Safe to call from several threads.
 */
class MeasurementDevice
{
  public:
    MeasurementDevice(MediumSpec const& spec, DomainPtr domain, SynthesisOptions opts);

    DomainPtr const& domain_ptr() const { return domain_; }
    ForwardSolver const& solver() const { return *coarse_; }
    SynthesisOptions const& options() const { return opts_; }
    std::string background_hash() const { return hash_; }

    MeasurementRecord measure(ProbeSpec const& probe) const;
    //! Records ordered by probe id regardless of completion order.
    MeasurementSet measure_all(std::span<ProbeSpec const> probes) const;

  private:
    MeasurementRecord measure_untagged(ProbeSpec const& probe) const;

    DomainPtr domain_;
    SynthesisOptions opts_;
    std::string hash_;
    std::shared_ptr<ForwardSolver const> coarse_;
    std::shared_ptr<ForwardSolver const> fine_;
};

//! Inverse-crime synthesis straight from a model.
MeasurementSet synthesize_measurements(ForwardSolver const& solver,
                                       std::span<ProbeSpec const> probes,
                                       SolverOptions const& opts, int jobs = 1);

//! Boundary restriction from a grid to the grid with half the cells.
BoundaryTrace coarsen_trace(BoundaryTrace const& fine, DomainPtr const& coarse);

}  // namespace enclosure
