// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "forward.hpp"
#include "geometry.hpp"

namespace enclosure
{
//---------------------------------------------------------------------------//
// Indicators
//---------------------------------------------------------------------------//
//! I(f) = sum_k w_k (measured - background)_k conj(f_k).
Complex indicator_boundary(BoundaryTrace const& measured_neumann,
                           BoundaryTrace const& background_neumann, BoundaryTrace const& f);

//! Same functional with the linearized full-model trace in place of the
//! measurement; a forward-side diagnostic.
Complex indicator_tilde_boundary(BoundaryTrace const& linearized_neumann,
                                 BoundaryTrace const& background_neumann, BoundaryTrace const& f);

/*!
 * -sum_interior dx^2 [chi_D q1D |v|^(2+alpha1) + R(|v|)|v|^2].
 *
 * Needs the full model, so it is only available on the forward side.
 */
Complex indicator_tilde_volume(NonlinearityModel const& model, ComplexField const& v);

//! (alpha1 + 2) J/h + log|I|, kept in the log domain.
double scaled_log_indicator(ProbeParams const& params, double log_abs_I, int alpha1);

struct IndicatorSample
{
    int probe_id = 0;
    ProbeParams params;
    double log_abs_I = 0;  //!< -inf when I == 0
    double phase = 0;
    double log_abs_I_tilde = std::numeric_limits<double>::quiet_NaN();
    double scaled_log = 0;
};

IndicatorSample make_indicator_sample(int probe_id, ProbeParams const& params, Complex I,
                                      int alpha1);

//---------------------------------------------------------------------------//
// Dichotomy classifier
//---------------------------------------------------------------------------//
enum class Verdict
{
    below,  //!< scaled indicator decays: t < t_*
    above,  //!< scaled indicator blows up: t > t_*
    undecided
};

char const* to_string(Verdict v);

enum class SlopeModel
{
    //! scaled_log = a + s/h
    exponential,
    //! scaled_log = a + s/h + p log h, absorbing polynomial prefactors
    exponential_with_prefactor
};

char const* to_string(SlopeModel m);

struct ClassifyOptions
{
    SlopeModel model = SlopeModel::exponential_with_prefactor;
    //! |slope| below this is undecided; see default_dead_zone().
    double dead_zone = 0;
    //! Relative fit residual above which the largest-h point is dropped.
    double misfit_threshold = 0.1;
};

//! (alpha1 + 2) dx: one grid cell of support resolution.
double default_dead_zone(int alpha1, double dx);

struct Classification
{
    Verdict verdict = Verdict::undecided;
    double slope = 0;
    double intercept = 0;
    double prefactor = 0;  //!< log h coefficient (0 for the plain model)
    //! ||residual|| / ||y - mean(y)|| of the final fit.
    double misfit = 0;
    std::size_t points_used = 0;
    bool dropped_largest_h = false;
};

/*!
 * Regress scaled_log against 1/h for samples sharing (omega, t, J).
 *
 * Needs >= 3 samples with strictly decreasing h. Samples with I == 0 are
 * set aside; if all are, the verdict is "below" with slope -inf.
 */
Classification classify_offset(std::span<IndicatorSample const> samples, ClassifyOptions const& opts);

//---------------------------------------------------------------------------//
// Support estimation
//---------------------------------------------------------------------------//
enum class SupportMethod
{
    bisection,
    slope_regression
};

char const* to_string(SupportMethod m);

struct SupportEstimate
{
    Direction dir = Direction::from_angle(0);
    double t_star_est = 0;
    SupportMethod method = SupportMethod::bisection;
    std::size_t samples_used = 0;  //!< classified offsets
    double confidence = 0;  //!< bracket width or inter-quartile range
};

//! Verdict for one offset, produced on demand.
using OffsetClassifier = std::function<Classification(double t)>;

/*!
 * Bisection on [b, B] until the bracket is no wider than tol_t; returns the
 * bracket midpoint. An undecided verdict at a query point ends the search
 * there (the classifier cannot resolve t_* more finely).
 */
SupportEstimate estimate_support_bisection(GridDomain const& domain, Direction const& dir,
                                           OffsetClassifier const& classify, double tol_t);

/*!
 * Bisection over a fixed increasing t grid, querying only the indices it
 * needs. The bracket ends default to b and B.
 */
SupportEstimate estimate_support_grid(GridDomain const& domain, Direction const& dir,
                                      std::span<double const> t_grid,
                                      std::function<Classification(std::size_t)> const& classify);

struct SlopeObservation
{
    double t;
    Classification c;
};

/*!
 * t_* = t - slope/(alpha1 + 2) per decided observation; median with
 * inter-quartile confidence. Throws SolverError if all are undecided.
 */
SupportEstimate estimate_support_slope(GridDomain const& domain, Direction const& dir,
                                       std::span<SlopeObservation const> obs, int alpha1);

//---------------------------------------------------------------------------//
// Reconstruction
//---------------------------------------------------------------------------//
struct SkippedDirection
{
    Direction dir;
    std::string reason;
};

struct Reconstruction
{
    HullPolygon hull;
    std::vector<SupportEstimate> estimates;
    std::vector<SkippedDirection> skipped;
};

//! Intersect the half-planes {omega.x >= t_star_est}. Needs >= 3 estimates.
Reconstruction reconstruct(GridDomain const& domain, std::vector<SupportEstimate> estimates,
                           std::vector<SkippedDirection> skipped = {});

//! n directions at angles 2 pi k / n.
std::vector<Direction> uniform_directions(int n);

//---------------------------------------------------------------------------//
// Inversion side
//---------------------------------------------------------------------------//
/*!
 * Turns measurement records into indicator samples using background
 * knowledge only.
 */
class InversionEngine
{
  public:
    explicit InversionEngine(BackgroundModel background);

    BackgroundSolver const& solver() const { return solver_; }
    GridDomain const& domain() const { return *solver_.domain_ptr(); }
    int alpha1() const { return solver_.background().alpha1; }
    double alpha2() const { return solver_.background().alpha2; }

    IndicatorSample evaluate(MeasurementRecord const& record) const;

  private:
    BackgroundSolver solver_;
};

struct PipelineOptions
{
    std::vector<double> h_ladder{0.6, 0.5, 0.4, 0.3};
    double j_margin = 0.5;
    double tol_t = 0.025;
    ClassifyOptions classify;  //!< dead_zone <= 0 selects the default
    int jobs = 1;
};

struct OffsetQuery
{
    double t;
    Classification c;
    std::vector<IndicatorSample> samples;
};

struct DirectionReport
{
    Direction dir = Direction::from_angle(0);
    double J = 0;
    std::vector<OffsetQuery> queries;  //!< in query order
    bool ok = false;
    SupportEstimate estimate;
    std::string error;
};

/*!
 * Classify one offset: synthesize the h ladder with the device, evaluate
 * indicators with the engine, regress.
 */
OffsetQuery query_offset(MeasurementDevice const& device, InversionEngine const& engine,
                         Direction const& dir, double t, double J, PipelineOptions const& opts,
                         int first_probe_id);

//! Bisection for one direction with on-demand synthesis.
DirectionReport probe_direction(MeasurementDevice const& device, InversionEngine const& engine,
                                Direction const& dir, PipelineOptions const& opts,
                                int probe_id_base = 0);

/*!
 * End-to-end reconstruction over the given directions; directions run in
 * parallel up to opts.jobs, results merge in direction order.
 */
std::pair<Reconstruction, std::vector<DirectionReport>>
reconstruct_online(MeasurementDevice const& device, InversionEngine const& engine,
                   std::span<Direction const> directions, PipelineOptions const& opts);

}  // namespace enclosure
