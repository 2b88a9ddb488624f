// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "field.hpp"

namespace enclosure
{
//---------------------------------------------------------------------------//
// Variants
//---------------------------------------------------------------------------//
struct KerrVariant
{
};

//! Adds q2 |z|^4 on top of the Kerr term.
struct GinzburgLandauVariant
{
    RealField q2;
};

/*!
 * Black-box medium: qtilde(x, |z|) = q(x, |z|) - q0(x) tabulated on an
 * increasing modulus grid starting at 0 and ending at or beyond 1.
 *
 * \c values holds either one row (spatially uniform) or one row per grid
 * node, each row of length moduli.size(). Lookup interpolates linearly in
 * |z|.
 */
struct CustomVariant
{
    std::vector<double> moduli;
    std::vector<double> values;
};

using NonlinearityVariant = std::variant<KerrVariant, GinzburgLandauVariant, CustomVariant>;

//---------------------------------------------------------------------------//
//! Known part of the medium, the only model data the inversion side sees.
struct BackgroundModel
{
    RealField q0;
    RealField q1b;
    int alpha1 = 2;
    double alpha2 = 4;

    //! Stable 64-bit fingerprint of the grid, q0, q1b and exponents.
    std::uint64_t hash() const;
    std::string hash_hex() const;
};

//---------------------------------------------------------------------------//
struct ModelParams
{
    int alpha1 = 2;
    double alpha2 = 4;
    double c_star = 1;
    double mu = 1;
};

/*!
 * The medium q(x,|z|) = q0 + (q1b + chi_D q1D)|z|^alpha1 + R(x,|z|).
 *
 * Coefficients are node values on one grid. Immutable after construction.
 */
class NonlinearityModel
{
  public:
    //! Throws InputError on q0 > 0, bad exponents, nonpositive constants,
    //! a mask outside {0,1}, or a contrast below mu on the inclusion.
    NonlinearityModel(RealField q0, RealField q1b, RealField q1d, RealField mask,
                      ModelParams params, NonlinearityVariant variant = KerrVariant{});

    GridDomain const& domain() const { return q0_.domain(); }
    DomainPtr const& domain_ptr() const { return q0_.domain_ptr(); }
    RealField const& q0() const { return q0_; }
    RealField const& q1b() const { return q1b_; }
    RealField const& q1d() const { return q1d_; }
    RealField const& mask() const { return mask_; }
    ModelParams const& params() const { return params_; }
    int alpha1() const { return params_.alpha1; }
    double alpha2() const { return params_.alpha2; }
    NonlinearityVariant const& variant() const { return variant_; }

    //! q1 = q1b + chi_D q1D at a node.
    double q1(std::size_t node) const { return q1b_[node] + mask_[node] * q1d_[node]; }
    //! qtilde = q - q0 at modulus r (no range check).
    double q_tilde(std::size_t node, double r) const;
    //! R = q - q0 - q1 r^alpha1 (no range check).
    double remainder(std::size_t node, double r) const;
    //! No inclusion, no remainder: the inversion side's view of the medium.
    bool is_background_only() const;
    //! R vanishes identically.
    bool remainder_is_zero() const;

    BackgroundModel background() const;

    //! A copy with q1D and the mask replaced (same background and variant).
    NonlinearityModel with_defect(RealField q1d, RealField mask) const;

  private:
    RealField q0_, q1b_, q1d_, mask_;
    ModelParams params_;
    NonlinearityVariant variant_;
};

//---------------------------------------------------------------------------//
//! q(x,|z|) z. Throws AdmissibilityError if |z| > 1.
Complex evaluate_nonlinear_term(NonlinearityModel const& model, std::size_t node, Complex z);
//! R(x,|z|). Throws AdmissibilityError if |z| > 1.
double evaluate_remainder(NonlinearityModel const& model, std::size_t node, Complex z);

//! -qtilde(x,|u|) u at every node; zero on the boundary. Throws
//! AdmissibilityError if |u| > 1 anywhere.
ComplexField nonlinear_source(NonlinearityModel const& model, ComplexField const& u);

struct KerrConditionReport
{
    //! Worst sampled LHS / (C_*(|z1|^a2 + |z2|^a2)|z1 - z2|); <= 1 passes.
    double max_violation = 0;
    Complex witness_z1;
    Complex witness_z2;
    std::size_t witness_node = 0;
    std::size_t pairs_checked = 0;
    std::size_t distinct_nodes = 0;
};

/*!
 * Sampled check of the generalized Kerr condition at every grid node.
 *
 * Pairs are stratified in modulus (including |z| = 1) with pseudo-random
 * phases; nodes with identical coefficients are checked once.
 */
KerrConditionReport
check_kerr_condition(NonlinearityModel const& model, std::size_t n_samples, std::uint64_t seed = 1);

struct PowerDifference
{
    double lhs;  //!< ||a|^alpha a - |b|^alpha b|
    double rhs;  //!< 2(|a| + |b|)^alpha |a - b|
};

PowerDifference power_difference_bound(Complex a, Complex b, double alpha);

}  // namespace enclosure
