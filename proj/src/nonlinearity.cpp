// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include "enclosure/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <random>
#include <string>

#include "enclosure/error.hpp"

namespace enclosure
{
namespace
{
void require_grid(RealField const& f, GridDomain const& dom, char const* name)
{
    if (!f.domain().same_grid(dom))
        throw InputError(std::string(name) + " lives on a different grid than q0");
    if (!f.all_finite())
        throw InputError(std::string(name) + " has non-finite values");
}

double interpolate_row(std::vector<double> const& moduli, double const* row, double r)
{
    auto it = std::upper_bound(moduli.begin(), moduli.end(), r);
    if (it == moduli.begin())
        return row[0];
    if (it == moduli.end())
        return row[moduli.size() - 1];
    auto k = static_cast<std::size_t>(it - moduli.begin());
    double r0 = moduli[k - 1];
    double r1 = moduli[k];
    double s = (r - r0) / (r1 - r0);
    return (1 - s) * row[k - 1] + s * row[k];
}

// FNV-1a; stable across platforms for identical IEEE bit patterns.
struct Fnv1a
{
    std::uint64_t state = 0xcbf29ce484222325ULL;
    void bytes(void const* p, std::size_t n)
    {
        auto const* c = static_cast<unsigned char const*>(p);
        for (std::size_t i = 0; i < n; ++i)
        {
            state ^= c[i];
            state *= 0x100000001b3ULL;
        }
    }
    void value(double v)
    {
        if (v == 0)
            v = 0;  // fold -0 into +0
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        bytes(&bits, sizeof bits);
    }
};
}  // namespace

//---------------------------------------------------------------------------//
std::uint64_t BackgroundModel::hash() const
{
    Fnv1a h;
    auto const& d = q0.domain();
    for (double v : {d.xmin(), d.xmax(), d.ymin(), d.ymax(), double(d.n_cells())})
        h.value(v);
    h.value(alpha1);
    h.value(alpha2);
    for (double v : q0.values())
        h.value(v);
    for (double v : q1b.values())
        h.value(v);
    return h.state;
}

std::string BackgroundModel::hash_hex() const
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

//---------------------------------------------------------------------------//
NonlinearityModel::NonlinearityModel(RealField q0, RealField q1b, RealField q1d, RealField mask,
                                     ModelParams params, NonlinearityVariant variant)
    : q0_(std::move(q0))
    , q1b_(std::move(q1b))
    , q1d_(std::move(q1d))
    , mask_(std::move(mask))
    , params_(params)
    , variant_(std::move(variant))
{
    auto const& dom = q0_.domain();
    require_grid(q0_, dom, "q0");
    require_grid(q1b_, dom, "q1b");
    require_grid(q1d_, dom, "q1D");
    require_grid(mask_, dom, "inclusion mask");

    for (double v : q0_.values())
    {
        if (v > 0)
            throw InputError("q0 must be nonpositive everywhere");
    }
    if (params_.alpha1 < 2)
        throw InputError("alpha1 must be an integer >= 2");
    if (!(params_.alpha2 > params_.alpha1))
        throw InputError("alpha2 must exceed alpha1");
    if (!(params_.c_star > 0))
        throw InputError("C_star must be positive");
    if (!(params_.mu > 0))
        throw InputError("mu must be positive");

    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t k = 0; k < mask_.size(); ++k)
    {
        if (mask_[k] != 0 && mask_[k] != 1)
            throw InputError("inclusion mask must be 0/1");
        if (mask_[k] == 1)
        {
            lo = std::min(lo, q1d_[k]);
            hi = std::max(hi, q1d_[k]);
        }
    }
    if (std::isfinite(lo) && !(lo >= params_.mu || hi <= -params_.mu))
    {
        throw InputError("q1D contrast on the inclusion is below mu (need min >= mu or max <= -mu)");
    }

    if (auto* gl = std::get_if<GinzburgLandauVariant>(&variant_))
    {
        require_grid(gl->q2, dom, "q2");
    }
    else if (auto* c = std::get_if<CustomVariant>(&variant_))
    {
        auto nm = c->moduli.size();
        if (nm < 2 || c->moduli.front() != 0 || c->moduli.back() < 1)
            throw InputError("custom table moduli must start at 0 and reach 1");
        if (!std::is_sorted(c->moduli.begin(), c->moduli.end())
            || std::adjacent_find(c->moduli.begin(), c->moduli.end()) != c->moduli.end())
            throw InputError("custom table moduli must be strictly increasing");
        if (c->values.size() != nm && c->values.size() != nm * dom.node_count())
            throw InputError("custom table needs one row or one row per grid node");
        for (double v : c->values)
        {
            if (!std::isfinite(v))
                throw InputError("custom table has non-finite values");
        }
    }
}

double NonlinearityModel::q_tilde(std::size_t node, double r) const
{
    double kerr = q1(node) * std::pow(r, params_.alpha1);
    return std::visit(
        [&](auto const& v) -> double {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, KerrVariant>)
            {
                return kerr;
            }
            else if constexpr (std::is_same_v<V, GinzburgLandauVariant>)
            {
                double r2 = r * r;
                return kerr + v.q2[node] * r2 * r2;
            }
            else
            {
                auto nm = v.moduli.size();
                double const* row = v.values.data() + (v.values.size() == nm ? 0 : node * nm);
                return interpolate_row(v.moduli, row, r);
            }
        },
        variant_);
}

double NonlinearityModel::remainder(std::size_t node, double r) const
{
    return std::visit(
        [&](auto const& v) -> double {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, KerrVariant>)
            {
                return 0.0;
            }
            else if constexpr (std::is_same_v<V, GinzburgLandauVariant>)
            {
                double r2 = r * r;
                return v.q2[node] * r2 * r2;
            }
            else
            {
                return q_tilde(node, r) - q1(node) * std::pow(r, params_.alpha1);
            }
        },
        variant_);
}

bool NonlinearityModel::remainder_is_zero() const
{
    if (std::holds_alternative<KerrVariant>(variant_))
        return true;
    if (auto* gl = std::get_if<GinzburgLandauVariant>(&variant_))
    {
        return std::all_of(gl->q2.values().begin(), gl->q2.values().end(),
                           [](double v) { return v == 0; });
    }
    return false;
}

bool NonlinearityModel::is_background_only() const
{
    bool no_defect = std::all_of(mask_.values().begin(), mask_.values().end(),
                                 [](double v) { return v == 0; });
    return no_defect && remainder_is_zero();
}

BackgroundModel NonlinearityModel::background() const
{
    return BackgroundModel{q0_, q1b_, params_.alpha1, params_.alpha2};
}

NonlinearityModel NonlinearityModel::with_defect(RealField q1d, RealField mask) const
{
    return NonlinearityModel(q0_, q1b_, std::move(q1d), std::move(mask), params_, variant_);
}

//---------------------------------------------------------------------------//
namespace
{
void require_admissible(double r)
{
    if (!(r <= 1))
    {
        throw AdmissibilityError("|z| = " + std::to_string(r)
                                 + " leaves the unit ball where the medium model is valid");
    }
}
}  // namespace

Complex evaluate_nonlinear_term(NonlinearityModel const& model, std::size_t node, Complex z)
{
    double r = std::abs(z);
    require_admissible(r);
    return (model.q0()[node] + model.q_tilde(node, r)) * z;
}

double evaluate_remainder(NonlinearityModel const& model, std::size_t node, Complex z)
{
    double r = std::abs(z);
    require_admissible(r);
    return model.remainder(node, r);
}

ComplexField nonlinear_source(NonlinearityModel const& model, ComplexField const& u)
{
    auto const& dom = u.domain();
    ComplexField out(u.domain_ptr());
    int n = dom.n_cells();
    for (int j = 1; j < n; ++j)
    {
        for (int i = 1; i < n; ++i)
        {
            auto k = dom.index(i, j);
            double r = std::abs(u[k]);
            require_admissible(r);
            out[k] = -model.q_tilde(k, r) * u[k];
        }
    }
    return out;
}

//---------------------------------------------------------------------------//
KerrConditionReport
check_kerr_condition(NonlinearityModel const& model, std::size_t n_samples, std::uint64_t seed)
{
    KerrConditionReport report;
    if (n_samples == 0)
        throw InputError("check_kerr_condition needs at least one sample");

    // Representative node per distinct coefficient set.
    std::map<std::vector<double>, std::size_t> groups;
    auto const& variant = model.variant();
    std::size_t nodes = model.domain().node_count();
    for (std::size_t k = 0; k < nodes; ++k)
    {
        std::vector<double> key{model.q1(k)};
        if (auto* gl = std::get_if<GinzburgLandauVariant>(&variant))
        {
            key.push_back(gl->q2[k]);
        }
        else if (auto* c = std::get_if<CustomVariant>(&variant))
        {
            auto nm = c->moduli.size();
            if (c->values.size() != nm)
                key.insert(key.end(), c->values.begin() + k * nm, c->values.begin() + (k + 1) * nm);
        }
        groups.emplace(std::move(key), k);
    }
    report.distinct_nodes = groups.size();
    if (model.remainder_is_zero())
    {
        // LHS is R(|z1|)z1 - R(|z2|)z2, identically zero.
        report.pairs_checked = n_samples * groups.size();
        return report;
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double const two_pi = 2 * std::acos(-1.0);
    double a2 = model.alpha2();
    double cs = model.params().c_star;

    std::vector<std::pair<Complex, Complex>> pairs;
    pairs.reserve(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s)
    {
        // Stratify the first modulus, include the rim exactly.
        double r1 = (s + 1 == n_samples) ? 1.0 : (s + unit(rng)) / double(n_samples);
        double r2 = (s % 4 == 0) ? 1.0 : unit(rng);
        pairs.emplace_back(std::polar(r1, two_pi * unit(rng)), std::polar(r2, two_pi * unit(rng)));
    }

    for (auto const& [key, node] : groups)
    {
        for (auto [z1, z2] : pairs)
        {
            double diff = std::abs(z1 - z2);
            if (diff == 0)
                continue;
            Complex lhs_c = model.remainder(node, std::abs(z1)) * z1
                            - model.remainder(node, std::abs(z2)) * z2;
            double rhs = cs * (std::pow(std::abs(z1), a2) + std::pow(std::abs(z2), a2)) * diff;
            double ratio = std::abs(lhs_c) / rhs;
            if (ratio > report.max_violation)
            {
                report.max_violation = ratio;
                report.witness_z1 = z1;
                report.witness_z2 = z2;
                report.witness_node = node;
            }
        }
        report.pairs_checked += pairs.size();
    }
    return report;
}

PowerDifference power_difference_bound(Complex a, Complex b, double alpha)
{
    double ra = std::abs(a);
    double rb = std::abs(b);
    double lhs = std::abs(std::pow(ra, alpha) * a - std::pow(rb, alpha) * b);
    double rhs = 2 * std::pow(ra + rb, alpha) * std::abs(a - b);
    return {lhs, rhs};
}

}  // namespace enclosure
