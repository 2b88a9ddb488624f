// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include "enclosure/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "enclosure/error.hpp"

namespace enclosure::cli
{
using nlohmann::json;

namespace
{
void require_object(json const& j, std::string const& ctx)
{
    if (!j.is_object())
        throw InputError("config: '" + ctx + "' must be an object");
}

void check_keys(json const& j, std::set<std::string> const& allowed, std::string const& ctx)
{
    require_object(j, ctx);
    for (auto const& [key, _] : j.items())
    {
        if (!allowed.count(key))
            throw InputError("config: unknown key '" + key + "' in " + ctx);
    }
}

double get_number(json const& j, char const* key, double fallback, std::string const& ctx)
{
    if (!j.contains(key))
        return fallback;
    auto const& v = j.at(key);
    if (!v.is_number())
        throw InputError("config: " + ctx + "." + key + " must be a number");
    return v.get<double>();
}

int get_int(json const& j, char const* key, int fallback, std::string const& ctx)
{
    if (!j.contains(key))
        return fallback;
    auto const& v = j.at(key);
    if (!v.is_number_integer())
        throw InputError("config: " + ctx + "." + key + " must be an integer");
    return v.get<int>();
}

std::vector<double> get_numbers(json const& j, char const* key, std::vector<double> fallback,
                                std::string const& ctx)
{
    if (!j.contains(key))
        return fallback;
    auto const& v = j.at(key);
    if (!v.is_array())
        throw InputError("config: " + ctx + "." + key + " must be an array of numbers");
    std::vector<double> out;
    for (auto const& e : v)
    {
        if (!e.is_number())
            throw InputError("config: " + ctx + "." + key + " must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

Vec2 get_point(json const& v, std::string const& ctx)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw InputError("config: " + ctx + " must be a pair [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

DomainConfig parse_domain(json const& j)
{
    DomainConfig d;
    if (j.is_null())
        return d;
    check_keys(j, {"bounds", "n_cells"}, "domain");
    auto b = get_numbers(j, "bounds", {d.xmin, d.xmax, d.ymin, d.ymax}, "domain");
    if (b.size() != 4)
        throw InputError("config: domain.bounds must be [xmin, xmax, ymin, ymax]");
    d.xmin = b[0];
    d.xmax = b[1];
    d.ymin = b[2];
    d.ymax = b[3];
    d.n_cells = get_int(j, "n_cells", d.n_cells, "domain");
    d.make();  // validates
    return d;
}

Disk parse_disk(json const& j, std::string const& ctx)
{
    check_keys(j, {"kind", "center", "radius"}, ctx);
    if (!j.contains("center") || !j.contains("radius"))
        throw InputError("config: " + ctx + " needs center and radius");
    return Disk{get_point(j.at("center"), ctx + ".center"), get_number(j, "radius", 0, ctx)};
}

InclusionShape parse_shape(json const& j, std::string const& ctx)
{
    require_object(j, ctx);
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw InputError("config: " + ctx + ".kind must be one of disk, polygon, disks");
    auto kind = j.at("kind").get<std::string>();
    if (kind == "disk")
        return parse_disk(j, ctx);
    if (kind == "polygon")
    {
        check_keys(j, {"kind", "vertices"}, ctx);
        if (!j.contains("vertices") || !j.at("vertices").is_array())
            throw InputError("config: " + ctx + ".vertices must be a list of points");
        std::vector<Vec2> v;
        for (auto const& p : j.at("vertices"))
            v.push_back(get_point(p, ctx + ".vertices"));
        return ConvexPolygon(std::move(v));
    }
    if (kind == "disks")
    {
        check_keys(j, {"kind", "disks"}, ctx);
        if (!j.contains("disks") || !j.at("disks").is_array() || j.at("disks").empty())
            throw InputError("config: " + ctx + ".disks must be a non-empty list");
        DiskUnion u;
        for (auto const& d : j.at("disks"))
            u.disks.push_back(parse_disk(d, ctx + ".disks[]"));
        return u;
    }
    throw InputError("config: unknown inclusion kind '" + kind + "'");
}

ProbeConfig parse_probes(json const& j)
{
    ProbeConfig p;
    if (j.is_null())
        return p;
    check_keys(j, {"directions", "t_step", "t_values", "h_ladder", "J_margin"}, "probes");
    if (j.contains("directions"))
    {
        auto const& d = j.at("directions");
        if (d.is_number_integer())
        {
            int n = d.get<int>();
            if (n < 1)
                throw InputError("config: probes.directions must be positive");
            p.directions = uniform_directions(n);
        }
        else if (d.is_array())
        {
            p.directions.clear();
            for (auto const& v : d)
                p.directions.push_back(Direction::from_vector(get_point(v, "probes.directions[]")));
        }
        else
        {
            throw InputError("config: probes.directions must be a count or a list of vectors");
        }
    }
    p.t_step = get_number(j, "t_step", p.t_step, "probes");
    if (!(p.t_step > 0))
        throw InputError("config: probes.t_step must be positive");
    p.t_values = get_numbers(j, "t_values", {}, "probes");
    p.h_ladder = get_numbers(j, "h_ladder", p.h_ladder, "probes");
    if (p.h_ladder.size() < 3)
        throw InputError("config: probes.h_ladder needs at least 3 values");
    for (std::size_t i = 0; i < p.h_ladder.size(); ++i)
    {
        if (!(p.h_ladder[i] > 0 && p.h_ladder[i] < 1))
            throw InputError("config: probes.h_ladder values must lie in (0, 1)");
        if (i > 0 && !(p.h_ladder[i] < p.h_ladder[i - 1]))
            throw InputError("config: probes.h_ladder must be strictly decreasing");
    }
    p.j_margin = get_number(j, "J_margin", p.j_margin, "probes");
    if (!(p.j_margin > 0))
        throw InputError("config: probes.J_margin must be positive");
    return p;
}

SolverConfig parse_solver(json const& j)
{
    SolverConfig s;
    if (j.is_null())
        return s;
    check_keys(j, {"tol", "max_iter", "crime", "delta0", "delta_ladder"}, "solver");
    s.tol = get_number(j, "tol", s.tol, "solver");
    if (!(s.tol > 0))
        throw InputError("config: solver.tol must be positive");
    s.max_iter = get_int(j, "max_iter", s.max_iter, "solver");
    if (s.max_iter < 1)
        throw InputError("config: solver.max_iter must be >= 1");
    if (j.contains("crime"))
    {
        auto const& c = j.at("crime");
        if (c.is_boolean())
            s.crime = c.get<bool>();
        else if (c.is_string() && (c == "on" || c == "off"))
            s.crime = c == "on";
        else
            throw InputError("config: solver.crime must be \"on\" or \"off\"");
    }
    if (j.contains("delta0"))
    {
        double d = get_number(j, "delta0", 0, "solver");
        if (!(d > 0 && d <= 1))
            throw InputError("config: solver.delta0 must lie in (0, 1]");
        s.delta0 = d;
    }
    s.delta_ladder = get_numbers(j, "delta_ladder", s.delta_ladder, "solver");
    return s;
}

ReconstructBlock parse_reconstruct(json const& j)
{
    ReconstructBlock r;
    if (j.is_null())
        return r;
    check_keys(j, {"method", "slope_model", "dead_zone", "misfit_threshold"}, "reconstruct");
    if (j.contains("method"))
    {
        r.method = j.at("method").is_string() ? j.at("method").get<std::string>() : "";
        if (r.method != "bisection" && r.method != "slope")
            throw InputError("config: reconstruct.method must be \"bisection\" or \"slope\"");
    }
    if (j.contains("slope_model"))
    {
        auto m = j.at("slope_model").is_string() ? j.at("slope_model").get<std::string>() : "";
        if (m == "exponential")
            r.slope_model = SlopeModel::exponential;
        else if (m == "exponential_with_prefactor")
            r.slope_model = SlopeModel::exponential_with_prefactor;
        else
            throw InputError("config: reconstruct.slope_model must be \"exponential\" or "
                             "\"exponential_with_prefactor\"");
    }
    r.dead_zone = get_number(j, "dead_zone", r.dead_zone, "reconstruct");
    if (r.dead_zone < 0)
        throw InputError("config: reconstruct.dead_zone must be >= 0");
    r.misfit_threshold = get_number(j, "misfit_threshold", r.misfit_threshold, "reconstruct");
    return r;
}

void parse_exponents(json const& m, int& alpha1, double& alpha2)
{
    alpha1 = get_int(m, "alpha1", alpha1, "model");
    alpha2 = get_number(m, "alpha2", alpha2, "model");
    if (alpha1 < 2)
        throw InputError("config: model.alpha1 must be an integer >= 2");
    if (!(alpha2 > alpha1))
        throw InputError("config: model.alpha2 must exceed model.alpha1");
}

std::string get_string(json const& j, char const* key, std::string fallback, std::string const& ctx)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_string())
        throw InputError("config: " + ctx + "." + key + " must be a string");
    return j.at(key).get<std::string>();
}

std::uint64_t get_seed(json const& j)
{
    if (!j.contains("seed"))
        return 1;
    if (!j.at("seed").is_number_unsigned())
        throw InputError("config: seed must be a nonnegative integer");
    return j.at("seed").get<std::uint64_t>();
}

std::string get_out_dir(json const& j)
{
    if (!j.contains("output"))
        return "out";
    check_keys(j.at("output"), {"dir"}, "output");
    return get_string(j.at("output"), "dir", "out", "output");
}

json member(json const& j, char const* key) { return j.contains(key) ? j.at(key) : json(); }
}  // namespace

//---------------------------------------------------------------------------//
DomainPtr DomainConfig::make() const
{
    return std::make_shared<GridDomain const>(xmin, xmax, ymin, ymax, n_cells);
}

std::vector<double> ProbeConfig::offsets(GridDomain const& domain, Direction const& dir) const
{
    auto [b, B] = support_bounds(domain, dir);
    std::vector<double> out;
    if (!t_values.empty())
    {
        for (double t : t_values)
        {
            if (t > b && t < B)
                out.push_back(t);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    for (int k = 1;; ++k)
    {
        double t = b + k * t_step;
        if (t >= B - 1e-9)
            break;
        out.push_back(t);
    }
    return out;
}

BackgroundModel BackgroundSpec::build(DomainPtr const& domain) const
{
    if (q0 > 0)
        throw InputError("q0 must be nonpositive");
    return BackgroundModel{RealField(domain, q0), RealField(domain, q1b), alpha1, alpha2};
}

ForwardConfig parse_forward_config(json const& j)
{
    check_keys(j, {"domain", "model", "inclusion", "probes", "solver", "reconstruct", "output", "seed"},
               "config");
    ForwardConfig c;
    c.domain = parse_domain(member(j, "domain"));

    json m = member(j, "model");
    if (m.is_null())
        m = json::object();
    check_keys(m, {"variant", "alpha1", "alpha2", "C_star", "mu", "q0", "q1b", "q1D", "q2", "table"},
               "model");
    auto& med = c.medium;
    parse_exponents(m, med.params.alpha1, med.params.alpha2);
    med.params.c_star = get_number(m, "C_star", med.params.c_star, "model");
    med.params.mu = get_number(m, "mu", med.params.mu, "model");
    med.q0 = get_number(m, "q0", med.q0, "model");
    med.q1b = get_number(m, "q1b", med.q1b, "model");
    med.q1d = get_number(m, "q1D", med.q1d, "model");
    med.q2 = get_number(m, "q2", med.q2, "model");
    auto variant = get_string(m, "variant", "kerr", "model");
    if (variant == "ginzburg_landau")
    {
        med.ginzburg_landau = true;
    }
    else if (variant == "custom")
    {
        if (!m.contains("table"))
            throw InputError("config: custom variant needs model.table");
        auto const& t = m.at("table");
        check_keys(t, {"moduli", "values"}, "model.table");
        med.custom = CustomVariant{get_numbers(t, "moduli", {}, "model.table"),
                                   get_numbers(t, "values", {}, "model.table")};
    }
    else if (variant != "kerr")
    {
        throw InputError("config: model.variant must be kerr, ginzburg_landau or custom");
    }
    if (variant != "ginzburg_landau" && m.contains("q2"))
        throw InputError("config: model.q2 only applies to the ginzburg_landau variant");
    if (variant != "custom" && m.contains("table"))
        throw InputError("config: model.table only applies to the custom variant");

    if (j.contains("inclusion"))
    {
        auto const& inc = j.at("inclusion");
        if (inc.is_array())
        {
            for (auto const& s : inc)
                med.inclusions.push_back(parse_shape(s, "inclusion[]"));
        }
        else
        {
            med.inclusions.push_back(parse_shape(inc, "inclusion"));
        }
        c.has_inclusion = true;
    }
    c.probes = parse_probes(member(j, "probes"));
    c.solver = parse_solver(member(j, "solver"));
    c.reconstruct = parse_reconstruct(member(j, "reconstruct"));
    c.out_dir = get_out_dir(j);
    c.seed = get_seed(j);
    return c;
}

InverseConfig parse_inverse_config(json const& j)
{
    require_object(j, "config");
    if (j.contains("inclusion"))
    {
        throw InputError("config: reconstruct runs must not contain an inclusion block "
                         "(the inclusion is what is being reconstructed)");
    }
    check_keys(j, {"domain", "model", "probes", "solver", "reconstruct", "output", "seed"}, "config");
    InverseConfig c;
    c.domain = parse_domain(member(j, "domain"));

    json m = member(j, "model");
    if (m.is_null())
        m = json::object();
    require_object(m, "model");
    for (char const* key : {"q1D", "q2", "C_star", "mu", "variant", "table"})
    {
        if (m.contains(key))
        {
            throw InputError(std::string("config: model.") + key
                             + " describes the unknown medium and is not allowed in a "
                               "reconstruct config");
        }
    }
    check_keys(m, {"alpha1", "alpha2", "q0", "q1b"}, "model");
    parse_exponents(m, c.background.alpha1, c.background.alpha2);
    c.background.q0 = get_number(m, "q0", 0, "model");
    c.background.q1b = get_number(m, "q1b", 0, "model");
    if (c.background.q0 > 0)
        throw InputError("config: model.q0 must be nonpositive");
    c.probes = parse_probes(member(j, "probes"));
    c.solver = parse_solver(member(j, "solver"));
    c.reconstruct = parse_reconstruct(member(j, "reconstruct"));
    c.out_dir = get_out_dir(j);
    c.seed = get_seed(j);
    return c;
}

json load_json(std::filesystem::path const& path)
{
    std::ifstream is(path);
    if (!is)
        throw InputError("cannot open config " + path.string());
    try
    {
        return json::parse(is);
    }
    catch (json::parse_error const& e)
    {
        throw InputError("config " + path.string() + ": " + e.what());
    }
}

}  // namespace enclosure::cli
