// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include "enclosure/measurement_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "enclosure/error.hpp"

namespace enclosure
{
namespace
{
constexpr char const* columns = "probe_id,omega_x,omega_y,t,J,h,node_index,s,f_re,f_im,dnu_re,"
                                "dnu_im,dnu_tail_re,dnu_tail_im";
constexpr std::size_t n_columns = 14;

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view s, std::size_t line)
{
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
    {
        throw InputError("measurement file line " + std::to_string(line) + ": bad number '"
                         + std::string(s) + "'");
    }
    return v;
}

long parse_int(std::string_view s, std::size_t line)
{
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
    {
        throw InputError("measurement file line " + std::to_string(line) + ": bad integer '"
                         + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true)
    {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

void require_ccw_perp(Direction const& d)
{
    Vec2 w = d.omega();
    Vec2 p = d.perp();
    if (std::abs(p.x + w.y) > 1e-14 || std::abs(p.y - w.x) > 1e-14)
    {
        throw InputError("measurement files store omega only; omega_perp must be the "
                         "counterclockwise perpendicular");
    }
}
}  // namespace

std::string measurement_metadata(MeasurementSet const& set)
{
    auto const& d = *set.domain;
    std::size_t rows = set.records.size() * d.boundary().size();
    return "# xmin=" + fmt(d.xmin()) + " xmax=" + fmt(d.xmax()) + " ymin=" + fmt(d.ymin())
           + " ymax=" + fmt(d.ymax()) + " n_cells=" + std::to_string(d.n_cells())
           + " background=" + set.background_hash + " crime=" + (set.crime ? "on" : "off")
           + " rows=" + std::to_string(rows);
}

void write_measurements(std::ostream& os, MeasurementSet const& set)
{
    if (!set.domain)
        throw InputError("measurement set has no domain");
    os << "schema=" << measurement_schema << '\n';
    os << measurement_metadata(set) << '\n';
    os << columns << '\n';
    auto bnd = set.domain->boundary();
    int last_id = 0;
    for (std::size_t r = 0; r < set.records.size(); ++r)
    {
        auto const& rec = set.records[r];
        if (r > 0 && rec.probe_id <= last_id)
            throw InputError("measurement records must be in increasing probe id order");
        last_id = rec.probe_id;
        require_ccw_perp(rec.params.dir);
        if (!rec.f.domain().same_grid(*set.domain) || !rec.dnu.domain().same_grid(*set.domain))
            throw InputError("measurement record on a different grid");
        std::string prefix = std::to_string(rec.probe_id) + ',' + fmt(rec.params.dir.omega().x)
                             + ',' + fmt(rec.params.dir.omega().y) + ',' + fmt(rec.params.t) + ','
                             + fmt(rec.params.J) + ',' + fmt(rec.params.h) + ',';
        for (std::size_t k = 0; k < bnd.size(); ++k)
        {
            Complex f = rec.f.head()[k];
            Complex d = rec.dnu.head()[k];
            Complex dt = rec.dnu.has_tail() ? rec.dnu.tail()[k] : Complex{};
            os << prefix << k << ',' << fmt(bnd[k].arc_length) << ',' << fmt(f.real()) << ','
               << fmt(f.imag()) << ',' << fmt(d.real()) << ',' << fmt(d.imag()) << ','
               << fmt(dt.real()) << ',' << fmt(dt.imag()) << '\n';
        }
    }
}

void write_measurements(MeasurementSet const& set, std::filesystem::path const& path)
{
    std::ofstream os(path);
    if (!os)
        throw InputError("cannot open " + path.string() + " for writing");
    write_measurements(os, set);
    if (!os)
        throw InputError("write to " + path.string() + " failed");
}

//---------------------------------------------------------------------------//
MeasurementSet read_measurements(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line))
        throw InputError("measurement file is empty (missing schema line)");
    if (line != std::string("schema=") + measurement_schema)
        throw InputError("measurement schema mismatch: expected 'schema="
                         + std::string(measurement_schema) + "', found '" + line + "'");

    if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
        throw InputError("measurement file: missing metadata line");
    std::map<std::string, std::string> meta;
    {
        std::istringstream ms(line.substr(2));
        std::string tok;
        while (ms >> tok)
        {
            auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw InputError("measurement file: malformed metadata token '" + tok + "'");
            meta[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
    }
    for (char const* key : {"xmin", "xmax", "ymin", "ymax", "n_cells", "background", "crime", "rows"})
    {
        if (!meta.count(key))
            throw InputError(std::string("measurement file: metadata lacks '") + key + "'");
    }
    auto domain = std::make_shared<GridDomain const>(
        parse_double(meta["xmin"], 2), parse_double(meta["xmax"], 2), parse_double(meta["ymin"], 2),
        parse_double(meta["ymax"], 2), static_cast<int>(parse_int(meta["n_cells"], 2)));
    if (meta["crime"] != "on" && meta["crime"] != "off")
        throw InputError("measurement file: crime must be on or off");
    long expected_rows = parse_int(meta["rows"], 2);

    if (!std::getline(is, line) || line != columns)
        throw InputError("measurement file: unexpected column header");

    MeasurementSet set;
    set.domain = domain;
    set.background_hash = meta["background"];
    set.crime = meta["crime"] == "on";

    auto bnd = domain->boundary();
    std::size_t nb = bnd.size();
    std::size_t lineno = 3;
    long rows = 0;
    std::vector<Complex> f, d, dt;
    ProbeParams params;
    int id = 0;
    double tol_s = 1e-12 * domain->perimeter();

    auto flush = [&] {
        BoundaryTrace ft(domain, TraceRole::dirichlet, std::move(f));
        BoundaryTrace nt(domain, TraceRole::neumann, std::move(d), std::move(dt));
        set.records.push_back(MeasurementRecord{id, params, std::move(ft), std::move(nt), {}});
        f.clear();
        d.clear();
        dt.clear();
    };

    while (std::getline(is, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        auto cells = split(line, ',');
        if (cells.size() != n_columns)
        {
            throw InputError("measurement file line " + std::to_string(lineno) + ": expected "
                             + std::to_string(n_columns) + " columns, found "
                             + std::to_string(cells.size()));
        }
        ++rows;
        int pid = static_cast<int>(parse_int(cells[0], lineno));
        Vec2 w{parse_double(cells[1], lineno), parse_double(cells[2], lineno)};
        double t = parse_double(cells[3], lineno);
        double J = parse_double(cells[4], lineno);
        double h = parse_double(cells[5], lineno);
        long node = parse_int(cells[6], lineno);
        double s = parse_double(cells[7], lineno);
        std::array<double, 6> vals;
        for (std::size_t c = 0; c < 6; ++c)
        {
            vals[c] = parse_double(cells[8 + c], lineno);
            if (!std::isfinite(vals[c]))
                throw InputError("measurement file line " + std::to_string(lineno)
                                 + ": non-finite value");
        }

        if (node == 0)
        {
            if (!f.empty())
                throw InputError("measurement file line " + std::to_string(lineno)
                                 + ": probe " + std::to_string(id) + " is incomplete");
            if (!set.records.empty() && pid <= set.records.back().probe_id)
                throw InputError("measurement file line " + std::to_string(lineno)
                                 + ": probe ids must increase");
            id = pid;
            // Direction from the stored omega; the perpendicular is implied.
            Direction dir(w, Vec2{-w.y, w.x});
            params = ProbeParams{dir, t, J, h};
            params.validate(*domain);
        }
        else if (pid != id || f.empty() || w.x != params.dir.omega().x
                 || w.y != params.dir.omega().y || t != params.t || J != params.J || h != params.h)
        {
            throw InputError("measurement file line " + std::to_string(lineno)
                             + ": row does not continue the current probe");
        }
        if (node != static_cast<long>(f.size()) || f.size() >= nb)
            throw InputError("measurement file line " + std::to_string(lineno)
                             + ": unexpected node index " + std::to_string(node));
        if (std::abs(s - bnd[node].arc_length) > tol_s)
            throw InputError("measurement file line " + std::to_string(lineno)
                             + ": arc length does not match the grid");
        f.emplace_back(vals[0], vals[1]);
        d.emplace_back(vals[2], vals[3]);
        dt.emplace_back(vals[4], vals[5]);
        if (f.size() == nb)
            flush();
    }
    if (!f.empty())
        throw InputError("measurement file: last probe " + std::to_string(id) + " is truncated ("
                         + std::to_string(f.size()) + " of " + std::to_string(nb) + " rows)");
    if (rows != expected_rows)
        throw InputError("measurement file: row count " + std::to_string(rows)
                         + " does not match metadata rows=" + std::to_string(expected_rows));
    return set;
}

MeasurementSet read_measurements(std::filesystem::path const& path)
{
    std::ifstream is(path);
    if (!is)
        throw InputError("cannot open measurement file " + path.string());
    return read_measurements(is);
}

}  // namespace enclosure
