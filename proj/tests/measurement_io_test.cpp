// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include <cstring>
#include <sstream>

#include <doctest.h>

#include "enclosure/error.hpp"
#include "enclosure/forward.hpp"
#include "enclosure/measurement_io.hpp"
#include "helpers.hpp"

using namespace enclosure;
using enclosure::test::square;

namespace
{
bool same_bits(double a, double b)
{
    return std::memcmp(&a, &b, sizeof a) == 0;
}

bool same_bits(Complex a, Complex b)
{
    return same_bits(a.real(), b.real()) && same_bits(a.imag(), b.imag());
}

MeasurementSet sample_set(double q1d, InclusionShape shape)
{
    auto d = square(64);
    MediumSpec m;
    m.q1b = 0.25;
    m.q1d = q1d;
    m.inclusions = {shape};
    MeasurementDevice device(m, d, {});
    std::vector<ProbeSpec> probes;
    int id = 0;
    for (auto const& dir : {Direction::from_angle(0.1), Direction::from_angle(2.5)})
        for (double h : {0.6, 0.5, 0.4})
            probes.push_back({id++, {dir, 0.05, choose_J(*d, dir, 2, 4, 0.5), h}});
    return device.measure_all(probes);
}

std::string to_text(MeasurementSet const& set)
{
    std::ostringstream os;
    write_measurements(os, set);
    return os.str();
}

MeasurementSet from_text(std::string const& s)
{
    std::istringstream is(s);
    return read_measurements(is);
}

std::string data_rows(std::string const& text)
{
    // Everything after the three header lines.
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i)
        pos = text.find('\n', pos) + 1;
    return text.substr(pos);
}

std::string header_lines(std::string const& text)
{
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i)
        pos = text.find('\n', pos) + 1;
    return text.substr(0, pos);
}
}  // namespace

TEST_CASE("round trip is bit exact")
{
    auto set = sample_set(1.0, Disk{{0.3, 0}, 0.2});
    auto back = from_text(to_text(set));
    CHECK(back.domain->same_grid(*set.domain));
    CHECK(back.background_hash == set.background_hash);
    CHECK(back.crime == set.crime);
    REQUIRE(back.records.size() == set.records.size());
    for (std::size_t r = 0; r < set.records.size(); ++r)
    {
        auto const& a = set.records[r];
        auto const& b = back.records[r];
        CHECK(a.probe_id == b.probe_id);
        CHECK(same_bits(a.params.t, b.params.t));
        CHECK(same_bits(a.params.J, b.params.J));
        CHECK(same_bits(a.params.h, b.params.h));
        CHECK(same_bits(a.params.dir.omega().x, b.params.dir.omega().x));
        CHECK(same_bits(a.params.dir.perp().y, b.params.dir.perp().y));
        for (std::size_t k = 0; k < a.f.size(); ++k)
        {
            CHECK(same_bits(a.f[k], b.f[k]));
            CHECK(same_bits(a.dnu.head()[k], b.dnu.head()[k]));
            CHECK(same_bits(a.dnu.tail()[k], b.dnu.tail()[k]));
        }
    }
    // Writing the re-read set reproduces the bytes.
    CHECK(to_text(back) == to_text(set));
}

TEST_CASE("rows per probe and header")
{
    auto set = sample_set(1.0, Disk{{0.3, 0}, 0.2});
    auto text = to_text(set);
    auto rows = data_rows(text);
    auto count = static_cast<std::size_t>(std::count(rows.begin(), rows.end(), '\n'));
    CHECK(count == set.records.size() * set.domain->boundary().size());
    CHECK(text.rfind("schema=enclosure-kit/1\n", 0) == 0);
}

TEST_CASE("malformed files")
{
    CHECK_THROWS_AS(from_text(""), InputError);
    auto text = to_text(sample_set(1.0, Disk{{0.3, 0}, 0.2}));

    auto wrong_schema = "schema=enclosure-kit/2" + text.substr(text.find('\n'));
    CHECK_THROWS_AS(from_text(wrong_schema), InputError);

    // Drop the last data row.
    auto cut = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
    CHECK_THROWS_WITH_AS(from_text(cut), doctest::Contains("truncated"), InputError);

    // Corrupt one number.
    auto bad = text;
    auto p = bad.find(",0.", bad.size() / 2);
    bad.replace(p + 1, 2, "x.");
    CHECK_THROWS_AS(from_text(bad), InputError);

    // Metadata row count disagrees with the data.
    auto meta = text;
    auto rp = meta.find("rows=");
    meta.replace(rp, meta.find('\n', rp) - rp, "rows=7");
    CHECK_THROWS_AS(from_text(meta), InputError);
}

TEST_CASE("metadata carries no defect information")
{
    auto a = sample_set(1.0, Disk{{0.3, 0}, 0.2});
    auto b = sample_set(4.0, ConvexPolygon({{-0.4, -0.3}, {0.2, -0.3}, {0.0, 0.4}}));
    CHECK(measurement_metadata(a) == measurement_metadata(b));
    auto ta = to_text(a);
    auto tb = to_text(b);
    CHECK(header_lines(ta) == header_lines(tb));
    CHECK(data_rows(ta) != data_rows(tb));
}
