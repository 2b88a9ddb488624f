// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "forward.hpp"

namespace enclosure
{
inline constexpr char const* measurement_schema = "enclosure-kit/1";

/*!
 * CSV measurement file.
 *
 * Line 1 is "schema=enclosure-kit/1", line 2 a "#" metadata line (domain
 * bounds, n_cells, background hash, crime flag, data row count), line 3 the
 * column header. One row per (probe, boundary node), probes in id order.
 * Every floating value is printed with 17 significant digits; the
 * dnu_tail columns carry the compensated part of the Neumann data.
 */
void write_measurements(std::ostream& os, MeasurementSet const& set);
void write_measurements(MeasurementSet const& set, std::filesystem::path const& path);

//! Throws InputError on schema mismatch, malformed rows or a row count
//! that disagrees with the metadata.
MeasurementSet read_measurements(std::istream& is);
MeasurementSet read_measurements(std::filesystem::path const& path);

//! The metadata line as written (without trailing newline).
std::string measurement_metadata(MeasurementSet const& set);

}  // namespace enclosure
