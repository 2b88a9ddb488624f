// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace enclosure::cli
{
enum ExitCode : int
{
    exit_ok = 0,
    exit_failure = 1,  //!< validation failure or solver breakdown
    exit_input = 2  //!< bad config, bad file, inadmissible data
};

struct CommandOptions
{
    std::string config;
    std::string measurements;
    std::string out_dir;  //!< overrides the config's output.dir
    int jobs = 1;
    std::optional<bool> crime;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> inputs;  //!< plot inputs
};

int cmd_synthesize(CommandOptions const& opts, std::ostream& out, std::ostream& err);
int cmd_reconstruct(CommandOptions const& opts, std::ostream& out, std::ostream& err);
int cmd_validate(CommandOptions const& opts, std::ostream& out, std::ostream& err);
int cmd_plot(CommandOptions const& opts, std::ostream& out, std::ostream& err);

//! Full command line, including argument parsing.
int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

}  // namespace enclosure::cli
