// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "enclosure/cli/commands.hpp"

int main(int argc, char** argv)
{
    return enclosure::cli::run(argc, argv, std::cout, std::cerr);
}
