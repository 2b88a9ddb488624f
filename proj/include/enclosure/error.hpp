// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace enclosure
{
//! Malformed or inconsistent input: bad config, bad file, violated precondition.
class InputError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! A numerical routine could not deliver its contract (singular system,
//! non-convergence, data leaving the admissible ball).
class SolverError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Boundary data larger than the certified admissible radius.
class AdmissibilityError : public InputError
{
  public:
    using InputError::InputError;
};

}  // namespace enclosure
