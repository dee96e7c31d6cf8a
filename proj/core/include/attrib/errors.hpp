// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace attrib {

/// Input data violates a corpus or cluster invariant (dimension mismatch,
/// duplicate key, non-finite component, unknown id, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read, or written, or its framing is broken.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter range violations (k out of range, tau outside (0,1), ...) are
// reported with std::invalid_argument.

}  // namespace attrib
