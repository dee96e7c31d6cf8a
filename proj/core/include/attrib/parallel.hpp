// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace attrib {

/// Worker count to use: `requested` if nonzero, else ATTRIB_THREADS if set
/// to a positive integer, else std::thread::hardware_concurrency() (min 1).
std::size_t resolve_threads(std::size_t requested = 0);

/// Runs body(i) for every i in [0, n) on up to `threads` workers. Callers
/// write results into slot i of a pre-sized buffer and reduce in index order,
/// which keeps aggregates independent of scheduling. The first exception
/// thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace attrib
