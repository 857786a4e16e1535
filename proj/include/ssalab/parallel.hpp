#pragma once

// Execution policy shared by the sweep / multistart kernels.  Parallel work
// is always "independent index -> private result slot, then a serial
// reduction", so serial and OpenMP runs produce identical output and the
// serial path doubles as the reference implementation in tests.

#include <cstddef>
#include <functional>

namespace ssalab {

enum class ExecPolicy { Serial, Parallel };

// Runs body(0..n-1).  ExecPolicy::Parallel uses OpenMP when compiled in
// (and falls back to serial inside already-parallel regions or when built
// without OpenMP).  Exceptions thrown by body are rethrown on the caller's
// thread after the loop drains.
void parallel_for(std::size_t n, ExecPolicy policy, const std::function<void(std::size_t)>& body);

// Threads the loop would use under ExecPolicy::Parallel (1 without OpenMP).
int max_threads();

}  // namespace ssalab
