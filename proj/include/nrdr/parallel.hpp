#pragma once

#include <cstdint>
#include <functional>

namespace nrdr {

/// Global worker-thread count for row-parallel loops. 0 means "hardware
/// concurrency". Results never depend on the setting: parallel loops always
/// partition work by row, and each row is computed independently.
void set_threads(int n);
int threads();

/// Runs fn(begin, end) over a static partition of [0, n). Falls back to a
/// single inline call when n is small or one thread is configured.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

} // namespace nrdr
