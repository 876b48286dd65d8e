#pragma once

#include <cstddef>
#include <functional>

namespace axialgen {

// Worker count: AXIALGEN_THREADS if set to a positive integer, else the
// hardware concurrency (at least 1).
unsigned worker_count();

// Calls fn(i) for every i in [0, n). Callers write results into slot i so the
// output does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace axialgen
