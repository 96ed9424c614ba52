#pragma once

#include <cstddef>
#include <functional>

namespace hlsys {

// Process-wide cap on worker threads (0 = hardware concurrency).
void set_max_threads(unsigned jobs);
unsigned max_threads();

// Static range partition over [0, count).  body(begin, end) is invoked on
// worker threads with disjoint ranges; writes must not alias across ranges.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body);

} // namespace hlsys
