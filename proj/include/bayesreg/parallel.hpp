#ifndef BAYESREG_PARALLEL_HPP
#define BAYESREG_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace bayesreg {

/// Worker count: BAYESREG_THREADS if set and positive, else the hardware
/// concurrency, never more than `work`.
int worker_count(std::size_t work);

/// Calls body(i) for i in [0, n) on up to worker_count(n) threads. Each index
/// runs exactly once; callers write results into index-owned slots and
/// reduce afterwards, so the outcome does not depend on scheduling. The
/// first exception thrown by any body is rethrown. Nested calls run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bayesreg

#endif  // BAYESREG_PARALLEL_HPP
