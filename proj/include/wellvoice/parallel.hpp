#pragma once

#include <cstddef>
#include <functional>

namespace wellvoice {

/// Worker count from WELLVOICE_WORKERS, else hardware concurrency (>= 1).
std::size_t DefaultWorkers();

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index runs
/// exactly once; the first exception thrown is rethrown after all workers
/// join.
void ParallelFor(std::size_t n, std::size_t workers,
                 const std::function<void(std::size_t)>& fn);

}  // namespace wellvoice
