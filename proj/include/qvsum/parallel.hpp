#pragma once

#include <cstddef>
#include <functional>

namespace qvsum {

// Worker count from QVSUM_WORKERS, else std::thread::hardware_concurrency().
std::size_t worker_count();

// Runs body(i) for i in [0, n) on up to `workers` threads. The first exception
// thrown by any body is rethrown on the calling thread after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t workers = worker_count());

}  // namespace qvsum
