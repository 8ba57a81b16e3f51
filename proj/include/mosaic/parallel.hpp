#pragma once

#include <cstddef>
#include <functional>

namespace mosaic {

// Runs fn(0), ..., fn(count-1) on up to `workers` threads. Tasks must write
// only to their own output slots; results are then independent of the
// schedule, so any worker count (including 1) gives identical output.
// workers <= 0 selects the hardware concurrency.
void parallel_tasks(std::size_t count, int workers,
                    const std::function<void(std::size_t)>& fn);

int resolve_workers(int workers);

}  // namespace mosaic
