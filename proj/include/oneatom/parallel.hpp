#pragma once

#include <cstddef>
#include <functional>

namespace oneatom {

// Worker count for field fills: ONEATOM_THREADS when set (clamped to >= 1),
// otherwise the hardware concurrency.
int worker_count();

// Runs work(i) for every i in [0, count), split into contiguous blocks, one
// per worker. work(i) must touch only state owned by index i; results are
// then identical for any worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& work);

}  // namespace oneatom
