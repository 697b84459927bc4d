#pragma once

#include <cstddef>
#include <functional>

namespace phvi {

/// Sets the worker count used by parallel_for. 0 selects hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs fn(i) for i in [begin, end), statically partitioned across workers.
/// Callers must write disjoint outputs per index; arithmetic per index must
/// not depend on the partition, which keeps results thread-count independent.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

}  // namespace phvi
