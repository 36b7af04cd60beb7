#pragma once

#include <cstddef>
#include <functional>

namespace ndphoton {

/// Number of worker threads used by parallel loops inside the library.
/// 0 selects std::thread::hardware_concurrency(). Results never depend on it:
/// every loop writes disjoint outputs and reductions run in a fixed order.
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Calls body(i) for i in [begin, end), split into contiguous chunks across
/// the configured threads. Nested calls run serially on the calling thread.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace ndphoton
