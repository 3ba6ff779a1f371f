#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace kprab {

// 0 means "leave the OpenMP default alone".
void set_thread_count(int n);
int thread_count();

// Runs body(i) for i in [0, n) on the OpenMP team. The first exception thrown
// by any iteration is rethrown on the calling thread after the loop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t chunk = 16);

}  // namespace kprab
