#ifndef JETKT_PARALLEL_HPP
#define JETKT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace jetkt {

// Worker count from JETKT_THREADS, defaulting to the hardware concurrency.
unsigned thread_count();

// Calls body(i) for i in [0, count) on up to thread_count() threads. The
// first exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace jetkt

#endif
