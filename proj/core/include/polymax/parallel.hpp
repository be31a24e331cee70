#ifndef POLYMAX_PARALLEL_HPP_
#define POLYMAX_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace polymax {

// 0 means "use hardware concurrency".
unsigned effective_threads(unsigned requested);

// Runs body(i) for i in [0, count) on up to `threads` workers. Work items
// are claimed from an atomic counter; bodies must write only to their own
// index, which keeps results identical for every thread count. The first
// exception thrown by a body is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace polymax

#endif  // POLYMAX_PARALLEL_HPP_
