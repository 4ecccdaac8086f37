#pragma once

#include <cstddef>
#include <functional>

namespace volsel {

struct ExecutionOptions {
    std::size_t threads = 1;
};

/// Runs body(i) for i in [0, count) on up to `threads` workers using contiguous
/// index blocks. Callers write to per-index slots and reduce afterwards in index
/// order, which keeps results independent of the thread count. The first
/// exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

} // namespace volsel
