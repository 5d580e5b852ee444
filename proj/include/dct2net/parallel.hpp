#pragma once

#include <cstddef>
#include <functional>

namespace dct2net {

/// Worker count used when a caller passes threads <= 0: the DCT2NET_THREADS
/// environment variable if set, otherwise std::thread::hardware_concurrency().
int default_thread_count();

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once; callers own any reduction and must perform it in
/// index order afterwards so results do not depend on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

} // namespace dct2net
