#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace vclab {

/// Explicit request if given, else $VCLAB_THREADS, else hardware concurrency.
std::size_t resolve_threads(std::optional<std::size_t> requested = std::nullopt);

/// Calls body(i) for every i in [0, count) on up to `threads` workers.
/// Indices are handed out dynamically; callers must not depend on which
/// worker runs which index. The first exception thrown is rethrown.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

} // namespace vclab
