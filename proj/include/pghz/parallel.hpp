#pragma once

#include <cstddef>
#include <functional>

namespace pghz {

// Runs body(0) .. body(count-1) across a small thread pool. Iterations must
// not touch shared mutable state; results should be written to distinct
// slots so the outcome is independent of scheduling. The first exception
// thrown by any iteration is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace pghz
