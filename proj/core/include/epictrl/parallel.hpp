#pragma once

#include <functional>

namespace epictrl {

// Worker cap: EPICTRL_THREADS when set and positive, else the available
// hardware parallelism.
int worker_count();

// Runs body(0..n-1) across workers. Callers aggregate into index-addressed
// storage, so results do not depend on the worker count or completion order.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace epictrl
