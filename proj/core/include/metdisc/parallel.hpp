#pragma once

#include <cstddef>
#include <functional>

namespace metdisc {

// Worker count used by parallel_for. Initialised from METDISC_WORKERS, falling
// back to the hardware concurrency.
std::size_t default_workers();
void set_default_workers(std::size_t workers);

// Runs body(i) for every i in [0, n_tasks). Tasks are independent; callers
// write results into per-task slots and reduce them in index order, so the
// outcome never depends on the worker count.
void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& body);

}  // namespace metdisc
