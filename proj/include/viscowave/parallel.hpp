#ifndef VISCOWAVE_PARALLEL_HPP
#define VISCOWAVE_PARALLEL_HPP

#include <functional>

namespace viscowave
{

// Process-wide worker count used by the per-mode and per-column loops. Values < 1 are
// clamped to 1.
void SetWorkerThreads(int threads);
int WorkerThreads();

// Runs body(i) for i in [0, count). Each index is executed exactly once; callers write
// results into pre-sized slots so the outcome does not depend on scheduling.
void ParallelFor(int count, const std::function<void(int)> &body);

}  // namespace viscowave

#endif  // VISCOWAVE_PARALLEL_HPP
