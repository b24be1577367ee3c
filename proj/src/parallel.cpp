#include "viscowave/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace viscowave
{

namespace
{

std::atomic<int> worker_threads{1};

}  // namespace

void SetWorkerThreads(int threads)
{
  worker_threads.store(std::max(1, threads));
}

int WorkerThreads()
{
  return worker_threads.load();
}

void ParallelFor(int count, const std::function<void(int)> &body)
{
  const int threads = std::min(WorkerThreads(), count);
  if (threads <= 1)
  {
    for (int i = 0; i < count; i++)
    {
      body(i);
    }
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]()
  {
    for (int i = next++; i < count; i = next++)
    {
      try
      {
        body(i);
      }
      catch (...)
      {
        std::lock_guard lock(failure_mutex);
        if (!failure)
        {
          failure = std::current_exception();
        }
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; t++)
  {
    pool.emplace_back(worker);
  }
  pool.clear();  // joins
  if (failure)
  {
    std::rethrow_exception(failure);
  }
}

}  // namespace viscowave
