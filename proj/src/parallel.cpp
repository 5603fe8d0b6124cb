#include "mixnl/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>

namespace mixnl {

namespace {

std::atomic<int> override_threads{0};

int env_threads()
{
  const char* v = std::getenv("MIXNL_THREADS");
  if (v == nullptr)
    return 0;
  const int n = std::atoi(v);
  return n > 0 ? n : 0;
}

} // namespace

int thread_count()
{
  if (const int n = override_threads.load(); n > 0)
    return n;
  static const int from_env = env_threads();
  if (from_env > 0)
    return from_env;
  return omp_get_max_threads();
}

void set_thread_count(int n)
{
  override_threads.store(n > 0 ? n : 0);
}

} // namespace mixnl
