#include "ocf/parallel.hpp"

#include <atomic>

namespace ocf {

namespace {
std::atomic<unsigned> g_thread_limit{0};
}

void set_thread_limit(unsigned n) { g_thread_limit = n; }

unsigned thread_count() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned cap = g_thread_limit.load();
  return cap == 0 ? hw : std::min(cap, hw);
}

}  // namespace ocf
