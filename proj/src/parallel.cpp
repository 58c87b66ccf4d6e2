#include "ginidep/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace ginidep {
namespace {

unsigned initial_thread_count() {
  if (const char* env = std::getenv("GINIDEP_THREADS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (...) {
    }
  }
  return 0;
}

std::atomic<unsigned> configured{initial_thread_count()};

}  // namespace

void set_thread_count(unsigned count) noexcept { configured.store(count); }

unsigned thread_count() noexcept {
  const unsigned c = configured.load();
  if (c != 0) {
    return c;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace ginidep
