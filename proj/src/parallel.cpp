#include "tvq1/parallel.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tvq1 {

namespace {
std::atomic<bool> g_force_serial{false};
}

void set_force_serial(bool on) noexcept { g_force_serial.store(on); }

bool force_serial() noexcept { return g_force_serial.load(); }

int worker_count() {
  if (g_force_serial.load()) return 1;
  int n = 1;
#ifdef _OPENMP
  n = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("TVD_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = static_cast<int>(std::min<long>(n, cap));
  }
  return n < 1 ? 1 : n;
}

} // namespace tvq1
