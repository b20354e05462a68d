#include "geodrev/parallel.hpp"

#include <cstdlib>
#include <string>

namespace geodrev {

void configure_threads_from_env() {
  const char* raw = std::getenv("GEODREV_THREADS");
  if (raw == nullptr || *raw == '\0') return;
  try {
    const int cap = std::stoi(raw);
    if (cap > 0) omp_set_num_threads(cap);
  } catch (const std::exception&) {
    // ignore malformed values; the OpenMP default stays in effect
  }
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace geodrev
