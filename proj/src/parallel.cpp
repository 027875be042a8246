#include "superlat/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace superlat {

int resolve_threads(int requested) {
  int threads = requested > 0 ? requested : omp_get_max_threads();
  if (const char* cap = std::getenv("SUPERLAT_THREADS")) {
    try {
      int limit = std::stoi(cap);
      if (limit > 0) threads = std::min(threads, limit);
    } catch (const std::exception&) {
      // unparsable value: ignore the cap
    }
  }
  return std::max(threads, 1);
}

}  // namespace superlat
