#include "capflow/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace capflow {

int configure_threads_from_env() {
  if (const char* env = std::getenv("CAPFLOW_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) omp_set_num_threads(n);
    } catch (const std::exception&) {
      // unparseable values leave the runtime default in place
    }
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace capflow
