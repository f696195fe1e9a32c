#pragma once

namespace capflow {

// Selects between the serial reference kernel and its OpenMP counterpart.
// Both produce bit-identical results.
enum class Exec { serial, parallel };

// Applies the CAPFLOW_THREADS cap (if set) to the OpenMP runtime. Returns the
// number of worker threads in effect.
int configure_threads_from_env();

int max_threads();

}  // namespace capflow
