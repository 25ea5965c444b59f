#pragma once

#include <cstddef>
#include <span>

namespace sfs {

/// Selects between the OpenMP kernel and its serial reference.  Both
/// produce bit-identical results; the serial path exists for testing and
/// benchmarking.
enum class Exec { Serial, Parallel };

/// Caps the OpenMP team size.  Values < 1 restore the runtime default.
void set_thread_limit(int threads);
int thread_limit();

/// Pairwise (tree) summation.  The reduction order depends only on the
/// length of the input, never on the thread count.
double pairwise_sum(std::span<const double> values);

}  // namespace sfs
