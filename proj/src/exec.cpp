#include "sfs/exec.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sfs {

namespace {
int g_default_threads = -1;
}

void set_thread_limit(int threads) {
#ifdef _OPENMP
    if (g_default_threads < 0) g_default_threads = omp_get_max_threads();
    omp_set_num_threads(threads >= 1 ? threads : g_default_threads);
#else
    (void)threads;
#endif
}

int thread_limit() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kLeaf = 8;
    if (values.size() <= kLeaf) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace sfs
