#include "kdisc/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kdisc::par {

bool& enabled() {
#ifdef _OPENMP
    static bool on = true;
#else
    static bool on = false;
#endif
    return on;
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace kdisc::par
