#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sdw {

inline int hardware_jobs() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// results[i] = fn(i), serial reference path.
template <class T, class Fn>
std::vector<T> map_indexed_serial(std::size_t n, Fn&& fn) {
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
}

// OpenMP map over [0, n): deterministic because slot i only ever holds fn(i),
// whatever the schedule. jobs <= 0 picks the hardware default.
template <class T, class Fn>
std::vector<T> map_indexed(std::size_t n, int jobs, Fn&& fn) {
#ifdef _OPENMP
    if (jobs == 1) return map_indexed_serial<T>(n, fn);
    std::vector<T> out(n);
    const int threads = jobs <= 0 ? hardware_jobs() : jobs;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    return out;
#else
    (void)jobs;
    return map_indexed_serial<T>(n, fn);
#endif
}

} // namespace sdw
