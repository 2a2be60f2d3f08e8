#pragma once

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace symfun::sweep {

struct Policy {
    // 0 = all hardware threads, 1 = serial reference path, n = n workers.
    int jobs = 0;
};

inline int worker_count(Policy pol) {
#ifdef _OPENMP
    return pol.jobs > 0 ? pol.jobs : omp_get_max_threads();
#else
    (void)pol;
    return 1;
#endif
}

// Serial reference fold: the plain loop the parallel kernel must agree with.
// make_worker() returns a callable f(Acc&, rank) that may own scratch space.
template <class Acc, class WorkerFactory>
Acc fold_serial(std::uint64_t count, WorkerFactory&& make_worker) {
    Acc acc;
    auto worker = make_worker();
    for (std::uint64_t r = 0; r < count; ++r) worker(acc, r);
    return acc;
}

// OpenMP fold over ranks [0, count). Acc::merge must be commutative and
// associative with deterministic tie-breaking, so the result is independent
// of the worker count and schedule.
template <class Acc, class WorkerFactory>
Acc fold(std::uint64_t count, Policy pol, WorkerFactory&& make_worker) {
    const int threads = worker_count(pol);
    if (threads <= 1 || count < 2) return fold_serial<Acc>(count, make_worker);
#ifdef _OPENMP
    std::vector<Acc> partial(static_cast<std::size_t>(threads));
    #pragma omp parallel num_threads(threads)
    {
        const int tid = omp_get_thread_num();
        Acc local;
        auto worker = make_worker();
        #pragma omp for schedule(static)
        for (std::int64_t r = 0; r < static_cast<std::int64_t>(count); ++r)
            worker(local, static_cast<std::uint64_t>(r));
        partial[static_cast<std::size_t>(tid)] = std::move(local);
    }
    Acc acc = std::move(partial[0]);
    for (std::size_t t = 1; t < partial.size(); ++t) acc.merge(partial[t]);
    return acc;
#else
    return fold_serial<Acc>(count, make_worker);
#endif
}

}  // namespace symfun::sweep
