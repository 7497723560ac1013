#pragma once

#include <cstddef>

// Parallel index loop with an explicit serial branch. An OpenMP `if` clause
// still enters the runtime and costs microseconds per region, which is fatal
// for kernels called once per Monte-Carlo trial; a plain branch keeps the
// serial path free. The body must write only to slots owned by its index so
// results are identical at any thread count.

namespace tsk {

template <typename Body>
inline void parallel_for_index(std::size_t count, std::size_t work, std::size_t threshold,
                               Body&& body) {
#ifdef _OPENMP
    if (work >= threshold) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace tsk
