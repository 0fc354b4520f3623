#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#include <omp.h>

namespace kh {

// Execution settings for data-parallel kernels. workers <= 0 means the
// OpenMP default.
struct Execution
{
    int workers = 0;
    bool serial = false;
};

// Runs body(i) for i in [0, n) across OpenMP threads. The first exception
// thrown by any iteration is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, const Execution& exec, Body&& body)
{
    if (exec.serial)
    {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex guard;
    int threads = exec.workers > 0 ? exec.workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::size_t i = 0; i < n; ++i)
    {
        try
        {
            body(i);
        }
        catch (...)
        {
            std::lock_guard<std::mutex> lock(guard);
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
}

} // namespace kh
