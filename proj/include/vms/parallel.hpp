#pragma once

#include "vms/common.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace vms {

/// Runs body(begin, end) over [0, n) split into `workers` contiguous chunks.
/// The first exception thrown by any chunk is rethrown after all join.
template <class Body>
void parallel_for(Index n, int workers, Body&& body)
{
    workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<Index>(n, 1))));
    if (workers == 1) {
        body(Index{0}, n);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const Index begin = n * w / workers;
        const Index end = n * (w + 1) / workers;
        threads.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace vms
