// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace enclosure
{
/*!
 * Run fn(i) for i in [0, count) on up to \c jobs threads.
 *
 * Work is handed out in index order. The exception thrown for the smallest
 * failing index is rethrown after all workers stop, so error reports do not
 * depend on scheduling.
 */
template<class F>
void parallel_for(std::size_t count, int jobs, F&& fn)
{
    std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), count);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex mutex;
    std::size_t failed_index = count;
    std::exception_ptr failure;

    auto work = [&] {
        while (!stop.load())
        {
            std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(mutex);
                if (i < failed_index)
                {
                    failed_index = i;
                    failure = std::current_exception();
                }
                stop.store(true);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(work);
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace enclosure
