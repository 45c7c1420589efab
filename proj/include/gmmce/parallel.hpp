// SPDX-License-Identifier: Apache-2.0
//
// gmmce - Gaussian mixture model channel estimation library
// Copyright (C) 2026 gmmce contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef GMMCE_PARALLEL_HPP
#define GMMCE_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gmmce {

// Resolves a requested worker count: 0 means "use hardware concurrency".
inline int resolve_thread_count(int requested) {
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(chunk_index, begin, end) over [0, n_items) split into fixed-size
// chunks. The chunk grid depends only on n_items and chunk_size, never on the
// worker count, so any per-chunk results a caller stores can be reduced in
// chunk order to obtain output that is independent of the thread count.
template <typename Fn>
void parallel_chunks(std::size_t n_items, std::size_t chunk_size, int n_threads, Fn &&fn) {
    if (n_items == 0)
        return;
    if (chunk_size == 0)
        chunk_size = 1;
    const std::size_t n_chunks = (n_items + chunk_size - 1) / chunk_size;
    n_threads = resolve_thread_count(n_threads);

    if (n_threads <= 1 || n_chunks == 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            const std::size_t begin = c * chunk_size;
            const std::size_t end = std::min(begin + chunk_size, n_items);
            fn(c, begin, end);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks)
                return;
            const std::size_t begin = c * chunk_size;
            const std::size_t end = std::min(begin + chunk_size, n_items);
            try {
                fn(c, begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next.store(n_chunks);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    const int n_workers = static_cast<int>(std::min<std::size_t>(n_chunks, static_cast<std::size_t>(n_threads)));
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t)
        pool.emplace_back(worker);
    for (auto &th : pool)
        th.join();

    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace gmmce

#endif
