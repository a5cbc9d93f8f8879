// SPDX-License-Identifier: Apache-2.0
//
// nearfield - near-field / far-field transition distances for uniform linear arrays
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

#include "nearfield/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace nearfield
{
    namespace
    {
        std::atomic<std::size_t> g_override{0};
        thread_local bool t_inside = false;

        std::size_t env_workers()
        {
            if (const char *env = std::getenv("NEARFIELD_THREADS"))
            {
                char *end = nullptr;
                const long v = std::strtol(env, &end, 10);
                if (end != env && *end == '\0' && v > 0)
                    return std::size_t(v);
            }
            return std::max(1u, std::thread::hardware_concurrency());
        }
    }

    std::size_t worker_count()
    {
        const std::size_t o = g_override.load(std::memory_order_relaxed);
        return o > 0 ? o : env_workers();
    }

    void set_worker_count(std::size_t n) { g_override.store(n, std::memory_order_relaxed); }

    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body)
    {
        const std::size_t workers = std::min(worker_count(), n);
        if (workers <= 1 || t_inside)
        {
            for (std::size_t i = 0; i < n; ++i)
                body(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(n);
        auto run = [&]()
        {
            t_inside = true;
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
            {
                try
                {
                    body(i);
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            }
            t_inside = false;
        };

        std::vector<std::thread> pool;
        pool.reserve(workers - 1);
        for (std::size_t t = 1; t < workers; ++t)
            pool.emplace_back(run);
        run();
        for (auto &t : pool)
            t.join();

        for (auto &e : errors)
            if (e)
                std::rethrow_exception(e);
    }
}
