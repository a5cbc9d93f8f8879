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

#ifndef NEARFIELD_PARALLEL_HPP
#define NEARFIELD_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace nearfield
{
    // Worker cap: NEARFIELD_THREADS if set to a positive integer, otherwise hardware concurrency.
    // set_worker_count(0) restores the environment / automatic value.
    std::size_t worker_count();
    void set_worker_count(std::size_t n);

    // Calls body(i) for i in [0, n). Iterations must write to disjoint outputs; results are then
    // independent of the number of workers. Nested calls run serially on the calling thread.
    // If iterations throw, the exception of the lowest failing index is rethrown.
    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);
}

#endif
