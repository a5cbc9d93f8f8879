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

#include "nearfield/kernels.hpp"
#include "nearfield/errors.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace nearfield::kernels
{
    namespace
    {
        bool cpu_has_avx2()
        {
#if defined(NEARFIELD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            __builtin_cpu_init();
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        }

        Isa best_isa()
        {
            return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
        }

        Isa initial_isa()
        {
            const char *env = std::getenv("NEARFIELD_KERNEL");
            if (env == nullptr)
                return best_isa();
            const std::string v(env);
            if (v == "scalar")
                return Isa::scalar;
            if (v == "avx2" && isa_supported(Isa::avx2))
                return Isa::avx2;
            return best_isa();
        }

        std::atomic<Isa> &active()
        {
            static std::atomic<Isa> isa{initial_isa()};
            return isa;
        }
    }

    std::string_view isa_name(Isa isa)
    {
        switch (isa)
        {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
        }
        return "unknown";
    }

    bool isa_supported(Isa isa)
    {
        switch (isa)
        {
        case Isa::scalar:
            return true;
        case Isa::avx2:
            return cpu_has_avx2();
        }
        return false;
    }

    std::vector<Isa> supported_isas()
    {
        std::vector<Isa> out{Isa::scalar};
        if (isa_supported(Isa::avx2))
            out.push_back(Isa::avx2);
        return out;
    }

    Isa active_isa() { return active().load(std::memory_order_relaxed); }

    void select_isa(Isa isa)
    {
        if (!isa_supported(isa))
            throw ValidationError("kernel variant '" + std::string(isa_name(isa)) + "' is not supported on this CPU");
        active().store(isa, std::memory_order_relaxed);
    }

    ElementSums element_sums(const Geometry &g, Isa isa)
    {
        switch (isa)
        {
#ifdef NEARFIELD_HAVE_AVX2
        case Isa::avx2:
            return element_sums_avx2(g);
#endif
        default:
            return element_sums_scalar(g);
        }
    }

    ElementSums element_sums(const Geometry &g) { return element_sums(g, active_isa()); }
}
