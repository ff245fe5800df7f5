// SPDX-License-Identifier: Apache-2.0
#include "daqsim/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace daqsim::kernels {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

std::atomic<const Ops *> g_forced{nullptr};

const Ops *auto_select() {
    if (const char *env = std::getenv("DAQSIM_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0)
            return &scalar_ops();
#if defined(__x86_64__) || defined(__i386__)
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2())
            return &avx2_ops();
#endif
    }
#if defined(__x86_64__) || defined(__i386__)
    if (cpu_has_avx2())
        return &avx2_ops();
#endif
    return &scalar_ops();
}

} // namespace

const Ops &active() {
    if (const Ops *f = g_forced.load(std::memory_order_relaxed))
        return *f;
    static const Ops *selected = auto_select();
    return *selected;
}

void set_backend(const Ops *ops) { g_forced.store(ops, std::memory_order_relaxed); }

} // namespace daqsim::kernels
