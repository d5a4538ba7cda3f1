#include "blocktri/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace blocktri::kernels {

#if defined(BLOCKTRI_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(_M_X64))
const Backend* avx2_impl();

static bool cpu_has_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Backend* avx2() { return cpu_has_avx2() ? avx2_impl() : nullptr; }
#else
const Backend* avx2() { return nullptr; }
#endif

namespace {

std::atomic<const Backend*> g_forced{nullptr};

const Backend* detect() {
    if (const char* env = std::getenv("BLOCKTRI_KERNELS")) {
        std::string want(env);
        if (want == "scalar") return &scalar();
        if (want == "avx2" && avx2()) return avx2();
    }
    if (const Backend* b = avx2()) return b;
    return &scalar();
}

}  // namespace

const Backend& active() {
    if (const Backend* f = g_forced.load(std::memory_order_relaxed)) return *f;
    static const Backend* chosen = detect();
    return *chosen;
}

bool force(const std::string& name) {
    if (name.empty()) {
        g_forced.store(nullptr, std::memory_order_relaxed);
        return true;
    }
    if (name == "scalar") {
        g_forced.store(&scalar(), std::memory_order_relaxed);
        return true;
    }
    if (name == "avx2") {
        if (const Backend* b = avx2()) {
            g_forced.store(b, std::memory_order_relaxed);
            return true;
        }
        return false;
    }
    return false;
}

}  // namespace blocktri::kernels
