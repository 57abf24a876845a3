#include <cstdlib>
#include <cstring>

#include "backends.hpp"
#include "chunkwise/simd/kernels.hpp"

namespace chunkwise::simd {

namespace {

bool supported(Backend b) {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend detect() {
    // CHUNKWISE_SIMD=scalar forces the reference kernels.
    if (const char* env = std::getenv("CHUNKWISE_SIMD"); env && std::strcmp(env, "scalar") == 0) return Backend::scalar;
    const auto all = available_backends();
    return all.back();
}

}  // namespace

const char* to_string(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "scalar";
}

std::vector<Backend> available_backends() {
    std::vector<Backend> out{Backend::scalar};
    for (Backend b : {Backend::avx2, Backend::neon})
        if (supported(b)) out.push_back(b);
    return out;
}

Backend active_backend() {
    static const Backend b = detect();
    return b;
}

double dot(Backend backend, const double* a, const double* b, std::size_t n) {
    if (!supported(backend)) return scalar::dot(a, b, n);
    switch (backend) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2: return avx2::dot(a, b, n);
#endif
#if defined(__aarch64__)
        case Backend::neon: return neon::dot(a, b, n);
#endif
        default: return scalar::dot(a, b, n);
    }
}

double squared_norm(Backend backend, const double* a, std::size_t n) {
    if (!supported(backend)) return scalar::squared_norm(a, n);
    switch (backend) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2: return avx2::squared_norm(a, n);
#endif
#if defined(__aarch64__)
        case Backend::neon: return neon::squared_norm(a, n);
#endif
        default: return scalar::squared_norm(a, n);
    }
}

double dot(const double* a, const double* b, std::size_t n) { return dot(active_backend(), a, b, n); }

double squared_norm(const double* a, std::size_t n) { return squared_norm(active_backend(), a, n); }

}  // namespace chunkwise::simd
