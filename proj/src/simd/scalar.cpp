#include "chunkwise/simd/kernels.hpp"

namespace chunkwise::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

double squared_norm(const double* a, std::size_t n) { return dot(a, a, n); }

}  // namespace chunkwise::simd::scalar
