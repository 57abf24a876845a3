#pragma once

#include <cstddef>
#include <vector>

namespace chunkwise::simd {

enum class Backend { scalar, avx2, neon };

const char* to_string(Backend b);

/// Backends usable on this CPU; scalar is always first.
std::vector<Backend> available_backends();

/// Best available backend, detected once.
Backend active_backend();

double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);

// Explicit backend selection, for equivalence testing. Unavailable backends fall back to scalar.
double dot(Backend backend, const double* a, const double* b, std::size_t n);
double squared_norm(Backend backend, const double* a, std::size_t n);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
}  // namespace scalar

}  // namespace chunkwise::simd
