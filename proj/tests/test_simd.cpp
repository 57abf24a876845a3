#include <cmath>
#include <random>

#include "chunkwise/simd/kernels.hpp"
#include "doctest.h"

using namespace chunkwise::simd;

TEST_CASE("scalar reference") {
    const double a[] = {1, 2, 3}, b[] = {4, -5, 6};
    CHECK(scalar::dot(a, b, 3) == 12.0);
    CHECK(scalar::squared_norm(a, 3) == 14.0);
    CHECK(scalar::dot(a, b, 0) == 0.0);
}

TEST_CASE("every backend matches the scalar reference") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> v(-1, 1);
    const auto backends = available_backends();
    CHECK(backends.front() == Backend::scalar);
    MESSAGE("active backend: " << std::string(to_string(active_backend())));
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 255u, 256u, 1000u}) {
        std::vector<double> a(n), b(n);
        for (auto& x : a) x = v(rng);
        for (auto& x : b) x = v(rng);
        double magnitude = 0;
        for (std::size_t i = 0; i < n; ++i) magnitude += std::abs(a[i] * b[i]);
        const double ref = scalar::dot(a.data(), b.data(), n);
        const double ref_norm = scalar::squared_norm(a.data(), n);
        for (Backend be : backends) {
            const std::string name = to_string(be);
            CAPTURE(name);
            CAPTURE(n);
            CHECK(std::abs(dot(be, a.data(), b.data(), n) - ref) <= 1e-12 * (magnitude + 1));
            CHECK(std::abs(squared_norm(be, a.data(), n) - ref_norm) <= 1e-12 * (ref_norm + 1));
        }
        CHECK(std::abs(dot(a.data(), b.data(), n) - ref) <= 1e-12 * (magnitude + 1));
    }
}

TEST_CASE("exact on integer-valued input") {
    std::vector<double> a(37), b(37);
    for (int i = 0; i < 37; ++i) {
        a[i] = i;
        b[i] = 2 * i - 5;
    }
    for (Backend be : available_backends()) CHECK(dot(be, a.data(), b.data(), 37) == scalar::dot(a.data(), b.data(), 37));
}
