#include <cmath>
#include <vector>

#include "doctest.h"

#include "horizonlab/rng.hpp"

using horizonlab::RandomStream;

TEST_CASE("identical keys reproduce the same sequence")
{
    RandomStream a(42, 7);
    RandomStream b(42, 7);
    for (int i = 0; i < 1000; ++i)
        CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct stream indices decorrelate")
{
    RandomStream a(42, 0);
    RandomStream b(42, 1);
    int collisions = 0;
    for (int i = 0; i < 1000; ++i)
        if (a.next_u64() == b.next_u64())
            ++collisions;
    CHECK(collisions == 0);
}

TEST_CASE("uniform doubles stay in [0, 1) with the right mean")
{
    RandomStream rng(1);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_double();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // mean 1/2, sigma = 1/sqrt(12 n)
    CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("bounded draws are unbiased")
{
    RandomStream rng(2);
    const int n = 100000;
    std::vector<int> counts(10, 0);
    for (int i = 0; i < n; ++i)
        ++counts[static_cast<std::size_t>(rng.next_below(10))];
    for (int c : counts) {
        const double p = static_cast<double>(c) / n;
        CHECK(std::abs(p - 0.1) < 4.0 * std::sqrt(0.1 * 0.9 / n));
    }
}

TEST_CASE("normals have unit variance")
{
    RandomStream rng(3);
    const int n = 100000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.next_normal();
        sum += z;
        sum_sq += z * z;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("forked substreams are reproducible")
{
    RandomStream parent_a(9), parent_b(9);
    RandomStream fork_a = parent_a.fork(3);
    RandomStream fork_b = parent_b.fork(3);
    for (int i = 0; i < 100; ++i)
        CHECK(fork_a.next_u64() == fork_b.next_u64());
}
