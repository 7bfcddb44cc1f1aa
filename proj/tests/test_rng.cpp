#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "nightforge/rng.hpp"

using namespace nightforge;

TEST_CASE("Rng: identical seeds give identical streams") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform lies in [0,1), uniform_open in (0,1]") {
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = rng.uniform_open();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("uniform_index stays in range and covers small supports") {
    Rng rng(2);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t v = rng.uniform_index(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("normal draws have roughly unit variance and zero mean") {
    Rng rng(3);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::fabs(mean) <= 0.01);
    CHECK(std::fabs(var - 1.0) <= 0.02);
}

TEST_CASE("derive_stream_seed separates indices and worker layouts") {
    const std::uint64_t base = derive_stream_seed(42, 0);
    std::set<std::uint64_t> seeds{base};
    for (std::uint64_t i = 1; i < 100; ++i) {
        const std::uint64_t s = derive_stream_seed(42, i);
        CHECK(!seeds.count(s));
        seeds.insert(s);
    }
    CHECK(derive_stream_seed(42, 5) == derive_stream_seed(42, 5));
    CHECK(derive_stream_seed(42, 5) != derive_stream_seed(43, 5));
}

TEST_CASE("shuffle is a deterministic permutation") {
    std::vector<int> v(20);
    std::iota(v.begin(), v.end(), 0);
    std::vector<int> w = v;
    Rng a(9), b(9);
    a.shuffle(v);
    b.shuffle(w);
    CHECK(v == w);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 20; ++i) CHECK(sorted[i] == i);
}
