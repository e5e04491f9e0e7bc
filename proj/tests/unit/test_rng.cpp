#include <doctest.h>

#include <random>
#include <set>

#include "lgset/parallel.hpp"
#include "lgset/rng.hpp"

using namespace lgset;

TEST_CASE("CounterRng is a pure function of key and counter") {
    CounterRng a(stream_key(42, {1, 2, 3}));
    CounterRng b(stream_key(42, {1, 2, 3}));
    for (int k = 0; k < 100; ++k) CHECK(a() == b());
    CHECK(a.counter() == 100);

    std::set<std::uint64_t> keys;
    for (std::int64_t i = -3; i <= 3; ++i)
        for (std::int64_t j = -3; j <= 3; ++j) keys.insert(stream_key(9, {i, j}));
    CHECK(keys.size() == 49);
    CHECK(stream_key(9, {1, 2}) != stream_key(9, {2, 1}));
    CHECK(stream_key(9, {1}) != stream_key(10, {1}));
}

TEST_CASE("CounterRng output is roughly uniform") {
    CounterRng rng(stream_key(1, {}));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = 200000;
    double sum = 0.0;
    int low = 0;
    for (int k = 0; k < n; ++k) {
        const double x = u(rng);
        sum += x;
        if (x < 0.1) ++low;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(low / static_cast<double>(n) == doctest::Approx(0.1).epsilon(0.03));
}

TEST_CASE("parallel_for visits each index once and rethrows") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);

    CHECK_THROWS_WITH(parallel_for(50, 3,
                                   [](std::size_t i) {
                                       if (i == 17) throw std::runtime_error("seventeen");
                                       if (i == 31) throw std::runtime_error("thirty-one");
                                   }),
                      "seventeen");
}
