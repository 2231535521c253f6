#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "secharq/rng.hpp"

using namespace secharq;

TEST_CASE("identical keys replay identical sequences") {
    rng::stream a(rng::substream_key(123, 1, 0));
    rng::stream b(rng::substream_key(123, 1, 0));
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("substream keys separate streams and trials") {
    std::set<std::uint64_t> keys;
    for (std::uint64_t s = 0; s < 10; ++s)
        for (std::uint64_t i = 0; i < 100; ++i)
            keys.insert(rng::substream_key(99, s, i));
    CHECK(keys.size() == 1000);
}

// The per-trial draws may be consumed in any order; estimates built from them
// cannot depend on batching.
TEST_CASE("trial substreams are order independent") {
    std::vector<double> forward(10), backward(10);
    for (int i = 0; i < 10; ++i)
        forward[i] = rng::substream(5, 2, i).next_unit();
    for (int i = 9; i >= 0; --i)
        backward[i] = rng::substream(5, 2, i).next_unit();
    CHECK(forward == backward);
}

TEST_CASE("unit draws stay in range with the right mean") {
    auto g = rng::substream(2026, 0, 0);
    const int n = 100'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = g.next_unit();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    const double sd = 1.0 / std::sqrt(12.0);
    CHECK(std::abs(sum / n - 0.5) <= 3.0 * sd / std::sqrt(double(n)));
}

TEST_CASE("exponential draws have the requested mean") {
    auto g = rng::substream(2026, 0, 1);
    const int n = 200'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = g.next_exponential(3.0);
        REQUIRE(x >= 0.0);
        sum += x;
    }
    CHECK(std::abs(sum / n - 3.0) <= 3.0 * 3.0 / std::sqrt(double(n)));
}
