#include "doctest.h"
#include "mimoid/rng.hpp"

#include <cmath>
#include <set>

using namespace mimoid;

TEST_CASE("counter rng") {
    SUBCASE("same key, same stream") {
        CounterRng a(7, 3, streams::kInputs);
        CounterRng b(7, 3, streams::kInputs);
        for (int i = 0; i < 100; ++i) {
            CHECK(a.next_u64() == b.next_u64());
        }
    }

    SUBCASE("different counters and streams diverge") {
        std::set<std::uint64_t> firsts;
        for (std::uint64_t c = 0; c < 50; ++c) {
            firsts.insert(CounterRng(7, c, streams::kInputs).next_u64());
            firsts.insert(CounterRng(7, c, streams::kProcessNoise).next_u64());
        }
        CHECK(firsts.size() == 100);
    }

    SUBCASE("uniform stays inside the open interval") {
        CounterRng r(1, 0, 0);
        for (int i = 0; i < 10000; ++i) {
            const double u = r.uniform();
            CHECK(u > 0.0);
            CHECK(u < 1.0);
        }
    }

    SUBCASE("normal moments") {
        CounterRng r(2, 0, 0);
        double sum = 0.0;
        double sq = 0.0;
        const int count = 100000;
        for (int i = 0; i < count; ++i) {
            const double z = r.normal();
            sum += z;
            sq += z * z;
        }
        CHECK(std::abs(sum / count) < 0.02);
        CHECK(std::abs(sq / count - 1.0) < 0.02);
    }

    SUBCASE("derived seeds") {
        CHECK(derive_seed(1, 2) == derive_seed(1, 2));
        CHECK(derive_seed(1, 2) != derive_seed(1, 3));
        CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
    }
}
