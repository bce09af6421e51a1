#include <doctest.h>

#include "amoebakit/rng.hpp"

using namespace amoebakit;

TEST_SUITE("rng") {

TEST_CASE("splitmix64 reference outputs") {
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("uniform draws stay in range") {
    SplitMix64 rng(42);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    SplitMix64 first(0);
    CHECK(first.uniform() == static_cast<double>(0xE220A8397B1DCDAFULL >> 11) * 0x1.0p-53);
}

TEST_CASE("stream seeds") {
    CHECK(mixSeed(0, 0) == splitmixFinalize(splitmixFinalize(0x9E3779B97F4A7C15ULL)));
    CHECK(mixSeed(1, 0) != mixSeed(0, 1));
    CHECK(mixSeed(7, 3) == mixSeed(7, 3));
    CHECK(mixSeed(0, 0) == 0x48218226FF3CD4BFULL);
    CHECK(mixSeed(0, 1) == 0xDCE423FC82C0D5B8ULL);
    CHECK(mixSeed(1, 0) == 0x9E0160293A33AAF7ULL);
    CHECK(mixSeed(2024, 7) == 0x715BF137C3FE6728ULL);
}

} // TEST_SUITE
