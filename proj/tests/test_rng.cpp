#include <doctest.h>

#include <cmath>

#include "kinetic_harris/rng.hpp"

using kh::CounterRng;

TEST_CASE("philox4x32-10 known answers")
{
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(CounterRng::philox({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(CounterRng::philox({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(CounterRng::philox({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("a generator restarted at a block reproduces the stream")
{
    CounterRng a(42, 7);
    for (int i = 0; i < 10; ++i)
        a();
    CounterRng b(42, 7, a.next_block());
    CHECK(a() == b());
    CHECK(a() == b());
}

TEST_CASE("streams and seeds are distinct")
{
    CHECK(CounterRng(1, 0)() != CounterRng(1, 1)());
    CHECK(CounterRng(1, 0)() != CounterRng(2, 0)());
    CHECK(kh::stream_id(kh::StreamTag::Equilibrium, 5) != kh::stream_id(kh::StreamTag::Initial, 5));
}

TEST_CASE("uniform and normal draws have the right first two moments")
{
    CounterRng rng(3, 0);
    const int n = 200000;
    double su = 0, sz = 0, sz2 = 0;
    double umin = 1, umax = 0;
    for (int i = 0; i < n; ++i)
    {
        double u = rng.uniform();
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        su += u;
        double z = rng.normal();
        sz += z;
        sz2 += z * z;
    }
    CHECK(umin > 0.0);
    CHECK(umax < 1.0);
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(sz / n) < 5.0 / std::sqrt(n));
    CHECK(sz2 / n == doctest::Approx(1.0).epsilon(0.02));
}
