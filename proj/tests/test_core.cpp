#include <gtest/gtest.h>

#include <atomic>
#include <vector>

#include "gpfab/core.hpp"

using namespace gpfab;

TEST(Core, ReduceMod) {
  EXPECT_EQ(reduce_mod(-1, 5), 4u);
  EXPECT_EQ(reduce_mod(-10, 5), 0u);
  EXPECT_EQ(reduce_mod(12, 5), 2u);
  EXPECT_EQ(reduce_mod(std::numeric_limits<i64>::min(), 7), 6u);  // -2^63 = -9223372036854775808, 2^63 mod 7 = 1
}

TEST(Core, Isqrt) {
  for (u64 n = 0; n < 10'000; ++n) {
    const u64 r = isqrt(n);
    ASSERT_LE(r * r, n);
    ASSERT_GT((r + 1) * (r + 1), n);
  }
  EXPECT_EQ(isqrt(~u64{0}), 4'294'967'295u);
}

TEST(Core, ModularArithmetic) {
  EXPECT_EQ(powmod(2, 10, 1000), 24u);
  EXPECT_EQ(mulmod(~u64{0}, ~u64{0}, 1'000'000'007), static_cast<u64>((static_cast<unsigned __int128>(~u64{0}) * ~u64{0}) % 1'000'000'007));
  for (u64 m = 2; m < 60; ++m)
    for (u64 a = 1; a < m; ++a)
      if (gcd(a, m) == 1) {
        ASSERT_EQ(a * inverse_mod(a, m) % m, 1u);
      }
  EXPECT_THROW(inverse_mod(2, 4), InvalidArgument);
}

TEST(Core, FloorCeilSnap) {
  EXPECT_EQ(floor_real(0.8 * 250000), 200000);
  EXPECT_EQ(floor_real((1.0 - 0.2) * 500 * 500), 200000);
  EXPECT_EQ(floor_real(2.5), 2);
  EXPECT_EQ(ceil_real(2.5), 3);
  EXPECT_EQ(ceil_real(3.0000000000001), 3);
  EXPECT_EQ(floor_real(-0.5), -1);
}

TEST(Core, CompensatedSumBeatsNaive) {
  CompensatedSum s;
  s += 1.0;
  for (int i = 0; i < 1000; ++i) s += 1e-16;
  EXPECT_NEAR(s.value(), 1.0 + 1e-13, 1e-16);
}

TEST(Core, ParallelForCoversEachIndexOnce) {
  for (unsigned t : {1u, 2u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), Parallelism{t}, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) ASSERT_EQ(h.load(), 1);
  }
}

TEST(Core, ParallelForRethrows) {
  EXPECT_THROW(parallel_for(100, Parallelism{4},
                            [](std::size_t i) {
                              if (i == 57) throw RangeError("boom");
                            }),
               RangeError);
}
