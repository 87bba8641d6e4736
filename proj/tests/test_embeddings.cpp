#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tcs/embeddings.hpp"

using namespace tcs;

TEST(Embeddings, Metrics) {
  auto t = metric_T();
  ASSERT_EQ(t.size(), 6u);
  auto a = *t.index_of("a"), b = *t.index_of("b"), e = *t.index_of("e"), f = *t.index_of("f");
  EXPECT_EQ(t(a, b), 1);
  EXPECT_EQ(t(a, e), Rational(1, 2));
  EXPECT_EQ(t(e, f), 1);
  auto F = metric_F();
  ASSERT_EQ(F.size(), 8u);
  EXPECT_EQ(F(*F.index_of("e"), *F.index_of("f")), 1);
  EXPECT_EQ(F(*F.index_of("a"), *F.index_of("e")), Rational(1, 2));
  // triangle inequalities, exhaustive
  for (const auto* s : {&t, &F}) {
    for (std::size_t x = 0; x < s->size(); ++x)
      for (std::size_t y = 0; y < s->size(); ++y) {
        EXPECT_EQ((*s)(x, y), (*s)(y, x));
        for (std::size_t z = 0; z < s->size(); ++z) EXPECT_LE((*s)(x, z), (*s)(x, y) + (*s)(y, z));
      }
    EXPECT_TRUE(s->is_valid());
  }
}

TEST(Embeddings, SingleProblemsHaveNormOne) {
  auto t = metric_T();
  for (const auto& p : problems_T()) EXPECT_EQ(tc_norm(t, p).norm, 1);
  auto F = metric_F();
  for (const auto& p : problems_F()) EXPECT_EQ(tc_norm(F, p).norm, 1);
  auto f3 = problems_T()[2];
  EXPECT_EQ(f3.values[*t.index_of("e")], 1);
  EXPECT_EQ(f3.values[*t.index_of("f")], -1);
}

TEST(Embeddings, AllSignPatterns) {
  auto rT = verify_linfty(metric_T(), problems_T());
  EXPECT_EQ(rT.patterns, 8u);
  EXPECT_EQ(rT.max_deviation, 0);
  EXPECT_EQ(rT.rank, 3u);
  EXPECT_TRUE(rT.isometric());
  auto rF = verify_linfty(metric_F(), problems_F());
  EXPECT_EQ(rF.patterns, 16u);
  EXPECT_EQ(rF.max_deviation, 0);
  EXPECT_TRUE(rF.isometric());
  // independent recomputation of a few patterns by integer plan search
  auto F = metric_F();
  auto ps = problems_F();
  for (int mask : {0, 5, 15}) {
    std::vector<Rational> v(8);
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t x = 0; x < 8; ++x) v[x] += ((mask >> i) & 1 ? -1 : 1) * ps[i].values[x];
    std::vector<int> sup(8), dem(8);
    bool integral = true;
    for (std::size_t x = 0; x < 8; ++x) {
      if (denominator(v[x]) != 1) integral = false;
      long w = numerator(v[x]).convert_to<long>();
      (w > 0 ? sup[x] : dem[x]) = static_cast<int>(w > 0 ? w : -w);
    }
    if (!integral) continue;
    EXPECT_EQ(oracle::integer_transport(sup, dem, [&](std::size_t a, std::size_t b) { return F(a, b); }), 1);
  }
  // sum of all three on T
  auto t = metric_T();
  TransportProblem s{std::vector<Rational>(6)};
  for (const auto& p : problems_T()) s += p;
  EXPECT_EQ(tc_norm(t, s).norm, 1);
}
