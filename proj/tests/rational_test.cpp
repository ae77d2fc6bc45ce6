#include "atspp/rational.hpp"

#include <gtest/gtest.h>

#include <random>

using atspp::Rational;

TEST(Rational, CanonicalForm) {
  Rational r(6, -4);
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_EQ(Rational(0, 5).str(), "0");
  EXPECT_TRUE(Rational(4, 2).is_integer());
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, Parse) {
  EXPECT_EQ(Rational::parse("3/4"), Rational(3, 4));
  EXPECT_EQ(Rational::parse("-7"), Rational(-7));
  EXPECT_EQ(Rational::parse("0.75"), Rational(3, 4));
  EXPECT_EQ(Rational::parse("1/2"), Rational(1, 2));
  EXPECT_THROW(Rational::parse("x"), std::invalid_argument);
}

TEST(Rational, Floor) {
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(5).floor(), 5);
}

TEST(Rational, SpillsToBigAndBack) {
  Rational big(1LL << 61);
  big *= Rational(1LL << 61);
  EXPECT_FALSE(big.is_small());
  big /= Rational(1LL << 61);
  EXPECT_TRUE(big.is_small());
  EXPECT_EQ(big, Rational(1LL << 61));
}

TEST(Rational, Log2Helpers) {
  EXPECT_EQ(atspp::ceil_log2(1), 0);
  EXPECT_EQ(atspp::ceil_log2(2), 1);
  EXPECT_EQ(atspp::ceil_log2(5), 3);
  EXPECT_EQ(atspp::ceil_log2(8), 3);
  EXPECT_EQ(atspp::ceil_log2(9), 4);
  EXPECT_EQ(atspp::pow2(10), Rational(1024));
}

// Every operation agrees with GMP on random operands, including ones large
// enough to leave the inline representation.
TEST(Rational, MatchesGmpOnRandomOperations) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<long long> small(-1000, 1000);
  std::uniform_int_distribution<long long> wide(-(1LL << 40), 1LL << 40);
  for (int trial = 0; trial < 4000; ++trial) {
    auto draw = [&](bool w) {
      long long p = w ? wide(rng) : small(rng);
      long long q = w ? wide(rng) : small(rng);
      if (q == 0) q = 1;
      return std::pair{Rational(p, q), mpq_class(mpz_class(static_cast<long>(p)), mpz_class(static_cast<long>(q)))};
    };
    auto [a, ma] = draw(trial % 3 == 0);
    auto [b, mb] = draw(trial % 5 == 0);
    ma.canonicalize();
    mb.canonicalize();
    EXPECT_EQ((a + b).to_mpq(), mpq_class(ma + mb));
    EXPECT_EQ((a - b).to_mpq(), mpq_class(ma - mb));
    EXPECT_EQ((a * b).to_mpq(), mpq_class(ma * mb));
    if (!b.is_zero()) {
      EXPECT_EQ((a / b).to_mpq(), mpq_class(ma / mb));
    }
    EXPECT_EQ(a < b, ma < mb);
    EXPECT_EQ(a == b, ma == mb);
    Rational c = a;
    c.sub_mul(b, a);
    EXPECT_EQ(c.to_mpq(), mpq_class(ma - mb * ma));
  }
}
