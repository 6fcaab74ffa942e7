#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "choiceless/linalg/binnat.hpp"
#include "choiceless/linalg/field.hpp"
#include "choiceless/linalg/intmatrix.hpp"
#include "choiceless/linalg/matfile.hpp"
#include "choiceless/linalg/matrix.hpp"
#include "choiceless/linalg/primes.hpp"
#include "exact_det.hpp"

namespace choiceless::linalg {
namespace {

using testing::cpp_int;
using testing::exact_det;

FieldMatrix random_rect(const FiniteField& f, std::size_t r, std::size_t c,
                        std::mt19937_64& rng, const std::string& rp = "r",
                        const std::string& cp = "c") {
  std::vector<std::string> rows, cols;
  for (std::size_t i = 0; i < r; ++i) rows.push_back(rp + std::to_string(i));
  for (std::size_t j = 0; j < c; ++j) cols.push_back(cp + std::to_string(j));
  FieldMatrix m(rows, cols);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rng() % f.order();
  return m;
}

std::vector<std::size_t> shuffled(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// Ordered textbook product for prime fields.
FieldMatrix naive_mul(std::uint32_t p, const FieldMatrix& a, const FieldMatrix& b) {
  FieldMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.num_rows(); ++i)
    for (std::size_t k = 0; k < b.num_cols(); ++k) {
      std::uint64_t s = 0;
      for (std::size_t j = 0; j < a.num_cols(); ++j)
        s += std::uint64_t{a.at(i, j)} * b.get(a.cols()[j], b.cols()[k]);
      out.at(i, k) = static_cast<Elem>(s % p);
    }
  return out;
}

std::vector<std::vector<std::uint32_t>> to_rows(const FieldMatrix& m) {
  std::vector<std::vector<std::uint32_t>> v(m.num_rows());
  for (std::size_t i = 0; i < m.num_rows(); ++i)
    for (std::size_t j = 0; j < m.num_cols(); ++j)
      v[i].push_back(m.get(m.rows()[i], m.rows()[j]));
  return v;
}

// Every square matrix of size n over Z/q, in lexicographic entry order.
std::vector<FieldMatrix> all_matrices(std::uint32_t q, std::size_t n) {
  std::vector<FieldMatrix> out;
  std::size_t cells = n * n, total = 1;
  for (std::size_t k = 0; k < cells; ++k) total *= q;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::vector<Elem>> v(n, std::vector<Elem>(n));
    std::size_t c = code;
    for (std::size_t k = 0; k < cells; ++k) {
      v[k / n][k % n] = c % q;
      c /= q;
    }
    out.push_back(FieldMatrix::from_rows(v));
  }
  return out;
}

TEST(FieldTest, PrimeArithmetic) {
  FiniteField f = FiniteField::prime(7);
  EXPECT_EQ(f.order(), 7u);
  EXPECT_EQ(f.characteristic(), 7u);
  EXPECT_EQ(f.add(5, 4), 2u);
  EXPECT_EQ(f.mul(3, 5), 1u);
  EXPECT_EQ(f.inv(3), 5u);
  EXPECT_EQ(f.neg(2), 5u);
  EXPECT_EQ(f.times(9, 3), 6u);
  EXPECT_THROW(f.inv(0), Error);
  EXPECT_THROW(FiniteField::prime(9), Error);
}

TEST(FieldTest, TableFieldsSatisfyAxioms) {
  for (std::uint32_t q : {4u, 8u, 9u, 16u, 25u, 27u, 32u, 49u, 64u}) {
    FiniteField f = finite_field(q);  // axioms are checked on construction
    EXPECT_EQ(f.order(), q);
    EXPECT_FALSE(f.is_prime_field());
    std::uint32_t pe = 1;
    for (std::uint32_t k = 0; k < f.degree(); ++k) pe *= f.characteristic();
    EXPECT_EQ(pe, q);
    // The multiplicative group is cyclic of order q-1, so x^(q-1) = 1.
    for (Elem x = 1; x < q; ++x) {
      Elem acc = 1;
      for (std::uint32_t k = 0; k + 1 < q; ++k) acc = f.mul(acc, x);
      EXPECT_EQ(acc, 1u);
    }
  }
}

TEST(FieldTest, GF4Tables) {
  FiniteField f = finite_field(4);
  EXPECT_EQ(f.characteristic(), 2u);
  // With x^2 = x + 1 and element index c0 + 2 c1: x·x = x + 1.
  EXPECT_EQ(f.mul(2, 2), 3u);
  EXPECT_EQ(f.mul(2, 3), 1u);
  EXPECT_EQ(f.add(2, 3), 1u);
}

TEST(FieldTest, RejectsNonFieldTables) {
  // Z/4 is a ring, not a field: 2 has no inverse.
  std::vector<Elem> add(16), mul(16);
  for (Elem a = 0; a < 4; ++a)
    for (Elem b = 0; b < 4; ++b) {
      add[a * 4 + b] = (a + b) % 4;
      mul[a * 4 + b] = (a * b) % 4;
    }
  EXPECT_THROW(FiniteField::from_tables(4, add, mul), Error);
  EXPECT_THROW(finite_field(6), Error);
}

TEST(BinNatTest, ArithmeticMatchesMachineIntegers) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 500; ++t) {
    std::uint64_t a = rng() >> 34, b = rng() >> 34;
    EXPECT_EQ(BinNat(a) + BinNat(b), BinNat(a + b));
    EXPECT_EQ(BinNat(a) * BinNat(b), BinNat(a * b));
    if (a >= b) {
      EXPECT_EQ(BinNat(a) - BinNat(b), BinNat(a - b));
    }
    EXPECT_EQ(BinNat(a) < BinNat(b), a < b);
    EXPECT_EQ(BinNat(a).to_decimal(), std::to_string(a));
  }
  EXPECT_THROW(BinNat(3) - BinNat(4), Error);
  EXPECT_TRUE(BinNat(0).is_zero());
  EXPECT_EQ(BinNat::from_positions({3, 0, 3}), BinNat(9));
}

TEST(BinNatTest, GlOrderExamples) {
  EXPECT_EQ(gl_order(2, 1), BinNat(1));
  EXPECT_EQ(gl_order(2, 2), BinNat(6));
  EXPECT_EQ(gl_order(2, 3), BinNat(168));
  EXPECT_EQ(gl_order(3, 2), BinNat(48));
}

TEST(BinNatTest, GlOrderAgreesWithBruteForceAtTwo) {
  for (std::uint32_t q : {2u, 3u, 5u}) {
    std::uint64_t count = 0;
    for (const auto& m : all_matrices(q, 2))
      if (testing::det_mod(to_rows(m), q) != 0) ++count;
    EXPECT_EQ(gl_order(q, 2), BinNat(count)) << "q=" << q;
  }
}

TEST(BinNatTest, GlOrderMatchesBigIntegerProduct) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 9u}) {
    for (std::uint32_t n = 1; n <= 20; ++n) {
      cpp_int g = 1, qn = boost::multiprecision::pow(cpp_int(q), n);
      for (std::uint32_t i = 0; i < n; ++i)
        g *= qn - boost::multiprecision::pow(cpp_int(q), i);
      BinNat b = gl_order(q, n);
      EXPECT_EQ(b.to_decimal(), g.str()) << q << " " << n;
      std::uint32_t log2q = 0;
      while ((1u << log2q) < q) ++log2q;
      EXPECT_LT(b.max_bit(), n * n * log2q + n);
    }
  }
}

TEST(MatMulTest, Examples) {
  FiniteField z2 = FiniteField::prime(2);
  FieldMatrix m = FieldMatrix::from_rows({{0, 1}, {1, 1}});
  EXPECT_EQ(mat_mul(z2, m, m), FieldMatrix::from_rows({{1, 1}, {1, 0}}));
  std::mt19937_64 rng(2);
  FieldMatrix r = random_rect(z2, 3, 3, rng, "i", "i").as_square();
  EXPECT_EQ(mat_mul(z2, r, FieldMatrix::identity(r.rows())), r);
  EXPECT_THROW(mat_mul(z2, random_rect(z2, 2, 3, rng), random_rect(z2, 2, 2, rng)),
               Error);
}

TEST(MatMulTest, AgreesWithNaiveProduct) {
  std::mt19937_64 rng(3);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    FiniteField f = FiniteField::prime(p);
    for (int t = 0; t < 100; ++t) {
      std::size_t a = 1 + rng() % 5, b = 1 + rng() % 5, c = 1 + rng() % 5;
      FieldMatrix m = random_rect(f, a, b, rng, "i", "j");
      FieldMatrix n = random_rect(f, b, c, rng, "j", "k");
      EXPECT_EQ(mat_mul(f, m, n), naive_mul(p, m, n));
    }
  }
}

TEST(MatMulTest, IndependentOfListOrder) {
  std::mt19937_64 rng(4);
  for (std::uint32_t q : {2u, 3u, 4u, 9u}) {
    FiniteField f = finite_field(q);
    for (int t = 0; t < 50; ++t) {
      std::size_t a = 1 + rng() % 5, b = 1 + rng() % 5, c = 1 + rng() % 5;
      FieldMatrix m = random_rect(f, a, b, rng, "i", "j");
      FieldMatrix n = random_rect(f, b, c, rng, "j", "k");
      FieldMatrix m2 = m.relisted(shuffled(a, rng), shuffled(b, rng));
      FieldMatrix n2 = n.relisted(shuffled(b, rng), shuffled(c, rng));
      EXPECT_EQ(mat_mul(f, m, n), mat_mul(f, m2, n2));
    }
  }
}

TEST(MatMulTest, TableFieldAssociative) {
  FiniteField f = finite_field(8);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    FieldMatrix a = random_rect(f, 3, 4, rng, "i", "j");
    FieldMatrix b = random_rect(f, 4, 2, rng, "j", "k");
    FieldMatrix c = random_rect(f, 2, 3, rng, "k", "l");
    EXPECT_EQ(mat_mul(f, mat_mul(f, a, b), c), mat_mul(f, a, mat_mul(f, b, c)));
  }
}

TEST(MatPowTest, Examples) {
  FiniteField z2 = FiniteField::prime(2);
  FieldMatrix id = FieldMatrix::identity({"x", "y", "z"});
  EXPECT_EQ(mat_pow(z2, id, BinNat(37)), id);
  EXPECT_EQ(mat_pow(z2, FieldMatrix::from_rows({{0, 1}, {1, 0}}), BinNat(2)),
            FieldMatrix::identity({"0", "1"}));
  EXPECT_EQ(mat_pow(z2, FieldMatrix::from_rows({{1, 1}, {0, 1}}), BinNat(2)),
            FieldMatrix::identity({"0", "1"}));
  EXPECT_THROW(mat_pow(z2, id, BinNat(0)), Error);
}

TEST(MatPowTest, AgreesWithRepeatedProduct) {
  std::mt19937_64 rng(6);
  for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
    FiniteField f = finite_field(q);
    for (int t = 0; t < 20; ++t) {
      std::size_t n = 1 + rng() % 4;
      FieldMatrix m = random_rect(f, n, n, rng, "i", "i").as_square();
      FieldMatrix acc = m;
      for (std::uint64_t r = 1; r <= 8; ++r) {
        EXPECT_EQ(mat_pow(f, m, BinNat(r)), acc) << "r=" << r;
        acc = mat_mul(f, acc, m);
      }
    }
  }
}

TEST(NonsingularSquareTest, Examples) {
  FiniteField z2 = FiniteField::prime(2);
  EXPECT_TRUE(nonsingular_square(z2, FieldMatrix::identity({"a", "b", "c"})));
  EXPECT_FALSE(nonsingular_square(z2, FieldMatrix::from_rows({{1, 1}, {1, 1}})));
  EXPECT_TRUE(nonsingular_square(z2, FieldMatrix::from_rows({{0, 1}, {1, 1}})));
  EXPECT_TRUE(nonsingular_square(z2, FieldMatrix::square({})));
  EXPECT_THROW(nonsingular_square(z2, FieldMatrix({"a"}, {"a"})), Error);
}

TEST(NonsingularSquareTest, ExhaustiveAgreementWithRank) {
  struct Case {
    std::uint32_t q;
    std::size_t n;
    std::size_t expected_count;
  };
  for (Case c : {Case{2, 2, 16}, Case{2, 3, 512}, Case{3, 2, 81}}) {
    FiniteField f = FiniteField::prime(c.q);
    auto all = all_matrices(c.q, c.n);
    ASSERT_EQ(all.size(), c.expected_count);
    std::size_t nonsingular = 0;
    for (const auto& m : all) {
      std::size_t rank = rank_gaussian(f, m);
      bool ns = nonsingular_square(f, m);
      EXPECT_EQ(ns, rank == c.n);
      EXPECT_EQ(ns, testing::det_mod(to_rows(m), c.q) != 0);
      nonsingular += ns;
      if (rank < c.n) {
        for (std::uint64_t r = 1; r <= 8; ++r)
          EXPECT_LT(rank_gaussian(f, mat_pow(f, m, BinNat(r))), c.n);
      }
    }
    EXPECT_EQ(BinNat(nonsingular), gl_order(c.q, static_cast<std::uint32_t>(c.n)));
  }
}

TEST(NonsingularSquareTest, TableFieldsAgreeWithRank) {
  std::mt19937_64 rng(7);
  for (std::uint32_t q : {4u, 8u, 9u}) {
    FiniteField f = finite_field(q);
    for (int t = 0; t < 40; ++t) {
      std::size_t n = 1 + rng() % 4;
      FieldMatrix m = random_rect(f, n, n, rng, "i", "i").as_square();
      if (t % 4 == 0 && n > 1)  // force a repeated row
        for (std::size_t j = 0; j < n; ++j) m.at(1, j) = m.at(0, j);
      EXPECT_EQ(nonsingular_square(f, m), rank_gaussian(f, m) == n);
    }
  }
}

TEST(NonsingularSquareTest, IndependentOfListOrder) {
  std::mt19937_64 rng(8);
  for (std::uint32_t q : {2u, 3u, 5u}) {
    FiniteField f = FiniteField::prime(q);
    for (int t = 0; t < 40; ++t) {
      std::size_t n = 1 + rng() % 5;
      FieldMatrix m = random_rect(f, n, n, rng, "i", "i").as_square();
      auto p = shuffled(n, rng);
      EXPECT_EQ(nonsingular_square(f, m), nonsingular_square(f, m.relisted(p, p)));
      EXPECT_EQ(nonsingular_square(f, m), nonsingular_square(f, m.relisted(p, shuffled(n, rng))));
    }
  }
}

TEST(RankTest, Examples) {
  FiniteField z3 = FiniteField::prime(3);
  EXPECT_EQ(rank_gaussian(z3, FieldMatrix({"a", "b"}, {"x", "y", "z"})), 0u);
  EXPECT_EQ(rank_gaussian(z3, FieldMatrix::identity({"a", "b", "c", "d"})), 4u);
}

TEST(RankTest, IndependentOfOrders) {
  std::mt19937_64 rng(9);
  for (std::uint32_t q : {2u, 3u, 4u, 7u}) {
    FiniteField f = finite_field(q);
    for (int t = 0; t < 50; ++t) {
      std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
      FieldMatrix m = random_rect(f, r, c, rng);
      EXPECT_EQ(rank_gaussian(f, m),
                rank_gaussian(f, m, shuffled(r, rng), shuffled(c, rng)));
    }
  }
}

TEST(SolveTest, SolutionsCheckAndUnsolvableDetected) {
  std::mt19937_64 rng(10);
  for (std::uint32_t q : {2u, 3u, 5u, 4u}) {
    FiniteField f = finite_field(q);
    for (int t = 0; t < 100; ++t) {
      std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
      FieldMatrix a = random_rect(f, r, c, rng);
      if (t % 3 == 0)  // low rank: zero a column range
        for (std::size_t i = 0; i < r; ++i) a.at(i, 0) = 0;
      std::vector<Elem> v(r);
      for (auto& x : v) x = rng() % q;
      auto x = solve(f, a, v, shuffled(r, rng), shuffled(c, rng));
      // Solvable iff appending v does not raise the rank.
      FieldMatrix aug(a.rows(), [&] {
        auto cols = a.cols();
        cols.push_back("rhs");
        return cols;
      }());
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, c) = v[i];
      }
      EXPECT_EQ(x.has_value(), rank_gaussian(f, aug) == rank_gaussian(f, a));
      if (!x) continue;
      for (std::size_t i = 0; i < r; ++i) {
        Elem s = 0;
        for (std::size_t j = 0; j < c; ++j) s = f.add(s, f.mul(a.at(i, j), (*x)[j]));
        EXPECT_EQ(s, v[i]);
      }
    }
  }
}

TEST(SieveTest, Examples) {
  EXPECT_EQ(sieve_first_primes(5), (std::vector<std::uint32_t>{2, 3, 5, 7, 11}));
  EXPECT_EQ(sieve_first_primes(8).back(), 19u);
  EXPECT_EQ(sieve_first_primes(32).back(), 131u);
  EXPECT_EQ(sieve_first_primes(1), (std::vector<std::uint32_t>{2}));
  auto many = sieve_first_primes(1000);
  ASSERT_EQ(many.size(), 1000u);
  for (auto p : many) EXPECT_TRUE(FiniteField::is_prime(p));
  EXPECT_EQ(many.back(), 7919u);
}

IntMatrix random_int(std::size_t n, std::int64_t bound, std::mt19937_64& rng) {
  std::vector<std::vector<cpp_int>> v(n, std::vector<cpp_int>(n));
  for (auto& row : v)
    for (auto& x : row)
      x = static_cast<std::int64_t>(rng() % (2 * bound + 1)) - bound;
  return IntMatrix::from_rows(v);
}

std::vector<std::vector<cpp_int>> rows_of(const IntMatrix& m) {
  std::vector<std::vector<cpp_int>> v(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) v[i].push_back(m.at(i, j));
  return v;
}

TEST(IntMatrixTest, Examples) {
  EXPECT_FALSE(nonsingular_int(IntMatrix::from_rows({{2, 4}, {1, 2}})));
  EXPECT_TRUE(nonsingular_int(IntMatrix::from_rows({{2, 1}, {1, 1}})));
  EXPECT_EQ(det_prime_divisors(IntMatrix::from_rows({{2, 0}, {0, 3}})),
            (std::vector<std::uint32_t>{2, 3}));
  EXPECT_TRUE(det_prime_divisors(IntMatrix::from_rows({{1, 0}, {0, 1}})).empty());
  EXPECT_TRUE(nonsingular_int(IntMatrix(std::vector<std::string>{})));
}

TEST(IntMatrixTest, DigitsAndSigns) {
  IntMatrix m = IntMatrix::from_rows({{-5, 0}, {6, 1}});
  EXPECT_EQ(m.digit_bound(), 2u);
  EXPECT_TRUE(m.digit(0, 0, 0));
  EXPECT_FALSE(m.digit(0, 0, 1));
  EXPECT_TRUE(m.digit(0, 0, 2));
  EXPECT_FALSE(m.positive(0, 0));
  EXPECT_FALSE(m.positive(0, 1));  // zero entries are never positive
  EXPECT_TRUE(m.positive(1, 0));
  IntMatrix back = IntMatrix::from_digits(
      m.index(), {{0, 0, 0}, {0, 0, 2}, {1, 0, 1}, {1, 0, 2}, {1, 1, 0}},
      {{1, 0}, {1, 1}});
  EXPECT_EQ(rows_of(back), rows_of(m));
  EXPECT_EQ(crt_dimension(m), 3u);
  EXPECT_EQ(m.reduce(7).get("0", "0"), 2u);
}

TEST(IntMatrixTest, AgreesWithExactDeterminant) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 1 + rng() % 4;
    IntMatrix m = random_int(n, 256, rng);
    if (t % 5 == 0 && n > 1)  // a linearly dependent row
      for (std::size_t j = 0; j < n; ++j) m.at(n - 1, j) = 2 * m.at(0, j);
    cpp_int d = exact_det(rows_of(m));
    EXPECT_EQ(nonsingular_int(m), d != 0);
  }
}

TEST(IntMatrixTest, PrimeDivisorsAgreeWithFactoring) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 25; ++t) {
    std::size_t n = 1 + rng() % 4;
    IntMatrix m = random_int(n, t < 10 ? 8 : 256, rng);
    cpp_int d = exact_det(rows_of(m));
    if (d == 0) continue;
    auto listed = crt_primes(m);
    std::vector<std::uint32_t> expected;
    for (auto p : testing::prime_factors(d))
      if (p <= listed.back()) expected.push_back(static_cast<std::uint32_t>(p));
    EXPECT_EQ(det_prime_divisors(m), expected);
    // Not every listed prime can divide a non-zero determinant.
    EXPECT_LT(expected.size(), listed.size());
  }
}

TEST(IntMatrixTest, LargePrimeDivisorOutsideTheList) {
  // 1000003 is prime; n = 20 so the list ends at the 800th prime, 6133.
  IntMatrix m = IntMatrix::from_rows({{1000003}});
  EXPECT_EQ(crt_dimension(m), 20u);
  EXPECT_EQ(crt_primes(m).back(), 6133u);
  EXPECT_TRUE(nonsingular_int(m));
  EXPECT_TRUE(det_prime_divisors(m).empty());
}

TEST(IntMatrixTest, IndependentOfListOrder) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 2 + rng() % 2;
    IntMatrix m = random_int(n, 4, rng);
    if (t % 2 == 0)
      for (std::size_t j = 0; j < n; ++j) m.at(1, j) = -m.at(0, j);
    auto p = shuffled(n, rng);
    EXPECT_EQ(nonsingular_int(m), nonsingular_int(m.relisted(p)));
    EXPECT_EQ(det_prime_divisors(m), det_prime_divisors(m.relisted(p)));
  }
}

TEST(NonsingularRectTest, Examples) {
  FiniteField z3 = FiniteField::prime(3);
  FieldMatrix perm({"a", "b", "c"}, {"x", "y", "z"});
  perm.set("a", "y", 1);
  perm.set("b", "z", 2);
  perm.set("c", "x", 1);
  EXPECT_TRUE(nonsingular_rect(z3, perm));
  FieldMatrix m({"a", "b"}, {"x", "y"});
  m.set("a", "x", 1);
  m.set("a", "y", 2);
  m.set("b", "x", 2);
  m.set("b", "y", 1);
  EXPECT_FALSE(nonsingular_rect(z3, m));
  FieldMatrix mmt = mat_mul(z3, m, m.transposed());
  EXPECT_EQ(mmt.get("a", "a"), 2u);
  EXPECT_EQ(mmt.get("a", "b"), 1u);
  EXPECT_EQ(mmt.get("b", "b"), 2u);
  EXPECT_THROW(nonsingular_rect(z3, FieldMatrix({"a"}, {"x", "y"})), Error);
}

TEST(NonsingularRectTest, AgreesWithRankUnderAnyOrder) {
  std::mt19937_64 rng(14);
  for (std::uint32_t q : {2u, 3u, 5u}) {
    FiniteField f = FiniteField::prime(q);
    for (int t = 0; t < 67; ++t) {
      std::size_t n = 1 + rng() % 6;
      FieldMatrix m = random_rect(f, n, n, rng);
      bool expected =
          rank_gaussian(f, m, shuffled(n, rng), shuffled(n, rng)) == n;
      EXPECT_EQ(nonsingular_rect(f, m), expected);
      EXPECT_EQ(nonsingular_rect_block(f, m), expected);
      EXPECT_EQ(nonsingular_rect(f, m.relisted(shuffled(n, rng), shuffled(n, rng))),
                expected);
    }
  }
}

TEST(FrequencyTest, LimitConstants) {
  auto limit = [](double q) {
    double prod = 1.0;
    for (int j = 1; j <= 64; ++j) prod *= 1.0 - std::pow(q, -j);
    return prod;
  };
  EXPECT_NEAR(limit(2.0), 0.288788, 1e-6);
  EXPECT_NEAR(limit(3.0), 0.560126, 1e-6);
}

TEST(FrequencyTest, DeterministicAndWorkerIndependent) {
  FiniteField z3 = FiniteField::prime(3);
  double a = frequency_experiment(z3, 6, 300, 42, 1);
  double b = frequency_experiment(z3, 6, 300, 42, 3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(random_matrix(z3, 5, 9), random_matrix(z3, 5, 9));
}

TEST(FrequencyTest, ThreeByFifteenNearLimit) {
  double frac = frequency_experiment(FiniteField::prime(3), 15, 1000, 1);
  EXPECT_NEAR(frac, 0.560126, 0.05);
}

TEST(MatFileTest, RoundTrip) {
  std::mt19937_64 rng(15);
  FiniteField f = finite_field(9);
  FieldMatrix m = random_rect(f, 3, 3, rng, "i", "i").as_square();
  MatFile back = parse_mat(write_mat(9, m));
  EXPECT_EQ(*back.field_order, 9u);
  EXPECT_EQ(back.field_matrix, m);
  FieldMatrix r = random_rect(f, 2, 4, rng);
  EXPECT_EQ(parse_mat(write_mat(9, r)).field_matrix, r);
  IntMatrix im = IntMatrix::from_rows({{-300, 2}, {0, 123456789}});
  MatFile ib = parse_mat(write_mat(im));
  ASSERT_TRUE(ib.is_integer());
  EXPECT_EQ(rows_of(ib.int_matrix), rows_of(im));
}

TEST(MatFileTest, ParsesExample) {
  MatFile mf = parse_mat(
      "# a 2x2 over Z/2\nfield 2\nrows u v\nsquare\nu v 1\nv u 1\nv v 1\n");
  EXPECT_TRUE(mf.field_matrix.is_square());
  EXPECT_EQ(mf.field_matrix.get("u", "u"), 0u);
  EXPECT_TRUE(nonsingular_square(FiniteField::prime(2), mf.field_matrix));
}

TEST(MatFileTest, Errors) {
  EXPECT_THROW(parse_mat("rows a\nsquare\n"), ParseError);
  EXPECT_THROW(parse_mat("field 6\nrows a\nsquare\n"), ParseError);
  EXPECT_THROW(parse_mat("field 2\nrows a\nsquare\na a 2\n"), ParseError);
  EXPECT_THROW(parse_mat("field 2\nrows a\nsquare\na b 1\n"), ParseError);
  EXPECT_THROW(parse_mat("field 2\nrows a\n"), ParseError);
  EXPECT_THROW(parse_mat("ring Z\nrows a\ncols b\n"), ParseError);
  EXPECT_THROW(parse_mat("ring Z\nrows a\nsquare\na a x\n"), ParseError);
  EXPECT_THROW(parse_mat("field 2\nrows a a\nsquare\n"), ParseError);
}

}  // namespace
}  // namespace choiceless::linalg
