#include <random>

#include <gtest/gtest.h>

#include "knotsteiner/knotsteiner.hpp"

using namespace knotsteiner;

namespace {

using P = Polynomial<long long>;

// Cofactor expansion over polynomials; exponential but fine for n <= 6.
P laplace(const std::vector<std::vector<P>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return P::constant(1);
  if (n == 1) return m[0][0];
  P s;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<P>> sub;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<P> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      sub.push_back(row);
    }
    const P term = m[0][j] * laplace(sub);
    s = j % 2 == 0 ? s + term : s - term;
  }
  return s;
}

}  // namespace

TEST(Polynomial, Arithmetic) {
  const P a(std::vector<long long>{1, -1}), b(std::vector<long long>{0, 1});
  EXPECT_EQ((a * b).coeffs(), (std::vector<long long>{0, 1, -1}));
  EXPECT_EQ((a + b).coeffs(), (std::vector<long long>{1}));
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ((a * b).exact_div(b), a);
  EXPECT_THROW(P(std::vector<long long>{1, 0, 1}).exact_div(P(std::vector<long long>{1, 1})), Error);
}

TEST(Polynomial, BareissMatchesCofactorExpansion) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> u(-3, 3);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + rep % 6;
    std::vector<std::vector<P>> m(n, std::vector<P>(n));
    for (auto& row : m)
      for (auto& e : row) e = P(std::vector<long long>{u(rng), u(rng)});
    EXPECT_EQ(bareiss_determinant(m), laplace(m)) << "rep " << rep;
  }
}

TEST(Polynomial, BareissPivotsAroundZeros) {
  std::vector<std::vector<P>> m{{P(), P::constant(2)}, {P::constant(3), P::constant(5)}};
  EXPECT_EQ(bareiss_determinant(m), P::constant(-6));
  std::vector<std::vector<P>> singular{{P::constant(1), P::constant(2)}, {P::constant(2), P::constant(4)}};
  EXPECT_TRUE(bareiss_determinant(singular).is_zero());
}

TEST(Polynomial, OverflowIsDetectedAndBigIntegersAgree) {
  const long long big = 3037000500LL;  // just above sqrt(2^63)
  std::vector<std::vector<P>> m{{P::constant(big), P::constant(1)}, {P::constant(-1), P::constant(big)}};
  EXPECT_THROW(bareiss_determinant(m), Error);
  using Q = Polynomial<mpz_class>;
  std::vector<std::vector<Q>> mq{{Q::constant(big), Q::constant(1)}, {Q::constant(-1), Q::constant(big)}};
  const mpz_class b(static_cast<signed long>(big));
  const mpz_class expect = b * b + 1;
  EXPECT_EQ(bareiss_determinant(mq).coeffs().front(), expect);
}

TEST(Laurent, NormalizationAndPrinting) {
  const LaurentPolynomial p{{-1, 1, -1}, -1};
  const auto n = p.normalized();
  EXPECT_EQ(n.low, 0);
  EXPECT_EQ(n.coeffs, (std::vector<long long>{1, -1, 1}));
  EXPECT_EQ(n.to_string(), "t^2 - t + 1");
  EXPECT_EQ((LaurentPolynomial{{1, -3, 1}, 0}).to_string(), "t^2 - 3t + 1");
  EXPECT_TRUE(n.is_symmetric());
  EXPECT_FALSE((LaurentPolynomial{{1, 2}, 0}).is_symmetric());
  EXPECT_EQ(n.eval_unit(1), 1);
  EXPECT_EQ(n.eval_unit(-1), 3);
  EXPECT_DOUBLE_EQ(n.eval(2.0), 3.0);
  EXPECT_TRUE(LaurentPolynomial::one().is_one());
}
