#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "mapgf/series.hpp"

using namespace mapgf;

namespace {

SeriesTXP random_sparse(std::mt19937& rng, int trunc) {
  std::uniform_int_distribution<int> nd(0, trunc), kd(0, 3), pd(0, 3), cd(-6, 6);
  SeriesTXP s(trunc, false);
  for (int i = 0; i < 6; ++i) {
    Partition mu;
    const int len = pd(rng) % 3;
    for (int j = 0; j < len; ++j) mu = mu.with_part(1 + pd(rng));
    int c = cd(rng);
    if (c == 0) c = 1;
    s.add_to({nd(rng), kd(rng), mu}, Rational(c, 1 + pd(rng)));
  }
  return s;
}

}  // namespace

TEST_CASE("series arithmetic examples") {
  const int N = 8;
  auto t = SeriesTXP::base_var(N);
  auto one = SeriesTXP::one(N, false);
  CHECK((one + t) * (one - t) == one - t * t);

  auto xp1t = SeriesTXP::monomial(N, 1, 1, Partition::single(1), Rational(1));
  auto sq = xp1t * xp1t;
  CHECK(sq.coeff(2, 2, Partition(std::vector<int>{1, 1})) == Rational(1));
  CHECK(sq.size() == 1);

  CHECK(random_sparse(*new std::mt19937(7), N).scaled(Rational(0)).is_zero());
}

TEST_CASE("series ring laws (randomized)") {
  std::mt19937 rng(20240817);
  for (int it = 0; it < 25; ++it) {
    auto a = random_sparse(rng, 6), b = random_sparse(rng, 6), c = random_sparse(rng, 6);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
  }
}

TEST_CASE("grading propagation") {
  const int N = 6;
  auto a = SeriesTXP::monomial(N, 3, 1, Partition::single(2), Rational(2), true);
  auto b = SeriesTXP::monomial(N, 2, 2, Partition{}, Rational(5), true);
  auto p = a * b;
  CHECK(p.graded());
  p.assert_graded();
  auto c = SeriesTXP::monomial(N, 1, 1, Partition::single(2), Rational(1), false);
  CHECK_FALSE((a * c).graded());
}

TEST_CASE("coeff beyond truncation is an error") {
  auto t = SeriesTXP::base_var(4);
  CHECK(t.coeff(1, 0, Partition{}) == Rational(1));
  CHECK(t.coeff(3, 0, Partition{}) == Rational(0));
  CHECK_THROWS_AS(t.coeff(5, 0, Partition{}), std::out_of_range);
}

TEST_CASE("compose: t := z/(1+p1 z) geometric expansion") {
  const int N = 6;
  auto f = SeriesTXP::base_var(N);
  SeriesZUP denom = SeriesZUP::one(N, false);
  denom.add_to({1, 0, Partition::single(1)}, Rational(1));
  auto sub = SeriesZUP::base_var(N) * denom.reciprocal();
  auto r = compose(f, sub);
  for (int j = 1; j <= N; ++j) {
    Partition mu;
    for (int i = 0; i < j - 1; ++i) mu = mu.with_part(1);
    CHECK(r.coeff(j, 0, mu) == ((j % 2) ? Rational(1) : Rational(-1)));
  }
}

TEST_CASE("compose: x := u/(1+zu)^2") {
  const int N = 6;
  SeriesZUP xsub(N, false);
  for (int j = 0; j <= N; ++j)
    xsub.set({j, j + 1, Partition{}}, Rational((j % 2) ? -(j + 1) : (j + 1)));

  // at z-order 0 the substitution forces u = x
  auto at0 = compose(SeriesTXP::cat_var(0), SeriesZUP::zero(0), xsub.truncated(0));
  CHECK(at0.coeff(0, 1, Partition{}) == Rational(1));
  CHECK(at0.size() == 1);

  // x^2 -> u^2 (1+zu)^{-4} = u^2 - 4u^3 z + 10 u^4 z^2 - ...
  auto f = SeriesTXP::cat_var(N) * SeriesTXP::cat_var(N);
  auto r = compose(f, SeriesZUP::zero(N), xsub);
  CHECK(r.coeff(0, 2, Partition{}) == Rational(1));
  CHECK(r.coeff(1, 3, Partition{}) == Rational(-4));
  CHECK(r.coeff(2, 4, Partition{}) == Rational(10));
  CHECK(r.coeff(3, 5, Partition{}) == Rational(-20));
}

TEST_CASE("compose rejects nonzero constant term") {
  auto f = SeriesTXP::base_var(4);
  auto bad = SeriesZUP::one(4, false);
  CHECK_THROWS_AS(compose(f, bad), std::domain_error);
}

TEST_CASE("reciprocal") {
  const int N = 8;
  auto one = SeriesZUP::one(N, false);
  SeriesZUP f = one;
  f.add_to({1, 1, Partition{}}, Rational(1));  // 1 + uz
  auto g = f.reciprocal();
  CHECK(f * g == one.truncated(N));
  CHECK_THROWS_AS(SeriesZUP::base_var(4).reciprocal(), std::domain_error);
}

TEST_CASE("specialize p") {
  const int N = 5;
  auto s = SeriesTXP::monomial(N, 3, 1, Partition(std::vector<int>{2, 2}), Rational(7));
  auto r = specialize_p(s, {{2, Rational(1, 2)}});
  CHECK(r.coeff(3, 1, Partition{}) == Rational(7, 4));
  CHECK(specialize_p(s, {{3, Rational(1)}}).is_zero());
}
