#include <catch2/catch_amalgamated.hpp>

#include "mapgf/greekfield.hpp"
#include "mapgf/kernel.hpp"

using namespace mapgf;

namespace {
const Partition none{};
}

TEST_CASE("kernel: K=1 with p1 only gives Y = (1-uz)/((1+uz)(1+p1 z))") {
  auto kd = kernel_build(1);
  CHECK(kd.Nu == PZL::constant(Rational(1)));
  CHECK(kernel_antisymmetric(kd));
  CHECK(kernel_eval_identity(kd));
}

TEST_CASE("kernel: factorization, antisymmetry, evaluation for K = 2..5") {
  for (int K = 2; K <= 5; ++K) {
    auto kd = kernel_build(K);  // construction asserts the exact factorization
    CHECK(kd.Nu.max_u() == 2 * (K - 1));
    CHECK(kernel_antisymmetric(kd));
    CHECK(kernel_eval_identity(kd));
  }
}

TEST_CASE("kernel: p = 0 specialization gives Y = (1-uz)/(1+uz)") {
  auto kd = kernel_build(2);
  // num and den with all p = 0: (1+uz)^2 - uz*2*(1+uz) = 1 - u^2z^2 = (1-uz)(1+uz)
  PZL num0, den0;
  for (auto& [k, c] : kd.num.terms())
    if (k.mu.empty()) num0.add_to(k, c);
  for (auto& [k, c] : kd.den.terms())
    if (k.mu.empty()) den0.add_to(k, c);
  PZL omz = PZL::constant(Rational(1));
  omz.add_to({1, 1, none}, Rational(-1));
  PZL opz = PZL::constant(Rational(1));
  opz.add_to({1, 1, none}, Rational(1));
  CHECK(num0 == omz * opz);
  CHECK(den0 == opz * opz);
}

TEST_CASE("kernel: Newton polygon small/large zero counts") {
  for (int K = 2; K <= 5; ++K) {
    auto kd = kernel_build(K);
    auto [small, large] = newton_small_large(kd, 20240817u + K);
    CHECK(small == K - 1);
    CHECK(large == K - 1);
  }
}

TEST_CASE("kernel: taylor data dual route") {
  for (int K : {3, 4})
    for (int sign : {+1, -1}) {
      auto kd = kernel_build(K);
      for (int a = 0; a <= 6; ++a) CHECK(taylor_kernel_matches_kernel(kd, sign, a));
    }
}

TEST_CASE("mono order and division") {
  Mono a = Mono::of(var::eta, 2) * Mono::of(var::s, -3);
  Mono b = Mono::of(var::eta, 1);
  auto q = Mono::divide(a, b);
  REQUIRE(q);
  CHECK(q->exp(var::eta) == 1);
  CHECK(q->exp(var::s) == -3);
  CHECK_FALSE(Mono::divide(b, Mono::of(var::zeta, 1)));
  CHECK(Mono::divide(b, Mono::of(var::s, 5)));  // Laurent always divisible
}

TEST_CASE("multipoly arithmetic and division") {
  auto one = MultiPoly::constant(Rational(1));
  auto eta = MultiPoly::variable(var::eta);
  auto zeta = MultiPoly::variable(var::zeta);
  auto f = (one - eta) * (one + zeta);
  auto q = MultiPoly::exact_divide(f, one - eta);
  REQUIRE(q);
  CHECK((*q - (one + zeta)).is_zero());
  CHECK_FALSE(MultiPoly::exact_divide(f + one, one - eta));
  // derivative
  auto d = (eta * eta * zeta).derivative(var::eta);
  CHECK((d - (eta * zeta).scaled(Rational(2))).is_zero());
}

TEST_CASE("greekrat normalize and cancellation") {
  auto one = MultiPoly::constant(Rational(1));
  auto eta = MultiPoly::variable(var::eta);
  // (1-eta) eta / (1-eta)^2 -> eta/(1-eta)
  auto r = GreekRat::fraction((one - eta) * eta, {{one - eta, 2}});
  CHECK(r.equals(GreekRat(eta).over(one - eta)));
  REQUIRE(r.den().size() == 1);
  CHECK(r.den().begin()->second == 1);
  // non-monic factor gets normalized: x/(2-2eta) == (x/2)/(1-eta)
  auto r2 = GreekRat::fraction(eta, {{(one - eta).scaled(Rational(2)), 1}});
  auto r3 = GreekRat::fraction(eta.scaled(Rational(1, 2)), {{one - eta, 1}});
  CHECK(r2.equals(r3));
}

TEST_CASE("greekrat arithmetic") {
  auto one = MultiPoly::constant(Rational(1));
  auto eta = MultiPoly::variable(var::eta);
  auto zeta = MultiPoly::variable(var::zeta);
  auto a = GreekRat(one).over(one - eta);        // 1/(1-eta)
  auto b = GreekRat(one).over(one + zeta);       // 1/(1+zeta)
  auto sum = a + b;                              // (2 - eta + zeta)/((1-eta)(1+zeta))
  auto expect = GreekRat(one.scaled(Rational(2)) - eta + zeta).over(one - eta).over(one + zeta);
  CHECK(sum.equals(expect));
  auto prod = a * b;
  CHECK(prod.den().size() == 2);
  // derivative: d/d eta (1/(1-eta)) = 1/(1-eta)^2
  auto da = a.derivative(var::eta);
  CHECK(da.equals(GreekRat(one).over(one - eta, 2)));
}

TEST_CASE("greekrat eval against series") {
  const int N = 8;
  auto cd = solve_coords(N, 3);
  auto one = MultiPoly::constant(Rational(1));
  auto eta = MultiPoly::variable(var::eta);
  // eval(1/(1-eta)) = geometric series in the eta series
  auto r = GreekRat(one).over(one - eta);
  auto lhs = r.eval(cd);
  auto es = cd.greek(GreekAtom::Eta());
  auto rhs = (SeriesZUP::one(N, false) - es).reciprocal();
  CHECK(lhs == rhs);
  // eval(s) at p = 0: 1 - 2uz + 2u^2z^2 - ...
  auto sr = GreekRat::variable(var::s).eval(cd);
  auto sp0 = specialize_p(sr, {});
  for (int j = 1; j <= 4; ++j)
    CHECK(sp0.coeff(j, j, none) == Rational((j % 2) ? -2 : 2));
  // division by a non-unit series is an error
  CHECK_THROWS_AS(GreekRat(one).over(eta).eval(cd), std::domain_error);
}
