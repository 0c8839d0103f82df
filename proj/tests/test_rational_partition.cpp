#include <catch2/catch_amalgamated.hpp>

#include "mapgf/partition.hpp"
#include "mapgf/rational.hpp"

using namespace mapgf;

TEST_CASE("rational canonical form") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4).to_string() == "-1/2");
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0).to_string() == "0");
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("rational arithmetic and parsing") {
  Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK(Rational::from_string("-3/9") == Rational(-1, 3));
  CHECK(Rational::from_string("42") == Rational(42));
  CHECK(Rational::from_string(Rational(-7, 11).to_string()) == Rational(-7, 11));
  CHECK(Rational::pow(Rational(2, 3), -2) == Rational(9, 4));
  CHECK_THROWS(a / Rational(0));
}

TEST_CASE("binomials and factorials") {
  CHECK(Rational::binomial(9, 5) == Rational(126));
  CHECK(Rational::binomial(3, 2) == Rational(3));
  CHECK(Rational::binomial(5, 7) == Rational(0));
  CHECK(Rational::factorial(6) == Rational(720));
}

TEST_CASE("partition basics") {
  Partition p(std::vector<int>{1, 3, 3});
  CHECK(p.parts() == std::vector<int>{3, 3, 1});
  CHECK(p.weight() == 7);
  CHECK(p.length() == 3);
  CHECK(p.multiplicity(3) == 2);
  CHECK(p.multiplicity(2) == 0);
  CHECK(p.with_part(2).parts() == std::vector<int>{3, 3, 2, 1});
  CHECK(p.without_part(3).parts() == std::vector<int>{3, 1});
  CHECK_THROWS(p.without_part(5));
  CHECK((Partition::single(2) + Partition::single(4)).parts() == std::vector<int>{4, 2});
  CHECK(p.to_string() == "[3,3,1]");
}

TEST_CASE("partition enumeration") {
  CHECK(partitions_of(0).size() == 1);
  CHECK(partitions_of(5).size() == 7);
  CHECK(partitions_of(7).size() == 15);
  CHECK(partitions_up_to(3).size() == 1 + 1 + 2 + 3);
}
