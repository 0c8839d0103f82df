#include <catch2/catch_amalgamated.hpp>

#include "mapgf/census.hpp"

using namespace mapgf;

TEST_CASE("genus_of") {
  CHECK(genus_of({0}, {0}) == 0);                    // n=1, (id,id)
  CHECK(genus_of({1, 2, 0}, {1, 2, 0}) == 1);        // n=3, equal 3-cycles
  CHECK(genus_of({1, 0}, {1, 0}) == 0);              // n=2, product id
  CHECK_THROWS(genus_of({0, 1}, {0}));
}

TEST_CASE("census n=1..3") {
  auto c1 = census_run(1);
  CHECK(c1.labelled.size() == 1);
  CHECK(c1.labelled.at({0, Partition::single(1)}) == 1);
  CHECK(c1.rooted.at({0, 1, Partition{}}) == 1);

  auto c2 = census_run(2);
  CHECK(c2.labelled.at({0, Partition::single(2)}) == 2);
  CHECK(c2.labelled.at({0, Partition(std::vector<int>{1, 1})}) == 1);
  CHECK(c2.transitive_pairs == 3);
  CHECK(c2.rooted.at({0, 2, Partition{}}) == 2);
  CHECK(c2.rooted.at({0, 1, Partition::single(1)}) == 1);

  auto c3 = census_run(3);
  CHECK(c3.labelled.at({1, Partition::single(3)}) == 2);
  CHECK(c3.rooted.at({1, 3, Partition{}}) == 1);
}

TEST_CASE("census n=5: genus-2 five-cycle count") {
  auto c5 = census_run(5);
  CHECK(c5.labelled.at({2, Partition::single(5)}) == 192);
}

TEST_CASE("census guard") {
  CHECK_THROWS_AS(census_run(0), std::invalid_argument);
  CHECK_THROWS_AS(census_run(8), std::invalid_argument);  // needs override
}

TEST_CASE("marked totals identities") {
  for (int n = 1; n <= 5; ++n) {
    auto c = census_run(n);
    for (auto& [key, mk] : c.marked) {
      const auto l = c.labelled.at(key);
      CHECK(mk.edge == n * l);
      CHECK(mk.face == key.mu.length() * l);
      // disymmetry: (2-2g) l = vertex + face - edge, identically 0 on the torus
      CHECK((2 - 2 * key.g) * l == mk.vertex + mk.face - mk.edge);
    }
  }
}

TEST_CASE("census determinism across thread counts") {
  auto a = census_run(5, false, 1);
  auto b = census_run(5, false, 4);
  CHECK(a.labelled == b.labelled);
  CHECK(a.rooted == b.rooted);
  CHECK(a.marked == b.marked);
}
