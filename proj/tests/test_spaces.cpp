#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "support.hpp"

using namespace actionalg;
using testing::free2;
using testing::z2_z3;
using testing::z3_z;

namespace {

std::set<std::string> as_naive_set(const Group& G, const std::vector<Point>& pts) {
  std::set<std::string> out;
  for (const Point& p : pts) out.insert(testing::to_naive(G, p));
  return out;
}

}  // namespace

TEST_CASE("apply is left multiplication") {
  const CayleySpace X(free2());
  const Group& F = X.group();
  CHECK(X.apply(F.identity(), F.parse("a b")) == F.parse("a b"));
  CHECK(X.apply(F.parse("a"), F.identity()) == F.parse("a"));

  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const GroupElement g = testing::random_element(F, rng);
    const GroupElement h = testing::random_element(F, rng);
    const Point x = testing::random_element(F, rng);
    CHECK(X.apply(F.multiply(g, h), x) == X.apply(g, X.apply(h, x)));
  }
}

TEST_CASE("metric axioms and isometry") {
  std::mt19937_64 rng(22);
  for (const Group& G : {free2(), z2_z3(), z3_z()}) {
    const CayleySpace X(G);
    for (int i = 0; i < 500; ++i) {
      const Point x = testing::random_element(G, rng);
      const Point y = testing::random_element(G, rng);
      const Point z = testing::random_element(G, rng);
      const GroupElement g = testing::random_element(G, rng);
      CHECK(X.distance(x, y) == X.distance(y, x));
      CHECK(X.distance(x, z) <= X.distance(x, y) + X.distance(y, z));
      CHECK((X.distance(x, y) == 0) == (x == y));
      CHECK(X.distance(X.apply(g, x), X.apply(g, y)) == X.distance(x, y));
    }
  }
}

TEST_CASE("ball sizes") {
  const CayleySpace F(free2());
  CHECK(F.enumerate_ball(F.base_point(), 0) == std::vector<Point>{F.base_point()});
  CHECK(F.enumerate_ball(F.base_point(), 1).size() == 5);
  CHECK(F.enumerate_ball(F.base_point(), 2).size() == 17);
  CHECK(F.enumerate_ball(F.base_point(), 4).size() == 161);

  // 1, 4, 8, 14, 22, 34, 50 from the brute-force oracle
  const CayleySpace Z(z2_z3());
  const std::size_t z_sizes[] = {1, 4, 8, 14, 22, 34, 50};
  for (int r = 0; r <= 6; ++r) {
    CHECK(Z.enumerate_ball(Z.base_point(), r).size() == z_sizes[r]);
  }
}

TEST_CASE("balls match the brute-force oracle and grow monotonically") {
  for (const Group& G : {free2(), z2_z3(), z3_z()}) {
    const CayleySpace X(G);
    const oracle::NaiveGroup N = testing::naive_of(G);
    std::set<std::string> previous;
    for (int r = 0; r <= 6; ++r) {
      const auto ball = X.enumerate_ball(X.base_point(), r);
      const auto as_set = as_naive_set(G, ball);
      CHECK(as_set.size() == ball.size());  // no duplicates
      CHECK(as_set == N.ball(r));
      CHECK(std::includes(as_set.begin(), as_set.end(), previous.begin(), previous.end()));
      previous = as_set;
    }
  }
}

TEST_CASE("ball enumeration order is deterministic and off-centre balls are translates") {
  const CayleySpace X(free2());
  const Group& F = X.group();
  const auto ball = X.enumerate_ball(X.base_point(), 1);
  const std::vector<Point> expected{F.identity(), F.parse("a"), F.parse("a^-1"), F.parse("b"),
                                    F.parse("b^-1")};
  CHECK(ball == expected);
  CHECK(X.enumerate_ball(X.base_point(), 3) == X.enumerate_ball(X.base_point(), 3));

  const Point c = F.parse("a b");
  for (const Point& y : X.enumerate_ball(c, 2)) CHECK(X.distance(c, y) <= 2);
  CHECK(X.enumerate_ball(c, 2).size() == 17);
}

TEST_CASE("ball cap raises a budget error") {
  const CayleySpace X(free2(), 100);
  CHECK_NOTHROW(X.enumerate_ball(X.base_point(), 3));  // 53 points
  CHECK_THROWS_AS(X.enumerate_ball(X.base_point(), 4), BudgetExceeded);
}

TEST_CASE("orbit decomposition examples") {
  const CayleySpace X(free2());
  const Group& F = X.group();
  const auto ball = X.enumerate_ball(X.base_point(), 2);

  SUBCASE("whole group: a single orbit") {
    const std::vector<GroupElement> gens{F.parse("a"), F.parse("b")};
    const auto d = orbit_decompose(X, gens, ball);
    CHECK(d.representatives == std::vector<Point>{F.identity()});
    for (const Point& p : ball) CHECK(d.orbit_of(p) == 0);
  }
  SUBCASE("trivial subgroup: every point alone") {
    const auto d = orbit_decompose(X, std::vector<GroupElement>{}, ball);
    CHECK(d.representatives == ball);
  }
  SUBCASE("<a>: one representative per coset meeting the ball") {
    const std::vector<GroupElement> gens{F.parse("a")};
    const auto d = orbit_decompose(X, gens, ball);
    // cosets <a>x meeting the ball, first point of each in enumeration order
    const std::vector<Point> expected{
        F.parse("e"),      F.parse("b"),        F.parse("b^-1"),      F.parse("b a"),
        F.parse("b a^-1"), F.parse("b^2"),      F.parse("b^-1 a"),    F.parse("b^-1 a^-1"),
        F.parse("b^-2")};
    CHECK(d.representatives == expected);
    // oracle: two ball points share a label iff they lie in the same coset <a>x
    for (const Point& p : ball) {
      for (const Point& q : ball) {
        const GroupElement r = F.multiply(q, F.invert(p));  // q = r p
        const bool same_coset = r.is_identity() || (r.syllable_count() == 1 &&
                                                     r.syllables()[0].factor == 0);
        // within a radius-2 ball every coset meets it in a path through a-moves
        CHECK((d.orbit_of(p) == d.orbit_of(q)) == same_coset);
      }
    }
  }
}

TEST_CASE("orbit labels are invariant under the generators inside the ball") {
  const CayleySpace X(z3_z());
  const Group& G = X.group();
  const auto ball = X.enumerate_ball(X.base_point(), 4);
  const std::vector<GroupElement> gens{G.parse("g h")};
  const auto d = orbit_decompose(X, gens, ball);
  CHECK(d.membership.size() == ball.size());
  std::set<Point> in_ball(ball.begin(), ball.end());
  for (const Point& y : ball) {
    for (const GroupElement& s : {gens[0], G.invert(gens[0])}) {
      const Point z = X.apply(s, y);
      if (in_ball.contains(z)) CHECK(d.orbit_of(z) == d.orbit_of(y));
    }
  }
  // representatives are pairwise distinct labels
  for (std::size_t i = 0; i < d.representatives.size(); ++i) {
    CHECK(d.orbit_of(d.representatives[i]) == i);
  }
}

TEST_CASE("faithfulness check") {
  SUBCASE("vacuous at L = 0") {
    const CayleySpace X(free2());
    const auto r = faithfulness_check(X, 0, 1);
    CHECK(r.pass());
    CHECK(r.witnesses.empty());
  }
  SUBCASE("every short word moves the base point") {
    for (const Group& G : {z2_z3(), free2(), z3_z()}) {
      const CayleySpace X(G);
      const auto r = faithfulness_check(X, 6, 1);
      CHECK(r.pass());
      // census: every nontrivial word of length <= 6
      CHECK(r.witnesses.size() == X.enumerate_ball(X.base_point(), 6).size() - 1);
      for (const auto& [w, x] : r.witnesses) {
        CHECK(x == X.base_point());
        CHECK(G.multiply(w, x) != x);  // re-applied independently of the report
      }
    }
  }
}
