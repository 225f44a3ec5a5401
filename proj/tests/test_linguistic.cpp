#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gdm/error.hpp"
#include "gdm/linguistic.hpp"
#include "random_values.hpp"

using namespace gdm;
using gdm::testing::dyadic_value;
using gdm::testing::real_value;

namespace {

const LinguisticScale k75(7, 5);

}  // namespace

TEST_CASE("scale needs at least two terms per set") {
  CHECK_NOTHROW(LinguisticScale(2, 2));
  CHECK_THROWS_AS(LinguisticScale(1, 5), ValidationError);
  CHECK_THROWS_AS(LinguisticScale(7, 1), ValidationError);
  CHECK(k75.judgment_max() == 6);
  CHECK(k75.reliability_max() == 4);
}

TEST_CASE("interval arithmetic") {
  CHECK(UncertainInterval{1, 2} + UncertainInterval{3, 4} == UncertainInterval{4, 6});
  CHECK(scale(1.0, UncertainInterval{3, 5}) == UncertainInterval{3, 5});
  CHECK(UncertainInterval{4, 6} / UncertainInterval{2, 2} == UncertainInterval{2, 3});
  CHECK(UncertainInterval{1, 2} * UncertainInterval{3, 4} == UncertainInterval{3, 8});
  CHECK_THROWS_AS((UncertainInterval{1, 2} / UncertainInterval{0, 2}), DomainError);
  CHECK_THROWS_AS((scale(-0.5, UncertainInterval{1, 2})), DomainError);
}

TEST_CASE("canonicalize swaps reversed endpoints and rejects out-of-range subscripts") {
  const auto c = canonicalize(make_dulv(5, 3, 4, 3), k75);
  CHECK(c.value == make_dulv(3, 5, 3, 4));
  CHECK(c.judgment_swapped);
  CHECK(c.reliability_swapped);

  const auto same = canonicalize(make_dulv(2, 3, 3, 3), k75);
  CHECK(same.value == make_dulv(2, 3, 3, 3));
  CHECK_FALSE(same.normalized());

  CHECK_THROWS_AS(canonicalize(make_dulv(7, 7, 2, 2), k75), ValidationError);
  CHECK_THROWS_AS(canonicalize(make_dulv(1, 2, 0, 5), k75), ValidationError);
  CHECK_THROWS_AS(canonicalize(make_dulv(-1, 2, 0, 1), k75), ValidationError);
  CHECK_THROWS_AS(canonicalize(make_dulv(NAN, 2, 0, 1), k75), ValidationError);
  CHECK(raw_value_problem(make_dulv(9, 9, 1, 1), k75).has_value());
  CHECK_FALSE(raw_value_problem(make_dulv(6, 0, 4, 0), k75).has_value());
}

TEST_CASE("2DULV operational rules") {
  CHECK(make_dulv(2, 3, 3, 3) + make_dulv(5, 5, 3, 3) == make_dulv(7, 8, 3, 3));
  CHECK(make_dulv(4, 5, 4, 4) + make_dulv(3, 3, 1, 2) == make_dulv(7, 8, 1, 2));
  CHECK(make_dulv(2, 3, 2, 3) * make_dulv(1, 2, 3, 4) == make_dulv(2, 6, 2, 3));
  CHECK(make_dulv(3, 5, 1, 3) * make_dulv(1, 1, 4, 4) == make_dulv(3, 5, 1, 3));
  CHECK(make_dulv(4, 6, 3, 3) / make_dulv(2, 2, 2, 4) == make_dulv(2, 3, 2, 3));
  CHECK((make_dulv(4, 4, 2, 3) / make_dulv(4, 4, 2, 3)).judgment == UncertainInterval{1, 1});
  CHECK_THROWS_AS(make_dulv(1, 2, 1, 1) / make_dulv(0, 2, 1, 1), DomainError);

  const auto third = scale(1.0 / 3.0, make_dulv(5, 5, 2, 3));
  CHECK(third.judgment.lo == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(third.reliability == UncertainInterval{2, 3});
  CHECK(scale(0.0, make_dulv(2, 4, 1, 3)) == make_dulv(0, 0, 1, 3));
  CHECK_THROWS_AS(scale(-1.0, make_dulv(2, 4, 1, 3)), DomainError);

  CHECK(power(make_dulv(2, 3, 2, 2), 2.0) == make_dulv(4, 9, 2, 2));
  CHECK(power(make_dulv(2, 3, 1, 4), 1.0) == make_dulv(2, 3, 1, 4));
  CHECK(power(make_dulv(2, 3, 1, 4), 0.0) == make_dulv(1, 1, 1, 4));
  CHECK(power(make_dulv(2, 4, 1, 4), -1.0) == make_dulv(0.5, 0.25, 1, 4));
  CHECK_THROWS_AS(power(make_dulv(0, 3, 1, 4), -1.0), DomainError);
}

TEST_CASE("expectation") {
  CHECK(expectation(make_dulv(5, 5, 2, 3), k75) == doctest::Approx(0.520833333333).epsilon(1e-12));
  CHECK(std::round(expectation(make_dulv(5, 5, 2, 3), k75) * 1000) / 1000 == 0.521);
  CHECK(std::round(expectation(make_dulv(2, 3, 3, 3), k75) * 1000) / 1000 == 0.313);
  CHECK(expectation(make_dulv(6, 6, 4, 4), k75) == 1.0);
  CHECK(expectation(make_dulv(0, 0, 2, 2), k75) == 0.0);
}

TEST_CASE("compare orders by expectation") {
  CHECK(compare(make_dulv(5, 5, 2, 3), make_dulv(2, 3, 3, 3), k75) == Ordering::Greater);
  CHECK(compare(make_dulv(2, 3, 3, 3), make_dulv(5, 5, 2, 3), k75) == Ordering::Less);
  CHECK(compare(make_dulv(1, 4, 2, 3), make_dulv(1, 4, 2, 3), k75) == Ordering::Equal);
  // (2+4)/2 = (3+3)/2, so both expectations are 3/6 * 2/4.
  CHECK(expectation(make_dulv(2, 4, 2, 2), k75) == expectation(make_dulv(3, 3, 2, 2), k75));
  CHECK(compare(make_dulv(2, 4, 2, 2), make_dulv(3, 3, 2, 2), k75) == Ordering::Equal);
  CHECK(compare(make_dulv(3, 3, 2, 2), make_dulv(3, 3, 2, 2.0000001), k75) == Ordering::Less);
}

TEST_CASE("hamming distance") {
  // |5*2-14/3*2| + |5*3-14/3*3| twice, over 4 * 6 * 4.
  const double expected = (2 * (10.0 - 28.0 / 3.0) + 2 * (15.0 - 14.0)) / 96.0;
  const double d = hamming_distance(make_dulv(5, 5, 2, 3), make_dulv(14.0 / 3.0, 14.0 / 3.0, 2, 3), k75);
  CHECK(d == doctest::Approx(expected).epsilon(1e-14));
  CHECK(std::round(d * 1000) / 1000 == 0.035);
  CHECK(hamming_distance(make_dulv(2, 3, 1, 2), make_dulv(2, 3, 1, 2), k75) == 0.0);
  CHECK(hamming_distance(make_dulv(0, 0, 4, 4), make_dulv(6, 6, 4, 4), k75) == doctest::Approx(1.0));
}

TEST_CASE("uncertainty degree") {
  CHECK(uncertainty_degree(make_dulv(3, 4, 1, 2), k75) == doctest::Approx(0.5 * (1.0 / 6 + 1.0 / 4)));
  CHECK(std::round(uncertainty_degree(make_dulv(3, 4, 1, 2), k75) * 1000) / 1000 == 0.208);
  CHECK(uncertainty_degree(make_dulv(5, 5, 2, 3), k75) == 0.125);
  CHECK(uncertainty_degree(make_dulv(4, 4, 3, 3), k75) == 0.0);
  CHECK(uncertainty_degree(make_dulv(0, 6, 0, 4), k75) == 1.0);
}

TEST_CASE("format and parse") {
  CHECK(format(make_dulv(14.0 / 3.0, 5, 2, 3)) == "([s4.667,s5.000],[s2.000,s3.000])");
  CHECK(parse_dulv("([s4.667,s5.000],[s2.000,s3.000])") == make_dulv(4.667, 5, 2, 3));
  CHECK(parse_dulv("  ( [ s1 , s2 ] , [ s0.5 ,s3 ] )  ") == make_dulv(1, 2, 0.5, 3));
  CHECK_THROWS_AS(parse_dulv("([s1,s2],[s3])"), FormatError);
  CHECK_THROWS_AS(parse_dulv("([s1,s2],[s3,s4]) trailing"), FormatError);
  CHECK_THROWS_AS(parse_dulv("[s1,s2],[s3,s4]"), FormatError);
  CHECK_THROWS_AS(parse_dulv("([x1,s2],[s3,s4])"), FormatError);
  std::ostringstream os;
  os << make_dulv(1, 2, 3, 4);
  CHECK(os.str() == "([s1.000,s2.000],[s3.000,s4.000])");

  std::mt19937_64 rng(7);
  for (int k = 0; k < 1000; ++k) {
    const auto x = dyadic_value(rng, k75);
    CHECK(parse_dulv(format(x)) == x);
  }
}

TEST_CASE("algebraic laws hold exactly on dyadic inputs") {
  std::mt19937_64 rng(12);
  const double lambdas[] = {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
  std::uniform_int_distribution<int> pick(0, 6);
  for (int k = 0; k < 1000; ++k) {
    const auto x = dyadic_value(rng, k75);
    const auto y = dyadic_value(rng, k75);
    const auto z = dyadic_value(rng, k75);
    const double l1 = lambdas[pick(rng)];
    const double l2 = lambdas[pick(rng)];
    CHECK(x + y == y + x);
    CHECK(x * y == y * x);
    CHECK((x + y) + z == x + (y + z));
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == (x * y) + (x * z));
    CHECK(scale(l1, x + y) == scale(l1, x) + scale(l1, y));
    // Reliability of a sum is a min, so the scalar law is stated on the judgment.
    CHECK(scale(l1 + l2, x).judgment == (scale(l1, x) + scale(l2, x)).judgment);
    CHECK(scale(l1 + l2, x) == scale(l1, x) + scale(l2, x));
  }
}

TEST_CASE("distance axioms over random triples") {
  std::mt19937_64 rng(2024);
  const LinguisticScale scales[] = {k75, LinguisticScale(2, 2), LinguisticScale(9, 3), LinguisticScale(11, 11)};
  int checked = 0;
  for (const auto& s : scales) {
    for (int k = 0; k < 2500; ++k) {
      const auto x = real_value(rng, s);
      const auto y = real_value(rng, s);
      const auto z = real_value(rng, s);
      const double dxy = hamming_distance(x, y, s);
      const double dyz = hamming_distance(y, z, s);
      const double dxz = hamming_distance(x, z, s);
      REQUIRE(dxy >= 0.0);
      REQUIRE(dxy <= 1.0 + 1e-12);
      REQUIRE(hamming_distance(x, x, s) == 0.0);
      REQUIRE(dxy == hamming_distance(y, x, s));
      REQUIRE(dxy + dyz >= dxz - 1e-12);
      ++checked;
    }
  }
  CHECK(checked == 10000);
}

TEST_CASE("expectation and uncertainty bounds and monotonicity") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 2000; ++k) {
    const auto x = real_value(rng, k75);
    const double e = expectation(x, k75);
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
    const double b = uncertainty_degree(x, k75);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);

    const double bump = gdm::testing::uniform(rng, 0.0, 0.5);
    auto up = x;
    up.judgment.hi = std::min(6.0, up.judgment.hi + bump);
    CHECK(expectation(up, k75) >= e);
    CHECK(uncertainty_degree(up, k75) >= b);
    up = x;
    up.reliability.hi = std::min(4.0, up.reliability.hi + bump);
    CHECK(expectation(up, k75) >= e);
    up = x;
    up.judgment.lo = std::min(up.judgment.hi, up.judgment.lo + bump);
    CHECK(expectation(up, k75) >= e);
    CHECK(uncertainty_degree(up, k75) <= b);
    up = x;
    up.reliability.lo = std::min(up.reliability.hi, up.reliability.lo + bump);
    CHECK(expectation(up, k75) >= e);

    const bool degenerate = x.judgment.degenerate() && x.reliability.degenerate();
    CHECK((b == 0.0) == degenerate);
  }
  CHECK(uncertainty_degree(make_dulv(2, 2, 1, 1), k75) == 0.0);
}

TEST_CASE("compare is a total preorder consistent with expectation") {
  std::mt19937_64 rng(5);
  std::vector<TwoDULV> xs;
  for (int k = 0; k < 60; ++k) xs.push_back(gdm::testing::integer_value(rng, k75));
  for (const auto& x : xs) {
    CHECK(compare(x, x, k75) == Ordering::Equal);
    for (const auto& y : xs) {
      const auto xy = compare(x, y, k75);
      const auto yx = compare(y, x, k75);
      CHECK((xy == Ordering::Less) == (yx == Ordering::Greater));
      CHECK((xy == Ordering::Equal) == (yx == Ordering::Equal));
      const double gap = expectation(x, k75) - expectation(y, k75);
      if (gap > kComparisonTolerance) CHECK(xy == Ordering::Greater);
      if (gap < -kComparisonTolerance) CHECK(xy == Ordering::Less);
      for (const auto& z : xs) {
        if (xy != Ordering::Greater && compare(y, z, k75) != Ordering::Greater &&
            std::abs(expectation(x, k75) - expectation(z, k75)) > 2 * kComparisonTolerance) {
          CHECK(compare(x, z, k75) == Ordering::Less);
        }
      }
    }
  }
}
