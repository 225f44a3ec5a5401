#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace gdm {

// Cardinalities of the judgment (I-class) and reliability (II-class) term
// sets. Terms are indexed 0..l-1 and 0..z-1.
class LinguisticScale {
 public:
  LinguisticScale() = default;
  LinguisticScale(int l, int z);

  int l() const noexcept { return l_; }
  int z() const noexcept { return z_; }
  double judgment_max() const noexcept { return l_ - 1; }
  double reliability_max() const noexcept { return z_ - 1; }

  bool operator==(const LinguisticScale&) const = default;

 private:
  int l_ = 2;
  int z_ = 2;
};

// Closed interval of (possibly virtual, i.e. non-integer) term subscripts.
struct UncertainInterval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool degenerate() const noexcept { return lo == hi; }
  bool operator==(const UncertainInterval&) const = default;
};

UncertainInterval operator+(const UncertainInterval& x, const UncertainInterval& y);
UncertainInterval operator*(const UncertainInterval& x, const UncertainInterval& y);
// Throws DomainError when either endpoint of y is zero.
UncertainInterval operator/(const UncertainInterval& x, const UncertainInterval& y);
// Throws DomainError for negative lambda.
UncertainInterval scale(double lambda, const UncertainInterval& x);

// 2-dimensional uncertain linguistic variable: a judgment interval paired
// with the assessor's reliability interval for that judgment.
struct TwoDULV {
  UncertainInterval judgment;
  UncertainInterval reliability;

  bool operator==(const TwoDULV&) const = default;
};

inline TwoDULV make_dulv(double a, double b, double c, double d) {
  return TwoDULV{{a, b}, {c, d}};
}

struct Canonical {
  TwoDULV value;
  bool judgment_swapped = false;
  bool reliability_swapped = false;

  bool normalized() const noexcept { return judgment_swapped || reliability_swapped; }
};

// Reason a raw, user-entered value is not acceptable on `scale`, if any.
// Endpoint order is not checked here; canonicalize() repairs it.
std::optional<std::string> raw_value_problem(const TwoDULV& raw, const LinguisticScale& scale);

// Swaps reversed endpoints into lo <= hi order. Throws ValidationError for
// non-finite or out-of-range subscripts.
Canonical canonicalize(const TwoDULV& raw, const LinguisticScale& scale);

// Operational rules. Judgments combine arithmetically, reliabilities by
// componentwise min; unary rules leave the reliability untouched.
TwoDULV operator+(const TwoDULV& x, const TwoDULV& y);
TwoDULV operator*(const TwoDULV& x, const TwoDULV& y);
TwoDULV operator/(const TwoDULV& x, const TwoDULV& y);
TwoDULV scale(double lambda, const TwoDULV& x);
// Negative exponents are accepted (needed for negative aggregation
// parameters) as long as both judgment subscripts are positive.
TwoDULV power(const TwoDULV& x, double lambda);

// Normalized judgment midpoint times normalized reliability midpoint.
double expectation(const TwoDULV& x, const LinguisticScale& scale);

enum class Ordering { Less, Equal, Greater };

inline constexpr double kComparisonTolerance = 1e-9;

Ordering compare(const TwoDULV& x, const TwoDULV& y, const LinguisticScale& scale,
                 double tolerance = kComparisonTolerance);

double hamming_distance(const TwoDULV& x, const TwoDULV& y, const LinguisticScale& scale);

// Mean of the two normalized interval widths.
double uncertainty_degree(const TwoDULV& x, const LinguisticScale& scale);

// Renders `([s<a>,s<b>],[s<c>,s<d>])` with three decimals per subscript.
std::string format(const TwoDULV& x);
// Accepts the format() grammar with optional whitespace between tokens.
// Throws FormatError on malformed text.
TwoDULV parse_dulv(std::string_view text);

std::ostream& operator<<(std::ostream& os, const TwoDULV& x);
std::ostream& operator<<(std::ostream& os, Ordering o);

}  // namespace gdm
