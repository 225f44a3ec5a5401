#include "gdm/linguistic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "gdm/error.hpp"

namespace gdm {

LinguisticScale::LinguisticScale(int l, int z) : l_(l), z_(z) {
  if (l < 2 || z < 2) {
    throw ValidationError("invalid_scale", "scale needs l >= 2 and z >= 2, got l=" +
                                               std::to_string(l) + ", z=" + std::to_string(z));
  }
}

UncertainInterval operator+(const UncertainInterval& x, const UncertainInterval& y) {
  return {x.lo + y.lo, x.hi + y.hi};
}

UncertainInterval operator*(const UncertainInterval& x, const UncertainInterval& y) {
  return {x.lo * y.lo, x.hi * y.hi};
}

UncertainInterval operator/(const UncertainInterval& x, const UncertainInterval& y) {
  if (y.lo == 0.0 || y.hi == 0.0) throw DomainError("division by an interval touching zero");
  return {x.lo / y.hi, x.hi / y.lo};
}

UncertainInterval scale(double lambda, const UncertainInterval& x) {
  if (!(lambda >= 0.0)) throw DomainError("scale factor must be nonnegative");
  return {lambda * x.lo, lambda * x.hi};
}

namespace {

UncertainInterval min_combine(const UncertainInterval& x, const UncertainInterval& y) {
  return {std::min(x.lo, y.lo), std::min(x.hi, y.hi)};
}

std::optional<std::string> endpoint_problem(const char* name, double v, double max) {
  if (!std::isfinite(v)) return std::string(name) + " subscript is not finite";
  if (v < 0.0 || v > max) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s subscript %g outside [0, %g]", name, v, max);
    return std::string(buf);
  }
  return std::nullopt;
}

UncertainInterval ordered(const UncertainInterval& x, bool& swapped) {
  swapped = x.lo > x.hi;
  return swapped ? UncertainInterval{x.hi, x.lo} : x;
}

}  // namespace

std::optional<std::string> raw_value_problem(const TwoDULV& raw, const LinguisticScale& scale) {
  const double jmax = scale.judgment_max();
  const double rmax = scale.reliability_max();
  for (auto problem : {endpoint_problem("judgment", raw.judgment.lo, jmax),
                       endpoint_problem("judgment", raw.judgment.hi, jmax),
                       endpoint_problem("reliability", raw.reliability.lo, rmax),
                       endpoint_problem("reliability", raw.reliability.hi, rmax)}) {
    if (problem) return problem;
  }
  return std::nullopt;
}

Canonical canonicalize(const TwoDULV& raw, const LinguisticScale& scale) {
  if (auto problem = raw_value_problem(raw, scale)) {
    throw ValidationError("out_of_range", *problem + " in " + format(raw));
  }
  Canonical out;
  out.value.judgment = ordered(raw.judgment, out.judgment_swapped);
  out.value.reliability = ordered(raw.reliability, out.reliability_swapped);
  return out;
}

TwoDULV operator+(const TwoDULV& x, const TwoDULV& y) {
  return {x.judgment + y.judgment, min_combine(x.reliability, y.reliability)};
}

TwoDULV operator*(const TwoDULV& x, const TwoDULV& y) {
  return {x.judgment * y.judgment, min_combine(x.reliability, y.reliability)};
}

TwoDULV operator/(const TwoDULV& x, const TwoDULV& y) {
  return {x.judgment / y.judgment, min_combine(x.reliability, y.reliability)};
}

TwoDULV scale(double lambda, const TwoDULV& x) {
  return {scale(lambda, x.judgment), x.reliability};
}

TwoDULV power(const TwoDULV& x, double lambda) {
  if (!std::isfinite(lambda)) throw DomainError("exponent must be finite");
  if (lambda < 0.0 && (x.judgment.lo <= 0.0 || x.judgment.hi <= 0.0)) {
    throw DomainError("negative exponent applied to a zero judgment subscript");
  }
  if (lambda == 0.0) return {{1.0, 1.0}, x.reliability};
  return {{std::pow(x.judgment.lo, lambda), std::pow(x.judgment.hi, lambda)}, x.reliability};
}

double expectation(const TwoDULV& x, const LinguisticScale& scale) {
  const double judgment = (x.judgment.lo + x.judgment.hi) / (2.0 * scale.judgment_max());
  const double reliability = (x.reliability.lo + x.reliability.hi) / (2.0 * scale.reliability_max());
  return judgment * reliability;
}

Ordering compare(const TwoDULV& x, const TwoDULV& y, const LinguisticScale& scale,
                 double tolerance) {
  const double ex = expectation(x, scale);
  const double ey = expectation(y, scale);
  if (std::abs(ex - ey) <= tolerance) return Ordering::Equal;
  return ex < ey ? Ordering::Less : Ordering::Greater;
}

double hamming_distance(const TwoDULV& x, const TwoDULV& y, const LinguisticScale& scale) {
  const double zr = scale.reliability_max();
  auto term = [zr](double j1, double r1, double j2, double r2) {
    return std::abs(j1 * r1 / zr - j2 * r2 / zr);
  };
  const double sum = term(x.judgment.lo, x.reliability.lo, y.judgment.lo, y.reliability.lo) +
                     term(x.judgment.lo, x.reliability.hi, y.judgment.lo, y.reliability.hi) +
                     term(x.judgment.hi, x.reliability.lo, y.judgment.hi, y.reliability.lo) +
                     term(x.judgment.hi, x.reliability.hi, y.judgment.hi, y.reliability.hi);
  return sum / (4.0 * scale.judgment_max());
}

double uncertainty_degree(const TwoDULV& x, const LinguisticScale& scale) {
  return 0.5 * (x.judgment.width() / scale.judgment_max() +
                x.reliability.width() / scale.reliability_max());
}

std::string format(const TwoDULV& x) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "([s%.3f,s%.3f],[s%.3f,s%.3f])", x.judgment.lo, x.judgment.hi,
                x.reliability.lo, x.reliability.hi);
  return buf;
}

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  double subscript() {
    expect('s');
    skip_space();
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{}) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  void finish() {
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw FormatError("cannot parse 2DULV '" + std::string(text_) + "' at offset " +
                      std::to_string(pos_) + ": " + why);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

TwoDULV parse_dulv(std::string_view text) {
  Cursor in(text);
  TwoDULV out;
  in.expect('(');
  in.expect('[');
  out.judgment.lo = in.subscript();
  in.expect(',');
  out.judgment.hi = in.subscript();
  in.expect(']');
  in.expect(',');
  in.expect('[');
  out.reliability.lo = in.subscript();
  in.expect(',');
  out.reliability.hi = in.subscript();
  in.expect(']');
  in.expect(')');
  in.finish();
  return out;
}

std::ostream& operator<<(std::ostream& os, const TwoDULV& x) { return os << format(x); }

std::ostream& operator<<(std::ostream& os, Ordering o) {
  switch (o) {
    case Ordering::Less: return os << "Less";
    case Ordering::Equal: return os << "Equal";
    case Ordering::Greater: return os << "Greater";
  }
  return os;
}

}  // namespace gdm
