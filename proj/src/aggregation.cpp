#include "gdm/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gdm/error.hpp"

namespace gdm {

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ValidationError("invalid_weights", "weight vector is empty");
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ValidationError("invalid_weights", "weights must be finite and nonnegative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw ValidationError("invalid_weights", "weights sum to " + std::to_string(sum) + ", not 1");
  }
}

WeightVector WeightVector::uniform(std::size_t n) {
  if (n == 0) throw ValidationError("invalid_weights", "weight vector is empty");
  return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

AlphaParam::AlphaParam(double alpha) : alpha_(alpha) {
  if (alpha == 0.0 || !std::isfinite(alpha)) {
    throw ValidationError("invalid_alpha", "alpha must be finite and nonzero");
  }
}

namespace {

double direct_power_mean(std::span<const double> x, const WeightVector& w, double alpha) {
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) sum += w[k] * std::pow(x[k], alpha);
  return std::pow(sum, 1.0 / alpha);
}

// exp((1/alpha) * log sum_k w_k exp(alpha * log x_k)) with the largest
// exponent factored out.
double log_power_mean(std::span<const double> x, const WeightVector& w, double alpha) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double peak = kNegInf;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (w[k] > 0.0) peak = std::max(peak, alpha * std::log(x[k]));
  }
  if (peak == kNegInf) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (w[k] > 0.0) sum += w[k] * std::exp(alpha * std::log(x[k]) - peak);
  }
  return std::exp((peak + std::log(sum)) / alpha);
}

}  // namespace

double power_mean(std::span<const double> x, const WeightVector& weights, AlphaParam alpha) {
  if (x.empty()) throw ValidationError("empty_input", "power mean of an empty list");
  if (x.size() != weights.size()) {
    throw ValidationError("size_mismatch", "values and weights differ in length");
  }
  const double a = alpha.value();
  if (a < 0.0) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] <= 0.0) {
        throw DomainError("negative alpha with zero subscript at position " + std::to_string(k + 1));
      }
    }
  }
  if (a == 1.0) {
    double sum = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) sum += weights[k] * x[k];
    return sum;
  }
  return std::abs(a) > kLogDomainAlpha ? log_power_mean(x, weights, a)
                                       : direct_power_mean(x, weights, a);
}

TwoDULV dulgwa(std::span<const TwoDULV> values, const WeightVector& weights, AlphaParam alpha) {
  if (values.empty()) throw ValidationError("empty_input", "aggregation of an empty list");
  if (values.size() != weights.size()) {
    throw ValidationError("size_mismatch", "values and weights differ in length");
  }
  std::vector<double> lo(values.size()), hi(values.size());
  TwoDULV out;
  out.reliability = values.front().reliability;
  for (std::size_t k = 0; k < values.size(); ++k) {
    lo[k] = values[k].judgment.lo;
    hi[k] = values[k].judgment.hi;
    out.reliability.lo = std::min(out.reliability.lo, values[k].reliability.lo);
    out.reliability.hi = std::min(out.reliability.hi, values[k].reliability.hi);
  }
  out.judgment.lo = power_mean(lo, weights, alpha);
  out.judgment.hi = power_mean(hi, weights, alpha);
  return out;
}

Grid<TwoDULV> temporal_aggregate(std::span<const RoundMatrix> rounds, AlphaParam alpha,
                                 const std::optional<WeightVector>& round_weights) {
  if (rounds.empty()) throw ValidationError("no_rounds", "temporal aggregate needs at least one round");
  const std::size_t experts = rounds.front().experts();
  const std::size_t alternatives = rounds.front().alternatives();
  for (const auto& round : rounds) {
    if (!round.entries.same_shape(experts, alternatives)) {
      throw ValidationError("roster_mismatch", "round " + std::to_string(round.index) +
                                                   " has a different expert/alternative roster");
    }
  }
  const WeightVector weights = round_weights ? *round_weights : WeightVector::uniform(rounds.size());
  if (weights.size() != rounds.size()) {
    throw ValidationError("size_mismatch", "round weights do not match the number of rounds");
  }

  Grid<TwoDULV> out(experts, alternatives);
  std::vector<TwoDULV> column(rounds.size());
  for (std::size_t i = 0; i < experts; ++i) {
    for (std::size_t j = 0; j < alternatives; ++j) {
      for (std::size_t t = 0; t < rounds.size(); ++t) column[t] = rounds[t].entries(i, j);
      try {
        out(i, j) = dulgwa(column, weights, alpha);
      } catch (const DomainError&) {
        std::size_t t = 0;
        while (t + 1 < column.size() && column[t].judgment.lo > 0.0 && column[t].judgment.hi > 0.0) ++t;
        throw DomainError("negative alpha with zero judgment subscript (round " +
                              std::to_string(rounds[t].index) + ", expert #" + std::to_string(i + 1) +
                              ", alternative #" + std::to_string(j + 1) + ")",
                          CellRef{t, i, j});
      }
    }
  }
  return out;
}

}  // namespace gdm
