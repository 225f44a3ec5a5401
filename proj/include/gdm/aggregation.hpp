#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gdm/grid.hpp"
#include "gdm/linguistic.hpp"

namespace gdm {

inline constexpr double kWeightSumTolerance = 1e-10;

// Nonnegative weights summing to one.
class WeightVector {
 public:
  // Throws ValidationError when a weight is negative or non-finite, or the
  // sum is off by more than kWeightSumTolerance.
  explicit WeightVector(std::vector<double> weights);
  static WeightVector uniform(std::size_t n);

  std::span<const double> values() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t k) const { return weights_[k]; }

  bool operator==(const WeightVector&) const = default;

 private:
  std::vector<double> weights_;
};

class AlphaParam {
 public:
  // Throws ValidationError for zero or non-finite alpha.
  explicit AlphaParam(double alpha);
  double value() const noexcept { return alpha_; }

 private:
  double alpha_;
};

// Above this |alpha| the power mean is evaluated in the log domain.
inline constexpr double kLogDomainAlpha = 8.0;

// (sum_k w_k x_k^alpha)^(1/alpha), summed left to right.
double power_mean(std::span<const double> x, const WeightVector& weights, AlphaParam alpha);

// Generalized weighted aggregation: power mean on each judgment endpoint,
// min on each reliability endpoint. alpha = 1 is the plain weighted average.
TwoDULV dulgwa(std::span<const TwoDULV> values, const WeightVector& weights, AlphaParam alpha);

inline TwoDULV dulwa(std::span<const TwoDULV> values, const WeightVector& weights) {
  return dulgwa(values, weights, AlphaParam(1.0));
}

// Per expert and alternative, aggregates that cell across all rounds.
// Round weights default to 1/T.
Grid<TwoDULV> temporal_aggregate(std::span<const RoundMatrix> rounds, AlphaParam alpha,
                                 const std::optional<WeightVector>& round_weights = std::nullopt);

}  // namespace gdm
