#include "gdm/weighting.hpp"

#include <cmath>
#include <string>

#include "gdm/error.hpp"

namespace gdm {

Grid<double> uncertainty_grid(const RoundMatrix& round, const LinguisticScale& scale) {
  Grid<double> out(round.experts(), round.alternatives());
  for (std::size_t i = 0; i < round.experts(); ++i) {
    for (std::size_t j = 0; j < round.alternatives(); ++j) {
      out(i, j) = uncertainty_degree(round.entries(i, j), scale);
    }
  }
  return out;
}

std::vector<double> expert_uncertainty(std::span<const RoundMatrix> rounds, const LinguisticScale& scale) {
  if (rounds.empty()) throw ValidationError("no_rounds", "uncertainty needs at least one round");
  const std::size_t experts = rounds.front().experts();
  std::vector<double> totals(experts, 0.0);
  for (const auto& round : rounds) {
    if (!round.entries.same_shape(experts, rounds.front().alternatives())) {
      throw ValidationError("roster_mismatch", "round " + std::to_string(round.index) +
                                                   " has a different expert/alternative roster");
    }
    for (std::size_t i = 0; i < experts; ++i) {
      for (std::size_t j = 0; j < round.alternatives(); ++j) {
        totals[i] += uncertainty_degree(round.entries(i, j), scale);
      }
    }
  }
  return totals;
}

std::vector<double> reciprocal_weights(std::span<const double> degrees) {
  if (degrees.empty()) throw ValidationError("invalid_weights", "no experts to weight");
  std::size_t zeros = 0;
  for (double x : degrees) {
    if (!std::isfinite(x) || x < 0.0) {
      throw ValidationError("invalid_weights", "degrees must be finite and nonnegative");
    }
    if (x == 0.0) ++zeros;
  }
  std::vector<double> out(degrees.size(), 0.0);
  if (zeros > 0) {
    // Limit of the reciprocal formula as the zero degrees approach zero together.
    for (std::size_t i = 0; i < degrees.size(); ++i) {
      if (degrees[i] == 0.0) out[i] = 1.0 / static_cast<double>(zeros);
    }
    return out;
  }
  double sum = 0.0;
  for (double x : degrees) sum += 1.0 / x;
  for (std::size_t i = 0; i < degrees.size(); ++i) out[i] = (1.0 / degrees[i]) / sum;
  return out;
}

std::vector<Grid<double>> distance_grids(std::span<const RoundMatrix> rounds, const Grid<TwoDULV>& group,
                                         const LinguisticScale& scale) {
  std::vector<Grid<double>> out;
  out.reserve(rounds.size());
  for (const auto& round : rounds) {
    if (!round.entries.same_shape(group.rows(), group.cols())) {
      throw ValidationError("roster_mismatch", "round " + std::to_string(round.index) +
                                                   " does not match the group grid");
    }
    Grid<double> d(group.rows(), group.cols());
    for (std::size_t i = 0; i < group.rows(); ++i) {
      for (std::size_t j = 0; j < group.cols(); ++j) {
        d(i, j) = hamming_distance(round.entries(i, j), group(i, j), scale);
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<double> deviation_degree(std::span<const RoundMatrix> rounds, const Grid<TwoDULV>& group,
                                     const LinguisticScale& scale) {
  std::vector<double> totals(group.rows(), 0.0);
  for (const auto& d : distance_grids(rounds, group, scale)) {
    for (std::size_t i = 0; i < d.rows(); ++i) {
      for (double v : d.row(i)) totals[i] += v;
    }
  }
  return totals;
}

namespace {

void require_unit_sum(std::span<const double> w, const char* name) {
  double sum = 0.0;
  for (double v : w) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("invalid_weights", std::string(name) + " has a negative or non-finite entry");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kExpertWeightTolerance) {
    throw ValidationError("invalid_weights", std::string(name) + " sums to " + std::to_string(sum));
  }
}

}  // namespace

ExpertWeights combined_weights(std::span<const double> lambda1, std::span<const double> lambda2, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw ValidationError("invalid_eta", "eta must lie in [0, 1], got " + std::to_string(eta));
  }
  if (lambda1.size() != lambda2.size()) {
    throw ValidationError("size_mismatch", "weight vectors differ in length");
  }
  require_unit_sum(lambda1, "lambda1");
  require_unit_sum(lambda2, "lambda2");
  ExpertWeights out;
  out.lambda1.assign(lambda1.begin(), lambda1.end());
  out.lambda2.assign(lambda2.begin(), lambda2.end());
  out.eta = eta;
  out.combined.resize(lambda1.size());
  for (std::size_t i = 0; i < lambda1.size(); ++i) {
    out.combined[i] = eta * lambda1[i] + (1.0 - eta) * lambda2[i];
  }
  return out;
}

}  // namespace gdm
