#pragma once

#include <span>
#include <vector>

#include "gdm/grid.hpp"
#include "gdm/linguistic.hpp"

namespace gdm {

inline constexpr double kExpertWeightTolerance = 1e-9;

struct ExpertWeights {
  std::vector<double> lambda1;  // from uncertainty
  std::vector<double> lambda2;  // from deviation
  double eta = 0.4;
  std::vector<double> combined;

  bool operator==(const ExpertWeights&) const = default;
};

// Uncertainty degree of every cell of one round.
Grid<double> uncertainty_grid(const RoundMatrix& round, const LinguisticScale& scale);

// Per expert: sum of cell uncertainty degrees over all rounds and alternatives.
std::vector<double> expert_uncertainty(std::span<const RoundMatrix> rounds, const LinguisticScale& scale);

// Reciprocal-share weights: w_i = (1/x_i) / sum_k (1/x_k). When some x_i are
// zero, those experts split the whole weight evenly and the rest get zero.
// Throws ValidationError for empty, negative or non-finite input.
std::vector<double> reciprocal_weights(std::span<const double> degrees);

inline std::vector<double> uncertainty_weights(std::span<const double> betas) {
  return reciprocal_weights(betas);
}

// Distance of each round's cells to the matching cell of `group`, one grid
// per round.
std::vector<Grid<double>> distance_grids(std::span<const RoundMatrix> rounds, const Grid<TwoDULV>& group,
                                         const LinguisticScale& scale);

// Per expert: summed distance to the group grid over rounds and alternatives.
std::vector<double> deviation_degree(std::span<const RoundMatrix> rounds, const Grid<TwoDULV>& group,
                                     const LinguisticScale& scale);

inline std::vector<double> deviation_weights(std::span<const double> zetas) {
  return reciprocal_weights(zetas);
}

// combined_i = eta * lambda1_i + (1 - eta) * lambda2_i. Both inputs must sum
// to one within kExpertWeightTolerance and 0 <= eta <= 1.
ExpertWeights combined_weights(std::span<const double> lambda1, std::span<const double> lambda2, double eta);

}  // namespace gdm
