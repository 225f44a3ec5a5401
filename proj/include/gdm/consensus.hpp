#pragma once

#include <span>
#include <string>
#include <vector>

#include "gdm/error.hpp"
#include "gdm/grid.hpp"
#include "gdm/linguistic.hpp"
#include "gdm/weighting.hpp"

namespace gdm {

double cosine_similarity(std::span<const double> u, std::span<const double> v);

// One expert's expectations: row t holds E(s_ij^t) for every alternative j.
struct ExpectationMatrix {
  std::string expert;
  Grid<double> rows;

  bool operator==(const ExpectationMatrix&) const = default;
};

// T x m grid of expert i's cells across rounds.
Grid<TwoDULV> expert_rounds(std::span<const RoundMatrix> rounds, std::size_t expert);

ExpectationMatrix expectation_matrix(const Grid<TwoDULV>& expert_rounds, const LinguisticScale& scale,
                                     std::string expert = {});

struct FitOptions {
  bool normalize_rows = false;
  int max_iterations = 10000;
  double step_tolerance = 1e-12;
};

inline constexpr double kFitResidualBound = 1e-8;

struct FittedPreference {
  std::vector<double> preference;  // unit length, nonnegative
  double eigenvalue = 0.0;
  double residual = 0.0;
  int iterations = 0;

  bool operator==(const FittedPreference&) const = default;
};

// Thrown when power iteration stalls, which happens only for a (near-)tied
// dominant eigenvalue. Carries the Rayleigh quotients of the last two iterates.
class ConvergenceError : public DomainError {
 public:
  ConvergenceError(const std::string& what, double last_quotient, double previous_quotient)
      : DomainError(what), last_(last_quotient), previous_(previous_quotient) {}
  double last_quotient() const noexcept { return last_; }
  double previous_quotient() const noexcept { return previous_; }

 private:
  double last_;
  double previous_;
};

// m x m matrix sum_t s^t (s^t)^T, row-major.
std::vector<double> scatter_matrix(const ExpectationMatrix& s, bool normalize_rows = false);

// Unit vector maximizing sum_t <v, s^t>^2: the dominant eigenvector of the
// scatter matrix, found by power iteration from the normalized all-ones
// vector.
FittedPreference fit_preference(const ExpectationMatrix& s, const FitOptions& options = {});

// Sum_t <v, s^t>^2, the quantity fit_preference maximizes.
double fit_objective(const ExpectationMatrix& s, std::span<const double> v, bool normalize_rows = false);

inline constexpr double kRankingTieTolerance = 1e-9;

struct GroupResult {
  std::vector<double> group_vector;
  std::vector<std::size_t> ranking;  // alternative indices, best first
  std::vector<bool> tied_with_next;  // ranking[k] ties with ranking[k + 1]

  bool operator==(const GroupResult&) const = default;
};

// Descending order; values within kRankingTieTolerance of a neighbour form a
// tie group listed in declaration order.
GroupResult rank_alternatives(std::vector<double> scores);

// Weighted sum of the fitted vectors, ranked.
GroupResult group_preference(std::span<const FittedPreference> fitted, std::span<const double> weights);

inline GroupResult group_preference(std::span<const FittedPreference> fitted, const ExpertWeights& weights) {
  return group_preference(fitted, weights.combined);
}

// "a5 > a1 = a4 > ..." with '=' between tied neighbours.
std::string format_ranking(const GroupResult& result, std::span<const std::string> names);

}  // namespace gdm
