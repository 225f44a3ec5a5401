#include "gdm/pipeline.hpp"

#include "gdm/aggregation.hpp"
#include "gdm/reference.hpp"
#include "gdm/weighting.hpp"

namespace gdm {

namespace {

template <class F>
auto step(int number, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const PipelineError&) {
    throw;
  } catch (const DomainError& e) {
    throw PipelineError(number, e.what(), e.cell());
  }
}

void require_runnable(const Session& s) {
  std::vector<Issue> errors;
  if (s.experts.empty()) errors.push_back({"invalid_roster", "session has no experts"});
  if (s.alternatives.size() < 2) errors.push_back({"invalid_roster", "session needs at least 2 alternatives"});
  if (s.rounds.empty()) errors.push_back({"no_rounds", "session has no rounds"});
  if (!(s.eta >= 0.0 && s.eta <= 1.0)) errors.push_back({"invalid_eta", "eta must lie in [0, 1]"});
  for (std::size_t t = 0; t < s.rounds.size(); ++t) {
    const auto& r = s.rounds[t];
    if (r.index != static_cast<int>(t + 1)) {
      errors.push_back({"round_sequence", "rounds must be numbered 1..T", r.index});
    }
    if (!r.entries.same_shape(s.experts.size(), s.alternatives.size())) {
      errors.push_back({"roster_mismatch", "round grid does not match the rosters", r.index});
    }
  }
  if (s.round_weights && s.round_weights->size() != s.rounds.size()) {
    errors.push_back({"invalid_round_weights", "one round weight per round is required"});
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

}  // namespace

DecisionReport run_pipeline(const Session& session, const RunOptions& options) {
  require_runnable(session);
  const auto& scale = session.scale;
  const std::span<const RoundMatrix> rounds(session.rounds);
  const std::size_t p = session.experts.size();

  DecisionReport r;
  r.scale = scale;
  r.experts = session.experts;
  r.alternatives = session.alternatives;
  r.eta = session.eta;
  r.alpha = session.alpha;
  r.normalize_rows = options.normalize_rows;
  const WeightVector round_weights =
      session.round_weights ? WeightVector(*session.round_weights) : WeightVector::uniform(rounds.size());
  r.round_weights.assign(round_weights.values().begin(), round_weights.values().end());

  // Steps 1-2: uncertainty of every cell, then uncertainty-based weights.
  step(1, [&] {
    for (const auto& round : rounds) r.beta_grids.push_back(uncertainty_grid(round, scale));
    r.beta_totals.assign(p, 0.0);
    for (const auto& g : r.beta_grids) {
      for (std::size_t i = 0; i < p; ++i) {
        for (double b : g.row(i)) r.beta_totals[i] += b;
      }
    }
    return 0;
  });
  r.lambda1 = step(2, [&] { return uncertainty_weights(r.beta_totals); });

  // Steps 3-5: temporal aggregate, distances to it, deviation-based weights.
  r.aggregate = step(3, [&] { return temporal_aggregate(rounds, AlphaParam(session.alpha), round_weights); });
  r.distance_grids = step(4, [&] { return distance_grids(rounds, r.aggregate, scale); });
  step(5, [&] {
    r.zeta.assign(p, 0.0);
    for (const auto& g : r.distance_grids) {
      for (std::size_t i = 0; i < p; ++i) {
        for (double d : g.row(i)) r.zeta[i] += d;
      }
    }
    r.lambda2 = deviation_weights(r.zeta);
    return 0;
  });

  r.lambda = step(6, [&] { return combined_weights(r.lambda1, r.lambda2, session.eta).combined; });

  // Steps 7-9: per-expert expectation matrices and their fitted preference.
  step(8, [&] {
    for (std::size_t i = 0; i < p; ++i) {
      r.expectation_matrices.push_back(expectation_matrix(expert_rounds(rounds, i), scale, session.experts[i]));
    }
    return 0;
  });
  const FitOptions fit{.normalize_rows = options.normalize_rows};
  step(9, [&] {
    for (const auto& s : r.expectation_matrices) r.fitted.push_back(fit_preference(s, fit));
    return 0;
  });

  r.group = step(10, [&] { return group_preference(r.fitted, r.lambda); });

  r.warnings = normalization_warnings(session);
  if (reference::matches_example(session)) {
    r.discrepancies = reference::triggered_entries(r);
    for (const auto& check : reference::cell_checks(r)) {
      if (!check.within && check.entry == nullptr) {
        r.warnings.push_back({"untracked_discrepancy",
                              check.id + " differs from the published value and has no ledger entry"});
      }
    }
  }
  return r;
}

}  // namespace gdm
