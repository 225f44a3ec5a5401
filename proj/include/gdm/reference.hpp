#pragma once

// The bundled worked example: its input session, the published values of
// every intermediate table, and the ledger of known inconsistencies between
// the published tables and what the formulas give.

#include <string>
#include <string_view>
#include <vector>

#include "gdm/consensus.hpp"
#include "gdm/ledger.hpp"
#include "gdm/pipeline.hpp"
#include "gdm/session.hpp"

namespace gdm::reference {

std::string_view session_text();
std::string_view golden_text();
std::string_view ledger_text();

const Session& example_session();

struct Golden {
  double tolerance = 0.001;
  std::vector<Grid<double>> beta;         // per round, experts x alternatives
  Grid<TwoDULV> aggregate;
  std::vector<Grid<double>> distance;     // per round
  std::vector<Grid<double>> expectation;  // per round
  std::vector<double> lambda1;
  std::vector<double> lambda2;
  std::vector<double> lambda;
  double eta = 0.4;
  std::vector<ExpectationMatrix> step8;  // per expert, rounds x alternatives
  std::vector<std::vector<double>> fitted;
  std::vector<double> group_vector;
  std::vector<std::string> ranking;
};

const Golden& golden();

const std::vector<LedgerEntry>& ledger();
// nullptr when no entry carries `id`.
const LedgerEntry* find_entry(std::string_view id);

// True when the session has the example's scale, rosters, rounds, alpha and
// round weights. Eta and the session status are not compared.
bool matches_example(const Session& session);

// One published cell compared against a computed one.
struct CellCheck {
  std::string id;
  std::string quantity;  // beta, aggregate, distance, expectation
  std::string table;
  int round = 0;  // 0 for the aggregate
  std::string expert;
  std::string alternative;
  std::vector<double> printed;
  std::vector<double> computed;
  bool within = false;
  const LedgerEntry* entry = nullptr;
};

std::vector<CellCheck> cell_checks(const DecisionReport& report);

// Ledger entries that apply to `report`: cells outside tolerance, the
// whole-run comparisons that differ, and the input-level notes.
std::vector<LedgerEntry> triggered_entries(const DecisionReport& report);

// Chains that start from published intermediate tables rather than inputs.
std::vector<double> beta_totals_from_tables();  // digit typos corrected
std::vector<double> lambda1_from_tables();
std::vector<double> zeta_from_tables();
std::vector<double> lambda2_from_tables();
// Published lambda1 rescaled to sum to one, combined with published lambda2.
std::vector<double> lambda_from_published(double eta);
std::vector<FittedPreference> fits_from_step8(const FitOptions& options = {});
GroupResult group_from_published();

struct ReproductionRow {
  std::string name;
  std::vector<double> printed;
  std::vector<double> computed;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

// Published-versus-computed summary used by `gdm reproduce-paper`.
std::vector<ReproductionRow> reproduction_rows(const DecisionReport& end_to_end);

// Largest absolute componentwise difference; infinity on a size mismatch.
double max_deviation(std::span<const double> a, std::span<const double> b);

}  // namespace gdm::reference
