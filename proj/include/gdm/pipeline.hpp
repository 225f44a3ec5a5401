#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gdm/consensus.hpp"
#include "gdm/error.hpp"
#include "gdm/grid.hpp"
#include "gdm/ledger.hpp"
#include "gdm/session.hpp"

namespace gdm {

inline constexpr std::string_view kReportSchema = "gdm-report/1";

struct RunOptions {
  // Normalize each round's expectation row before fitting.
  bool normalize_rows = false;
};

// Every intermediate of one decision run. A pure function of the session and
// options it was produced from.
struct DecisionReport {
  LinguisticScale scale;
  std::vector<std::string> experts;
  std::vector<std::string> alternatives;
  double eta = 0.4;
  double alpha = 1.0;
  bool normalize_rows = false;
  std::vector<double> round_weights;

  std::vector<Grid<double>> beta_grids;  // per round
  std::vector<double> beta_totals;       // per expert
  std::vector<double> lambda1;
  Grid<TwoDULV> aggregate;                   // temporal aggregate, experts x alternatives
  std::vector<Grid<double>> distance_grids;  // per round, against `aggregate`
  std::vector<double> zeta;
  std::vector<double> lambda2;
  std::vector<double> lambda;

  std::vector<ExpectationMatrix> expectation_matrices;  // per expert
  std::vector<FittedPreference> fitted;                 // per expert
  GroupResult group;

  std::vector<Issue> warnings;
  std::vector<LedgerEntry> discrepancies;

  bool operator==(const DecisionReport&) const = default;
};

// Failure inside one numbered step of the run.
class PipelineError : public DomainError {
 public:
  PipelineError(int step, const std::string& what, std::optional<CellRef> cell = std::nullopt)
      : DomainError("step " + std::to_string(step) + ": " + what, cell), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

// Steps, in order: cell uncertainty; uncertainty weights; temporal aggregate;
// distance grids; deviation weights; combined weights; expectations;
// expectation matrices; vector fitting; group vector and ranking.
DecisionReport run_pipeline(const Session& session, const RunOptions& options = {});

Json report_to_json(const DecisionReport& report);
// Throws FormatError on schema mismatch or malformed fields.
DecisionReport report_from_json(const Json& doc);
// Stable text form; numbers carry 12 significant digits.
std::string canonical_report(const DecisionReport& report);
DecisionReport parse_report(std::string_view text);
DecisionReport load_report(const std::filesystem::path& path);

// Human-readable tables: weights, fitted vectors, group vector, ranking.
std::string render_report_table(const DecisionReport& report);

std::string ranking_text(const DecisionReport& report);

}  // namespace gdm
