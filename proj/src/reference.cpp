#include "gdm/reference.hpp"

#include <cmath>
#include <limits>

#include "gdm/weighting.hpp"

namespace gdm::reference {

namespace data {
extern const std::string_view kSession;
extern const std::string_view kGolden;
extern const std::string_view kLedger;
}  // namespace data

namespace {

constexpr double kSlack = 1e-9;  // printed values are exact decimals; absorb representation error

std::vector<double> read_vector(const Json& doc) {
  std::vector<double> out;
  for (const auto& v : doc) out.push_back(v.get<double>());
  return out;
}

Grid<double> read_grid(const Json& doc) {
  Grid<double> g(doc.size(), doc.empty() ? 0 : doc[0].size());
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.cols(); ++c) g(r, c) = doc[r][c].get<double>();
  }
  return g;
}

std::vector<Grid<double>> read_grids(const Json& doc) {
  std::vector<Grid<double>> out;
  for (const auto& g : doc) out.push_back(read_grid(g));
  return out;
}

Golden parse_golden() {
  const Json doc = Json::parse(data::kGolden);
  Golden g;
  g.tolerance = doc["tolerance"].get<double>();
  g.beta = read_grids(doc["beta"]);
  const auto& agg = doc["aggregate"];
  g.aggregate = Grid<TwoDULV>(agg.size(), agg[0].size());
  for (std::size_t i = 0; i < agg.size(); ++i) {
    for (std::size_t j = 0; j < agg[i].size(); ++j) {
      const auto v = read_vector(agg[i][j]);
      g.aggregate(i, j) = make_dulv(v[0], v[1], v[2], v[3]);
    }
  }
  g.distance = read_grids(doc["distance"]);
  g.expectation = read_grids(doc["expectation"]);
  g.lambda1 = read_vector(doc["lambda1"]);
  g.lambda2 = read_vector(doc["lambda2"]);
  g.lambda = read_vector(doc["lambda"]);
  g.eta = doc["eta"].get<double>();
  const auto& experts = example_session().experts;
  for (std::size_t i = 0; i < doc["step8_matrices"].size(); ++i) {
    g.step8.push_back({experts.at(i), read_grid(doc["step8_matrices"][i])});
  }
  for (const auto& f : doc["fitted"]) g.fitted.push_back(read_vector(f));
  g.group_vector = read_vector(doc["group_vector"]);
  for (const auto& a : doc["ranking"]) g.ranking.push_back(a.get<std::string>());
  return g;
}

std::vector<LedgerEntry> parse_ledger() {
  const Json doc = Json::parse(data::kLedger);
  std::vector<LedgerEntry> out;
  for (const auto& e : doc["entries"]) out.push_back(ledger_entry_from_json(e));
  return out;
}

bool within(std::span<const double> printed, std::span<const double> computed, double tol) {
  return max_deviation(printed, computed) <= tol + kSlack;
}

std::vector<double> renormalized(std::vector<double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  for (double& x : v) x /= sum;
  return v;
}

const std::vector<double>* report_quantity(const DecisionReport& r, std::string_view q) {
  if (q == "lambda1") return &r.lambda1;
  if (q == "lambda2") return &r.lambda2;
  if (q == "lambda") return &r.lambda;
  if (q == "group_vector") return &r.group.group_vector;
  return nullptr;
}

// Group-vector comparisons use the coarser tolerance the fitted vectors are held to.
constexpr double kVectorTolerance = 0.005;

double end_to_end_tolerance(std::string_view q) {
  return q == "group_vector" ? kVectorTolerance : golden().tolerance;
}

std::string percent(std::size_t hits, std::size_t total) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%zu/%zu within tolerance (%.1f%%)", hits, total,
                total ? 100.0 * static_cast<double>(hits) / static_cast<double>(total) : 0.0);
  return buf;
}

}  // namespace

std::string_view session_text() { return data::kSession; }
std::string_view golden_text() { return data::kGolden; }
std::string_view ledger_text() { return data::kLedger; }

const Session& example_session() {
  static const Session s = parse_session(data::kSession).session;
  return s;
}

const Golden& golden() {
  static const Golden g = parse_golden();
  return g;
}

const std::vector<LedgerEntry>& ledger() {
  static const std::vector<LedgerEntry> entries = parse_ledger();
  return entries;
}

const LedgerEntry* find_entry(std::string_view id) {
  for (const auto& e : ledger()) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

double max_deviation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

bool matches_example(const Session& s) {
  const Session& ex = example_session();
  if (s.scale.l() != ex.scale.l() || s.scale.z() != ex.scale.z()) return false;
  if (s.experts != ex.experts || s.alternatives != ex.alternatives) return false;
  if (s.alpha != ex.alpha || s.round_weights.has_value()) return false;
  if (s.rounds.size() != ex.rounds.size()) return false;
  for (std::size_t t = 0; t < s.rounds.size(); ++t) {
    if (s.rounds[t].index != ex.rounds[t].index || !(s.rounds[t].entries == ex.rounds[t].entries) ||
        !(s.rounds[t].swapped == ex.rounds[t].swapped)) {
      return false;
    }
  }
  return true;
}

std::vector<CellCheck> cell_checks(const DecisionReport& r) {
  const Golden& g = golden();
  const double tol = g.tolerance;
  std::vector<CellCheck> out;
  auto add = [&](std::string id, const char* quantity, std::string table, int round, std::size_t i, std::size_t j,
                 std::vector<double> printed, std::vector<double> computed) {
    CellCheck c;
    c.id = std::move(id);
    c.quantity = quantity;
    c.table = std::move(table);
    c.round = round;
    c.expert = r.experts.at(i);
    c.alternative = r.alternatives.at(j);
    c.within = within(printed, computed, tol);
    c.printed = std::move(printed);
    c.computed = std::move(computed);
    c.entry = find_entry(c.id);
    out.push_back(std::move(c));
  };
  auto cell_id = [&](int table, int round, std::size_t i, std::size_t j) {
    return "T" + std::to_string(table) + "-r" + std::to_string(round) + "-" + r.experts[i] + "-" + r.alternatives[j];
  };

  const std::size_t rounds = std::min(g.beta.size(), r.beta_grids.size());
  for (std::size_t t = 0; t < rounds; ++t) {
    const int round = static_cast<int>(t + 1);
    for (std::size_t i = 0; i < g.beta[t].rows(); ++i) {
      for (std::size_t j = 0; j < g.beta[t].cols(); ++j) {
        const int table = 4 + static_cast<int>(t);
        add(cell_id(table, round, i, j), "beta", std::to_string(table), round, i, j, {g.beta[t](i, j)},
            {r.beta_grids[t](i, j)});
      }
    }
  }
  for (std::size_t i = 0; i < g.aggregate.rows() && i < r.aggregate.rows(); ++i) {
    for (std::size_t j = 0; j < g.aggregate.cols() && j < r.aggregate.cols(); ++j) {
      const auto& p = g.aggregate(i, j);
      const auto& c = r.aggregate(i, j);
      add("T7-" + r.experts[i] + "-" + r.alternatives[j], "aggregate", "7", 0, i, j,
          {p.judgment.lo, p.judgment.hi, p.reliability.lo, p.reliability.hi},
          {c.judgment.lo, c.judgment.hi, c.reliability.lo, c.reliability.hi});
    }
  }
  for (std::size_t t = 0; t < std::min(g.distance.size(), r.distance_grids.size()); ++t) {
    const int round = static_cast<int>(t + 1);
    for (std::size_t i = 0; i < g.distance[t].rows(); ++i) {
      for (std::size_t j = 0; j < g.distance[t].cols(); ++j) {
        const int table = 8 + static_cast<int>(t);
        add(cell_id(table, round, i, j), "distance", std::to_string(table), round, i, j, {g.distance[t](i, j)},
            {r.distance_grids[t](i, j)});
      }
    }
  }
  for (std::size_t t = 0; t < g.expectation.size(); ++t) {
    const int round = static_cast<int>(t + 1);
    for (std::size_t i = 0; i < g.expectation[t].rows() && i < r.expectation_matrices.size(); ++i) {
      const auto& rows = r.expectation_matrices[i].rows;
      if (t >= rows.rows()) continue;
      for (std::size_t j = 0; j < g.expectation[t].cols(); ++j) {
        const int table = 11 + static_cast<int>(t);
        add(cell_id(table, round, i, j), "expectation", std::to_string(table), round, i, j, {g.expectation[t](i, j)},
            {rows(t, j)});
      }
    }
  }
  return out;
}

std::vector<LedgerEntry> triggered_entries(const DecisionReport& r) {
  std::vector<LedgerEntry> out;
  const auto checks = cell_checks(r);
  for (const auto& e : ledger()) {
    if (const auto* q = report_quantity(r, e.quantity); q != nullptr && e.table == "steps") {
      if (!within(e.printed, *q, end_to_end_tolerance(e.quantity))) {
        LedgerEntry hit = e;
        hit.computed = *q;
        out.push_back(std::move(hit));
      }
      continue;
    }
    bool is_cell = false;
    for (const auto& c : checks) {
      if (c.entry == &e) {
        is_cell = true;
        if (!c.within) out.push_back(e);
        break;
      }
    }
    if (!is_cell) out.push_back(e);
  }
  return out;
}

std::vector<double> beta_totals_from_tables() {
  const Golden& g = golden();
  const auto& ex = example_session();
  std::vector<double> totals(ex.experts.size(), 0.0);
  for (std::size_t t = 0; t < g.beta.size(); ++t) {
    for (std::size_t i = 0; i < g.beta[t].rows(); ++i) {
      for (std::size_t j = 0; j < g.beta[t].cols(); ++j) {
        double v = g.beta[t](i, j);
        const std::string id = "T" + std::to_string(4 + t) + "-r" + std::to_string(t + 1) + "-" + ex.experts[i] +
                               "-" + ex.alternatives[j];
        if (const auto* e = find_entry(id); e != nullptr && e->kind == "typo") {
          v = std::round(e->computed.at(0) * 1000.0) / 1000.0;
        }
        totals[i] += v;
      }
    }
  }
  return totals;
}

std::vector<double> lambda1_from_tables() { return uncertainty_weights(beta_totals_from_tables()); }

std::vector<double> zeta_from_tables() {
  const Golden& g = golden();
  std::vector<double> totals(g.distance.empty() ? 0 : g.distance[0].rows(), 0.0);
  for (const auto& grid : g.distance) {
    for (std::size_t i = 0; i < grid.rows(); ++i) {
      for (double d : grid.row(i)) totals[i] += d;
    }
  }
  return totals;
}

std::vector<double> lambda2_from_tables() { return deviation_weights(zeta_from_tables()); }

std::vector<double> lambda_from_published(double eta) {
  const Golden& g = golden();
  return combined_weights(renormalized(g.lambda1), g.lambda2, eta).combined;
}

std::vector<FittedPreference> fits_from_step8(const FitOptions& options) {
  std::vector<FittedPreference> out;
  for (const auto& s : golden().step8) out.push_back(fit_preference(s, options));
  return out;
}

GroupResult group_from_published() {
  const Golden& g = golden();
  std::vector<FittedPreference> fitted;
  for (const auto& v : g.fitted) fitted.push_back({v, 0.0, 0.0, 0});
  return group_preference(fitted, g.lambda);
}

std::vector<ReproductionRow> reproduction_rows(const DecisionReport& e2e) {
  const Golden& g = golden();
  const double tol = g.tolerance;
  std::vector<ReproductionRow> rows;
  auto vector_row = [&](std::string name, std::vector<double> printed, std::vector<double> computed, double t,
                        std::string detail = {}) {
    ReproductionRow row{std::move(name), std::move(printed), std::move(computed), t, false, std::move(detail)};
    row.pass = within(row.printed, row.computed, t);
    rows.push_back(std::move(row));
  };
  auto share_row = [&](std::string name, const std::string& quantity, double required) {
    std::size_t hits = 0;
    std::size_t total = 0;
    std::size_t unexplained = 0;
    for (const auto& c : cell_checks(e2e)) {
      if (c.quantity != quantity) continue;
      ++total;
      if (c.within) {
        ++hits;
      } else if (c.entry == nullptr) {
        ++unexplained;
      }
    }
    ReproductionRow row;
    row.name = std::move(name);
    row.tolerance = tol;
    const double share = total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
    row.pass = total > 0 && share >= required && unexplained == 0;
    row.detail = percent(hits, total) + ", required " + std::to_string(static_cast<int>(required * 100)) +
                 "%, misses without a ledger entry: " + std::to_string(unexplained);
    rows.push_back(std::move(row));
  };

  share_row("expectation tables", "expectation", 0.90);
  share_row("uncertainty tables", "beta", 0.85);
  share_row("distance tables", "distance", 0.0);
  share_row("temporal aggregate table", "aggregate", 0.0);
  vector_row("lambda1 from printed uncertainty tables", g.lambda1, lambda1_from_tables(), tol,
             "digit typos corrected");
  vector_row("lambda2 from printed distance tables", g.lambda2, lambda2_from_tables(), tol);
  vector_row("lambda from printed lambda1 and lambda2", g.lambda, lambda_from_published(g.eta), tol,
             "printed lambda1 rescaled to sum to 1");
  const auto fits = fits_from_step8();
  for (std::size_t i = 0; i < fits.size(); ++i) {
    vector_row("fitted vector " + g.step8[i].expert + " from printed step-8 matrix", g.fitted[i],
               fits[i].preference, kVectorTolerance);
  }
  const auto& alts = example_session().alternatives;
  const auto published = group_from_published();
  vector_row("group vector from printed intermediates", g.group_vector, published.group_vector, kVectorTolerance,
             "ranking " + format_ranking(published, alts));
  vector_row("lambda1 end to end", g.lambda1, e2e.lambda1, tol);
  vector_row("lambda2 end to end", g.lambda2, e2e.lambda2, tol);
  vector_row("lambda end to end", g.lambda, e2e.lambda, tol);
  vector_row("group vector end to end", g.group_vector, e2e.group.group_vector, kVectorTolerance,
             "ranking " + format_ranking(e2e.group, alts));

  auto ranking_row = [&](std::string name, const GroupResult& result) {
    std::vector<std::string> names;
    for (auto j : result.ranking) names.push_back(alts.at(j));
    ReproductionRow row;
    row.name = std::move(name);
    row.pass = names == g.ranking;
    for (bool t : result.tied_with_next) row.pass = row.pass && !t;
    row.detail = format_ranking(result, alts);
    rows.push_back(std::move(row));
  };
  ranking_row("ranking from printed intermediates", published);
  ranking_row("ranking end to end", e2e.group);
  return rows;
}

}  // namespace gdm::reference
