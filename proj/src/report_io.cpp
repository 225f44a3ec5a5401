#include <cstdio>
#include <fstream>
#include <sstream>

#include "gdm/ledger.hpp"
#include "gdm/pipeline.hpp"

namespace gdm {

namespace {

Json numbers(std::span<const double> values) {
  Json out = Json::array();
  for (double v : values) out.push_back(round12(v));
  return out;
}

Json grid_json(const Grid<double>& g) {
  Json out = Json::array();
  for (std::size_t r = 0; r < g.rows(); ++r) out.push_back(numbers(g.row(r)));
  return out;
}

Json dulv_json(const TwoDULV& v) {
  return Json::array({subscript_json(v.judgment.lo), subscript_json(v.judgment.hi),
                      subscript_json(v.reliability.lo), subscript_json(v.reliability.hi)});
}

Json issue_json(const Issue& i) {
  Json out{{"code", i.code}, {"message", i.message}};
  if (i.round > 0) out["round"] = i.round;
  if (!i.expert.empty()) out["expert"] = i.expert;
  if (!i.alternative.empty()) out["alternative"] = i.alternative;
  return out;
}

[[noreturn]] void bad(const std::string& what) { throw FormatError("malformed report: " + what); }

const Json& field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) bad(std::string("missing field '") + key + "'");
  return doc[key];
}

std::vector<double> read_numbers(const Json& doc) {
  if (!doc.is_array()) bad("expected a number array");
  std::vector<double> out;
  for (const auto& v : doc) {
    if (!v.is_number()) bad("expected a number");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::string> read_names(const Json& doc) {
  if (!doc.is_array()) bad("expected a name array");
  std::vector<std::string> out;
  for (const auto& v : doc) {
    if (!v.is_string()) bad("expected a string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

Grid<double> read_grid(const Json& doc) {
  if (!doc.is_array()) bad("expected a matrix");
  const std::size_t rows = doc.size();
  const std::size_t cols = rows ? doc[0].size() : 0;
  Grid<double> g(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = read_numbers(doc[r]);
    if (row.size() != cols) bad("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) g(r, c) = row[c];
  }
  return g;
}

std::vector<Grid<double>> read_grids(const Json& doc) {
  if (!doc.is_array()) bad("expected a list of matrices");
  std::vector<Grid<double>> out;
  for (const auto& g : doc) out.push_back(read_grid(g));
  return out;
}

std::size_t index_of(const std::vector<std::string>& names, const std::string& name) {
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name) return k;
  }
  bad("unknown alternative '" + name + "' in ranking");
}

}  // namespace

Json ledger_entry_to_json(const LedgerEntry& e) {
  Json out{{"id", e.id}, {"table", e.table}, {"quantity", e.quantity}};
  if (e.round > 0) out["round"] = e.round;
  if (!e.expert.empty()) out["expert"] = e.expert;
  if (!e.alternative.empty()) out["alternative"] = e.alternative;
  if (!e.printed.empty()) out["printed"] = e.printed.size() == 1 ? Json(round12(e.printed[0])) : numbers(e.printed);
  if (!e.computed.empty()) {
    out["computed"] = e.computed.size() == 1 ? Json(round12(e.computed[0])) : numbers(e.computed);
  }
  out["kind"] = e.kind;
  out["note"] = e.note;
  return out;
}

LedgerEntry ledger_entry_from_json(const Json& doc) {
  if (!doc.is_object()) throw FormatError("ledger entry must be an object");
  auto text = [&](const char* key) { return doc.contains(key) ? doc[key].get<std::string>() : std::string(); };
  auto values = [&](const char* key) {
    std::vector<double> out;
    if (!doc.contains(key)) return out;
    if (doc[key].is_number()) {
      out.push_back(doc[key].get<double>());
    } else {
      for (const auto& v : doc[key]) out.push_back(v.get<double>());
    }
    return out;
  };
  LedgerEntry e;
  e.id = text("id");
  e.table = text("table");
  e.quantity = text("quantity");
  e.round = doc.contains("round") ? doc["round"].get<int>() : 0;
  e.expert = text("expert");
  e.alternative = text("alternative");
  e.printed = values("printed");
  e.computed = values("computed");
  e.kind = text("kind");
  e.note = text("note");
  if (e.id.empty()) throw FormatError("ledger entry without id");
  return e;
}

std::string ranking_text(const DecisionReport& r) { return format_ranking(r.group, r.alternatives); }

Json report_to_json(const DecisionReport& r) {
  Json doc = Json::object();
  doc["schema"] = kReportSchema;
  doc["eta"] = round12(r.eta);
  doc["alpha"] = round12(r.alpha);
  doc["normalize_rows"] = r.normalize_rows;
  doc["scale"] = Json{{"l", r.scale.l()}, {"z", r.scale.z()}};
  doc["experts"] = r.experts;
  doc["alternatives"] = r.alternatives;
  doc["round_weights"] = numbers(r.round_weights);

  Json beta = Json::array();
  for (const auto& g : r.beta_grids) beta.push_back(grid_json(g));
  doc["beta_grids"] = std::move(beta);
  doc["beta_totals"] = numbers(r.beta_totals);
  doc["lambda1"] = numbers(r.lambda1);

  Json aggregate = Json::array();
  for (std::size_t i = 0; i < r.aggregate.rows(); ++i) {
    Json row = Json::array();
    for (const auto& v : r.aggregate.row(i)) row.push_back(dulv_json(v));
    aggregate.push_back(std::move(row));
  }
  doc["aggregate"] = std::move(aggregate);
  Json distances = Json::array();
  for (const auto& g : r.distance_grids) distances.push_back(grid_json(g));
  doc["distance_grids"] = std::move(distances);
  doc["zeta"] = numbers(r.zeta);
  doc["lambda2"] = numbers(r.lambda2);
  doc["lambda"] = numbers(r.lambda);

  Json matrices = Json::array();
  for (const auto& s : r.expectation_matrices) {
    matrices.push_back(Json{{"expert", s.expert}, {"rows", grid_json(s.rows)}});
  }
  doc["expectation_matrices"] = std::move(matrices);
  Json fitted = Json::array();
  for (std::size_t i = 0; i < r.fitted.size(); ++i) {
    const auto& f = r.fitted[i];
    fitted.push_back(Json{{"expert", i < r.experts.size() ? r.experts[i] : std::string()},
                          {"vector", numbers(f.preference)},
                          {"eigenvalue", round12(f.eigenvalue)},
                          {"residual", round12(f.residual)},
                          {"iterations", f.iterations}});
  }
  doc["fitted"] = std::move(fitted);

  Json ranking = Json::array();
  for (auto j : r.group.ranking) ranking.push_back(j < r.alternatives.size() ? r.alternatives[j] : std::string());
  Json ties = Json::array();
  for (bool t : r.group.tied_with_next) ties.push_back(t);
  doc["group"] = Json{{"group_vector", numbers(r.group.group_vector)},
                      {"ranking", std::move(ranking)},
                      {"tied_with_next", std::move(ties)},
                      {"text", ranking_text(r)}};

  Json warnings = Json::array();
  for (const auto& w : r.warnings) warnings.push_back(issue_json(w));
  doc["warnings"] = std::move(warnings);
  Json discrepancies = Json::array();
  for (const auto& d : r.discrepancies) discrepancies.push_back(ledger_entry_to_json(d));
  doc["discrepancies"] = std::move(discrepancies);
  return doc;
}

DecisionReport report_from_json(const Json& doc) {
  if (!doc.is_object()) bad("not an object");
  const std::string schema = doc.contains("schema") && doc["schema"].is_string() ? doc["schema"].get<std::string>() : "";
  if (schema != kReportSchema) {
    throw FormatError("unsupported report schema '" + schema + "'; expected '" + std::string(kReportSchema) + "'");
  }
  try {
    DecisionReport r;
    r.eta = field(doc, "eta").get<double>();
    r.alpha = field(doc, "alpha").get<double>();
    r.normalize_rows = field(doc, "normalize_rows").get<bool>();
    r.scale = LinguisticScale(field(doc, "scale")["l"].get<int>(), field(doc, "scale")["z"].get<int>());
    r.experts = read_names(field(doc, "experts"));
    r.alternatives = read_names(field(doc, "alternatives"));
    r.round_weights = read_numbers(field(doc, "round_weights"));
    r.beta_grids = read_grids(field(doc, "beta_grids"));
    r.beta_totals = read_numbers(field(doc, "beta_totals"));
    r.lambda1 = read_numbers(field(doc, "lambda1"));

    const auto& aggregate = field(doc, "aggregate");
    r.aggregate = Grid<TwoDULV>(aggregate.size(), aggregate.empty() ? 0 : aggregate[0].size());
    for (std::size_t i = 0; i < aggregate.size(); ++i) {
      if (aggregate[i].size() != r.aggregate.cols()) bad("ragged aggregate");
      for (std::size_t j = 0; j < aggregate[i].size(); ++j) {
        const auto v = read_numbers(aggregate[i][j]);
        if (v.size() != 4) bad("aggregate cell must have 4 subscripts");
        r.aggregate(i, j) = make_dulv(v[0], v[1], v[2], v[3]);
      }
    }
    r.distance_grids = read_grids(field(doc, "distance_grids"));
    r.zeta = read_numbers(field(doc, "zeta"));
    r.lambda2 = read_numbers(field(doc, "lambda2"));
    r.lambda = read_numbers(field(doc, "lambda"));

    for (const auto& s : field(doc, "expectation_matrices")) {
      r.expectation_matrices.push_back({field(s, "expert").get<std::string>(), read_grid(field(s, "rows"))});
    }
    for (const auto& f : field(doc, "fitted")) {
      FittedPreference fp;
      fp.preference = read_numbers(field(f, "vector"));
      fp.eigenvalue = field(f, "eigenvalue").get<double>();
      fp.residual = field(f, "residual").get<double>();
      fp.iterations = field(f, "iterations").get<int>();
      r.fitted.push_back(std::move(fp));
    }
    const auto& group = field(doc, "group");
    r.group.group_vector = read_numbers(field(group, "group_vector"));
    for (const auto& name : read_names(field(group, "ranking"))) {
      r.group.ranking.push_back(index_of(r.alternatives, name));
    }
    for (const auto& t : field(group, "tied_with_next")) r.group.tied_with_next.push_back(t.get<bool>());

    for (const auto& w : field(doc, "warnings")) {
      Issue i;
      i.code = field(w, "code").get<std::string>();
      i.message = field(w, "message").get<std::string>();
      i.round = w.contains("round") ? w["round"].get<int>() : 0;
      i.expert = w.contains("expert") ? w["expert"].get<std::string>() : "";
      i.alternative = w.contains("alternative") ? w["alternative"].get<std::string>() : "";
      r.warnings.push_back(std::move(i));
    }
    for (const auto& d : field(doc, "discrepancies")) r.discrepancies.push_back(ledger_entry_from_json(d));
    return r;
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  } catch (const ValidationError& e) {
    bad(e.what());
  }
}

std::string canonical_report(const DecisionReport& r) { return report_to_json(r).dump(2) + "\n"; }

DecisionReport parse_report(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("malformed report JSON: ") + e.what());
  }
  return report_from_json(doc);
}

DecisionReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open report file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_report(buf.str());
}

namespace {

std::string cell(double v, int width = 9, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%*.*f", width, precision, v);
  return buf;
}

std::string label(const std::string& s, std::size_t width) {
  std::string out = s.size() > width ? s.substr(0, width) : s;
  out.resize(width, ' ');
  return out;
}

}  // namespace

std::string render_report_table(const DecisionReport& r) {
  std::ostringstream out;
  std::size_t name_width = 8;
  for (const auto& e : r.experts) name_width = std::max(name_width, e.size() + 2);

  out << "Decision report: " << r.experts.size() << " experts, " << r.alternatives.size() << " alternatives, "
      << r.beta_grids.size() << " rounds (l=" << r.scale.l() << ", z=" << r.scale.z() << ")\n";
  char params[128];
  std::snprintf(params, sizeof params, "eta=%g  alpha=%g  normalize_rows=%s\n", r.eta, r.alpha,
                r.normalize_rows ? "yes" : "no");
  out << params << "\n";

  out << "Expert weights\n" << label("expert", name_width) << "     beta  lambda1     zeta  lambda2   lambda\n";
  for (std::size_t i = 0; i < r.experts.size(); ++i) {
    out << label(r.experts[i], name_width) << cell(r.beta_totals[i]) << cell(r.lambda1[i]) << cell(r.zeta[i])
        << cell(r.lambda2[i]) << cell(r.lambda[i]) << "\n";
  }

  out << "\nFitted preferences\n" << label("expert", name_width);
  const std::size_t alt_width = 9;
  for (const auto& a : r.alternatives) out << std::string(alt_width - std::min(alt_width - 1, a.size()), ' ') << a;
  out << "  eigenvalue   residual\n";
  for (std::size_t i = 0; i < r.fitted.size(); ++i) {
    out << label(r.experts[i], name_width);
    for (double v : r.fitted[i].preference) out << cell(v);
    char tail[64];
    std::snprintf(tail, sizeof tail, "  %10.6f  %9.2e\n", r.fitted[i].eigenvalue, r.fitted[i].residual);
    out << tail;
  }
  out << label("group", name_width);
  for (double v : r.group.group_vector) out << cell(v);
  out << "\n\nRanking: " << ranking_text(r) << "\n";

  if (!r.warnings.empty()) {
    out << "\nWarnings (" << r.warnings.size() << ")\n";
    for (const auto& w : r.warnings) out << "  " << describe(w) << "\n";
  }
  if (!r.discrepancies.empty()) {
    out << "\nReference-example discrepancies (" << r.discrepancies.size() << " ledger entries)\n";
    for (const auto& d : r.discrepancies) out << "  " << d.id << " [" << d.kind << "] " << d.note << "\n";
  }
  return out.str();
}

}  // namespace gdm
