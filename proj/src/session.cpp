#include "gdm/session.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gdm {

double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

Json subscript_json(double v) {
  const double r = round12(v);
  if (std::isfinite(r) && std::floor(r) == r && std::abs(r) < 9.0e15) {
    return static_cast<std::int64_t>(r);
  }
  return r;
}

std::string to_string(SessionStatus status) {
  return status == SessionStatus::Open ? "open" : "finalized";
}

namespace {

Issue issue(std::string code, std::string message, int round = 0, std::string expert = {},
            std::string alternative = {}) {
  return Issue{std::move(code), std::move(message), round, std::move(expert), std::move(alternative)};
}

std::optional<TwoDULV> parse_cell(const Json& cell, std::string& why) {
  if (cell.is_string()) {
    try {
      return parse_dulv(cell.get<std::string>());
    } catch (const FormatError& e) {
      why = e.what();
      return std::nullopt;
    }
  }
  if (!cell.is_array() || cell.size() != 4) {
    why = "cell must be [a, b, c, d]";
    return std::nullopt;
  }
  double v[4];
  for (std::size_t k = 0; k < 4; ++k) {
    if (!cell[k].is_number()) {
      why = "cell entries must be numbers";
      return std::nullopt;
    }
    v[k] = cell[k].get<double>();
  }
  return make_dulv(v[0], v[1], v[2], v[3]);
}

// Adds one raw value into `round`, reporting problems at (index, expert, alternative).
void place(RoundMatrix& round, std::size_t i, std::size_t j, const TwoDULV& raw, const Session& s,
           int index, std::vector<Issue>& errors, std::vector<Issue>& warnings) {
  const std::string& e = s.experts[i];
  const std::string& a = s.alternatives[j];
  if (auto problem = raw_value_problem(raw, s.scale)) {
    errors.push_back(issue("out_of_range", *problem, index, e, a));
    return;
  }
  const Canonical c = canonicalize(raw, s.scale);
  round.entries(i, j) = c.value;
  round.swapped(i, j) = static_cast<std::uint8_t>((c.judgment_swapped ? kJudgmentSwapped : 0) |
                                                  (c.reliability_swapped ? kReliabilitySwapped : 0));
  if (c.normalized()) {
    warnings.push_back(issue("reversed_interval", "reversed interval in " + format(raw) + " swapped to " +
                                                      format(c.value),
                             index, e, a));
  }
}

RoundMatrix empty_round(const Session& s, int index) {
  RoundMatrix round;
  round.index = index;
  round.entries = Grid<TwoDULV>(s.experts.size(), s.alternatives.size());
  round.swapped = Grid<std::uint8_t>(s.experts.size(), s.alternatives.size(), kNoSwap);
  return round;
}

template <class Lookup>
std::optional<std::size_t> find_name(const std::vector<std::string>& names, const Lookup& name) {
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name) return k;
  }
  return std::nullopt;
}

std::vector<std::string> read_roster(const Json& doc, const char* key, std::size_t minimum,
                                     std::vector<Issue>& errors) {
  std::vector<std::string> out;
  if (!doc.contains(key) || !doc[key].is_array()) {
    errors.push_back(issue("invalid_roster", std::string(key) + " must be an array of names"));
    return out;
  }
  std::set<std::string> seen;
  for (const auto& name : doc[key]) {
    if (!name.is_string() || name.get<std::string>().empty()) {
      errors.push_back(issue("invalid_roster", std::string(key) + " entries must be nonempty strings"));
      continue;
    }
    if (!seen.insert(name.get<std::string>()).second) {
      errors.push_back(issue("invalid_roster", "duplicate name '" + name.get<std::string>() + "' in " + key));
      continue;
    }
    out.push_back(name.get<std::string>());
  }
  if (out.size() < minimum) {
    errors.push_back(issue("invalid_roster", std::string(key) + " needs at least " + std::to_string(minimum) +
                                                 " entr" + (minimum == 1 ? "y" : "ies")));
  }
  return out;
}

}  // namespace

RoundMatrix parse_round_entries(const Json& entries, const Session& s, int index, std::vector<Issue>& errors,
                                std::vector<Issue>& warnings) {
  RoundMatrix round = empty_round(s, index);
  if (!entries.is_object()) {
    errors.push_back(issue("malformed_round", "round entries must be an object keyed by expert", index));
    return round;
  }
  Grid<std::uint8_t> present(s.experts.size(), s.alternatives.size(), 0);
  for (const auto& [expert, row] : entries.items()) {
    const auto i = find_name(s.experts, expert);
    if (!i) {
      errors.push_back(issue("unknown_expert", "expert '" + expert + "' is not in the roster", index, expert));
      continue;
    }
    if (!row.is_object()) {
      errors.push_back(issue("malformed_round", "expert row must be an object keyed by alternative", index, expert));
      continue;
    }
    for (const auto& [alternative, cell] : row.items()) {
      const auto j = find_name(s.alternatives, alternative);
      if (!j) {
        errors.push_back(issue("unknown_alternative", "alternative '" + alternative + "' is not in the roster",
                               index, expert, alternative));
        continue;
      }
      std::string why;
      const auto raw = parse_cell(cell, why);
      if (!raw) {
        errors.push_back(issue("malformed_cell", why, index, expert, alternative));
        continue;
      }
      present(*i, *j) = 1;
      place(round, *i, *j, *raw, s, index, errors, warnings);
    }
  }
  for (std::size_t i = 0; i < s.experts.size(); ++i) {
    for (std::size_t j = 0; j < s.alternatives.size(); ++j) {
      if (!present(i, j)) {
        errors.push_back(issue("missing_cell", "no evaluation given", index, s.experts[i], s.alternatives[j]));
      }
    }
  }
  return round;
}

RoundMatrix round_from_json(const Json& entries, const Session& session, int index, std::vector<Issue>* warnings) {
  std::vector<Issue> errors, notes;
  RoundMatrix round = parse_round_entries(entries, session, index, errors, notes);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  if (warnings) warnings->insert(warnings->end(), notes.begin(), notes.end());
  return round;
}

ValidatedSession validate_session(const Json& doc) {
  if (!doc.is_object()) throw FormatError("session document must be a JSON object");
  const std::string schema = doc.contains("schema") && doc["schema"].is_string() ? doc["schema"].get<std::string>() : "";
  if (schema != kSessionSchema) {
    throw FormatError("unsupported session schema '" + schema + "'; expected '" + std::string(kSessionSchema) + "'");
  }

  std::vector<Issue> errors;
  ValidatedSession out;
  Session& s = out.session;

  bool scale_ok = false;
  if (doc.contains("scale") && doc["scale"].is_object() && doc["scale"].contains("l") &&
      doc["scale"].contains("z") && doc["scale"]["l"].is_number_integer() && doc["scale"]["z"].is_number_integer()) {
    try {
      s.scale = LinguisticScale(doc["scale"]["l"].get<int>(), doc["scale"]["z"].get<int>());
      scale_ok = true;
    } catch (const ValidationError& e) {
      errors.insert(errors.end(), e.issues().begin(), e.issues().end());
    }
  } else {
    errors.push_back(issue("invalid_scale", "scale must be {\"l\": int, \"z\": int}"));
  }

  if (doc.contains("eta")) {
    if (!doc["eta"].is_number() || !(doc["eta"].get<double>() >= 0.0 && doc["eta"].get<double>() <= 1.0)) {
      errors.push_back(issue("invalid_eta", "eta must be a number in [0, 1]"));
    } else {
      s.eta = doc["eta"].get<double>();
    }
  }
  if (doc.contains("alpha")) {
    if (!doc["alpha"].is_number() || doc["alpha"].get<double>() == 0.0 ||
        !std::isfinite(doc["alpha"].get<double>())) {
      errors.push_back(issue("invalid_alpha", "alpha must be a finite nonzero number"));
    } else {
      s.alpha = doc["alpha"].get<double>();
    }
  }
  if (doc.contains("status")) {
    const auto& st = doc["status"];
    if (st == "open") {
      s.status = SessionStatus::Open;
    } else if (st == "finalized") {
      s.status = SessionStatus::Finalized;
    } else {
      errors.push_back(issue("invalid_status", "status must be \"open\" or \"finalized\""));
    }
  }

  s.experts = read_roster(doc, "experts", 1, errors);
  s.alternatives = read_roster(doc, "alternatives", 2, errors);

  if (doc.contains("rounds")) {
    if (!doc["rounds"].is_array()) {
      errors.push_back(issue("malformed_round", "rounds must be an array"));
    } else if (scale_ok) {
      std::set<int> seen;
      int position = 0;
      for (const auto& r : doc["rounds"]) {
        ++position;
        if (!r.is_object()) {
          errors.push_back(issue("malformed_round", "round must be an object", position));
          continue;
        }
        int index = position;
        if (r.contains("index")) {
          if (!r["index"].is_number_integer() || r["index"].get<int>() < 1) {
            errors.push_back(issue("malformed_round", "round index must be a positive integer", position));
            continue;
          }
          index = r["index"].get<int>();
        }
        if (!seen.insert(index).second) {
          errors.push_back(issue("duplicate_round", "round index " + std::to_string(index) + " appears twice", index));
          continue;
        }
        if (index != position) {
          errors.push_back(issue("round_sequence", "round at position " + std::to_string(position) +
                                                       " has index " + std::to_string(index) +
                                                       "; rounds must be numbered 1..T in order",
                                 index));
        }
        const Json entries = r.contains("entries") ? r["entries"] : Json(nullptr);
        s.rounds.push_back(parse_round_entries(entries, s, index, errors, out.warnings));
      }
    }
  }

  if (doc.contains("round_weights") && !doc["round_weights"].is_null()) {
    const auto& w = doc["round_weights"];
    std::vector<double> weights;
    bool ok = w.is_array();
    if (ok) {
      for (const auto& x : w) {
        if (!x.is_number()) ok = false;
        else weights.push_back(x.get<double>());
      }
    }
    double sum = 0.0;
    for (double x : weights) {
      if (!(x >= 0.0) || !std::isfinite(x)) ok = false;
      sum += x;
    }
    if (!ok || weights.size() != s.rounds.size() || std::abs(sum - 1.0) > 1e-10) {
      errors.push_back(issue("invalid_round_weights",
                             "round_weights must be one nonnegative weight per round, summing to 1"));
    } else {
      s.round_weights = std::move(weights);
    }
  }

  if (!errors.empty()) throw ValidationError(std::move(errors));
  return out;
}

ValidatedSession parse_session(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("malformed session JSON: ") + e.what());
  }
  return validate_session(doc);
}

ValidatedSession load_session(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_session(buf.str());
}

ValidatedSession load_session(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open session file " + path.string());
  return load_session(in);
}

std::vector<Issue> normalization_warnings(const Session& s) {
  std::vector<Issue> out;
  for (const auto& round : s.rounds) {
    for (std::size_t i = 0; i < round.experts(); ++i) {
      for (std::size_t j = 0; j < round.alternatives(); ++j) {
        if (round.swapped(i, j) == kNoSwap) continue;
        out.push_back(issue("reversed_interval",
                            "reversed interval in " + format(raw_value(round, i, j)) + " swapped to " +
                                format(round.entries(i, j)),
                            round.index, s.experts[i], s.alternatives[j]));
      }
    }
  }
  return out;
}

TwoDULV raw_value(const RoundMatrix& round, std::size_t i, std::size_t j) {
  TwoDULV v = round.entries(i, j);
  const auto flags = round.swapped(i, j);
  if (flags & kJudgmentSwapped) std::swap(v.judgment.lo, v.judgment.hi);
  if (flags & kReliabilitySwapped) std::swap(v.reliability.lo, v.reliability.hi);
  return v;
}

Json round_entries_to_json(const RoundMatrix& round, const Session& s) {
  Json entries = Json::object();
  for (std::size_t i = 0; i < round.experts(); ++i) {
    Json row = Json::object();
    for (std::size_t j = 0; j < round.alternatives(); ++j) {
      const TwoDULV v = raw_value(round, i, j);
      row[s.alternatives[j]] = Json::array({subscript_json(v.judgment.lo), subscript_json(v.judgment.hi),
                                            subscript_json(v.reliability.lo), subscript_json(v.reliability.hi)});
    }
    entries[s.experts[i]] = std::move(row);
  }
  return entries;
}

Json session_to_json(const Session& s) {
  Json doc = Json::object();
  doc["schema"] = kSessionSchema;
  doc["scale"] = Json{{"l", s.scale.l()}, {"z", s.scale.z()}};
  doc["eta"] = s.eta;
  doc["alpha"] = s.alpha;
  doc["status"] = to_string(s.status);
  doc["experts"] = s.experts;
  doc["alternatives"] = s.alternatives;
  if (s.round_weights) doc["round_weights"] = *s.round_weights;
  Json rounds = Json::array();
  for (const auto& round : s.rounds) {
    rounds.push_back(Json{{"index", round.index}, {"entries", round_entries_to_json(round, s)}});
  }
  doc["rounds"] = std::move(rounds);
  return doc;
}

std::string canonical_session(const Session& s) { return session_to_json(s).dump(2) + "\n"; }

void save_session(const Session& s, std::ostream& out) { out << canonical_session(s); }

void save_session(const Session& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write session file " + path.string());
  save_session(s, out);
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

RoundMatrix round_from_csv(std::istream& in, const Session& s, int index, std::vector<Issue>* warnings) {
  std::vector<Issue> errors, notes;
  RoundMatrix round = empty_round(s, index);
  Grid<std::uint8_t> present(s.experts.size(), s.alternatives.size(), 0);

  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"expert", "alternative", "a", "b", "c", "d"}) {
    throw ValidationError("malformed_csv", "round CSV header must be expert,alternative,a,b,c,d");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != 6) {
      errors.push_back(issue("malformed_csv", where + ": expected 6 fields", index));
      continue;
    }
    const auto i = find_name(s.experts, fields[0]);
    const auto j = find_name(s.alternatives, fields[1]);
    if (!i) {
      errors.push_back(issue("unknown_expert", where + ": expert not in roster", index, fields[0]));
      continue;
    }
    if (!j) {
      errors.push_back(issue("unknown_alternative", where + ": alternative not in roster", index, fields[0], fields[1]));
      continue;
    }
    double v[4];
    bool ok = true;
    for (int k = 0; k < 4; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(fields[2 + k].c_str(), &end);
      if (fields[2 + k].empty() || *end != '\0') ok = false;
    }
    if (!ok) {
      errors.push_back(issue("malformed_cell", where + ": subscripts must be numbers", index, fields[0], fields[1]));
      continue;
    }
    if (present(*i, *j)) {
      errors.push_back(issue("duplicate_cell", where + ": cell given twice", index, fields[0], fields[1]));
      continue;
    }
    present(*i, *j) = 1;
    place(round, *i, *j, make_dulv(v[0], v[1], v[2], v[3]), s, index, errors, notes);
  }
  for (std::size_t i = 0; i < s.experts.size(); ++i) {
    for (std::size_t j = 0; j < s.alternatives.size(); ++j) {
      if (!present(i, j)) {
        errors.push_back(issue("missing_cell", "no evaluation given", index, s.experts[i], s.alternatives[j]));
      }
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  if (warnings) warnings->insert(warnings->end(), notes.begin(), notes.end());
  return round;
}

RoundMatrix round_from_csv(const std::filesystem::path& path, const Session& s, int index,
                           std::vector<Issue>* warnings) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open round CSV " + path.string());
  return round_from_csv(in, s, index, warnings);
}

}  // namespace gdm
