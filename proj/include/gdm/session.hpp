#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gdm/error.hpp"
#include "gdm/grid.hpp"
#include "gdm/linguistic.hpp"

namespace gdm {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSessionSchema = "gdm/1";

enum class SessionStatus { Open, Finalized };

struct Session {
  LinguisticScale scale;
  std::vector<std::string> experts;
  std::vector<std::string> alternatives;
  std::vector<RoundMatrix> rounds;  // indices 1..T in order
  double eta = 0.4;
  double alpha = 1.0;
  std::optional<std::vector<double>> round_weights;  // default 1/T each
  SessionStatus status = SessionStatus::Open;

  bool operator==(const Session&) const = default;
};

struct ValidatedSession {
  Session session;
  std::vector<Issue> warnings;
};

// Checks a session document and canonicalizes every cell. Throws FormatError
// for an unknown schema, ValidationError listing every failure otherwise.
// "rounds" may be absent (a definition with no rounds yet).
ValidatedSession validate_session(const Json& doc);
ValidatedSession parse_session(std::string_view text);
ValidatedSession load_session(const std::filesystem::path& path);
ValidatedSession load_session(std::istream& in);

// Reversed-interval notices reconstructed from the rounds' swap flags.
std::vector<Issue> normalization_warnings(const Session& session);

Json session_to_json(const Session& session);
// Stable text form: two-space indented JSON with a trailing newline.
std::string canonical_session(const Session& session);
void save_session(const Session& session, const std::filesystem::path& path);
void save_session(const Session& session, std::ostream& out);

// Parses one round grid ({"e1": {"a1": [a,b,c,d], ...}, ...}) against the
// session's rosters and scale. Errors and warnings are appended to the lists.
RoundMatrix parse_round_entries(const Json& entries, const Session& session, int index,
                                std::vector<Issue>& errors, std::vector<Issue>& warnings);

// Throws ValidationError with the complete issue list.
RoundMatrix round_from_json(const Json& entries, const Session& session, int index,
                            std::vector<Issue>* warnings = nullptr);

// One round from CSV with header `expert,alternative,a,b,c,d`.
RoundMatrix round_from_csv(std::istream& in, const Session& session, int index,
                           std::vector<Issue>* warnings = nullptr);
RoundMatrix round_from_csv(const std::filesystem::path& path, const Session& session, int index,
                           std::vector<Issue>* warnings = nullptr);

Json round_entries_to_json(const RoundMatrix& round, const Session& session);

// Cells of a RoundMatrix as a raw (uncanonicalized) value, reversing the swap
// recorded at ingest.
TwoDULV raw_value(const RoundMatrix& round, std::size_t expert, std::size_t alternative);

// Serializes a subscript as an integer when it is one.
Json subscript_json(double v);
// Rounds to 12 significant digits.
double round12(double v);

std::string to_string(SessionStatus status);

}  // namespace gdm
