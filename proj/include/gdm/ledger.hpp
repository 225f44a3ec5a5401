#pragma once

#include <string>
#include <vector>

#include "gdm/session.hpp"

namespace gdm {

// A known inconsistency in the published reference example: the printed
// value, what the formulas actually give, and a short classification.
struct LedgerEntry {
  std::string id;
  std::string table;
  std::string quantity;
  int round = 0;
  std::string expert;
  std::string alternative;
  std::vector<double> printed;
  std::vector<double> computed;
  std::string kind;
  std::string note;

  bool operator==(const LedgerEntry&) const = default;
};

Json ledger_entry_to_json(const LedgerEntry& entry);
LedgerEntry ledger_entry_from_json(const Json& doc);

}  // namespace gdm
