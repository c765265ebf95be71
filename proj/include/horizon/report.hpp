#pragma once

#include <map>
#include <string>
#include <vector>

#include "horizon/errors.hpp"

namespace horizon {

/// One named check with its residual and verdict.
struct ConditionEntry {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double worst_t = 0.0;
  std::string note;
};

struct VerificationReport {
  std::string scenario;
  std::vector<ConditionEntry> entries;
  std::map<std::string, bool> flags;

  bool all_pass() const;
  const ConditionEntry* find(const std::string& name) const;
  ConditionEntry& add(ConditionEntry e);
  /// Entry with the largest residual/tolerance ratio.
  const ConditionEntry* worst() const;
};

/// Round a value to 12 significant digits; applied to every number that ends
/// up in a report file so repeated runs diff cleanly.
double round_sig(double v);
std::string format_sig(double v);

/// Write `content` via a temp file in the same directory plus rename.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace horizon
