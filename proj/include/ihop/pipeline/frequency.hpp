#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ihop/core/types.hpp"

namespace ihop::pipeline {

/// Query volumes per keyword (rows) and period (columns).
struct FrequencyTable {
  std::vector<std::string> keywords;
  Matrix values;
};

/// CSV `keyword,period_1,...,period_k` with that header row.
FrequencyTable parse_frequency_table(std::istream& in);
FrequencyTable load_frequency_table(const std::filesystem::path& path);

struct FrequencySplit {
  Vector ftilde;  // mean over the first half of the periods
  Vector freal;   // mean over the second half
};

/// Averages each half of the period columns and renormalizes to unit mass.
/// With a single period both halves are that period.
FrequencySplit split_halves(const FrequencyTable& table);

/// Reorders rows to `keywords`; keywords missing from the table get zero rows.
FrequencyTable align_frequency_table(const FrequencyTable& table, const std::vector<std::string>& keywords);

}  // namespace ihop::pipeline
