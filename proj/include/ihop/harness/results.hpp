#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ihop::harness {

struct ResultRow {
  std::string scenario;
  std::string attack;
  std::string defense;
  std::size_t n = 0;
  std::size_t N_d = 0;
  std::size_t N_aux = 0;
  std::size_t rho = 0;
  std::size_t n_iters = 0;
  double p_free = 0;
  double alpha = 0;
  double tpr = 0;
  double fpr = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  double accuracy = 0;
  double runtime_s = 0;
};

extern const char* const kResultsHeader;

void write_results_header(std::ostream& out);
void write_result_row(std::ostream& out, const ResultRow& row);
/// Throws std::runtime_error on a header mismatch or malformed row.
std::vector<ResultRow> read_results_csv(std::istream& in);

struct SummaryRow {
  ResultRow config;       // rep, seed, accuracy and runtime_s are unset
  std::size_t count = 0;
  double mean_accuracy = 0;
  double ci_half_width = 0;  // 1.96 s / sqrt(k); 0 when k == 1
  double mean_runtime_s = 0;
  bool single = false;       // k == 1: the interval is undefined
};

/// Groups rows by every configuration column, in order of first appearance.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary);

}  // namespace ihop::harness
