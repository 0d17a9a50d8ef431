#include "ihop/pipeline/frequency.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ihop::pipeline {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Vector normalized_mean(const Matrix& block) {
  Vector v = block.rowwise().mean();
  const double total = v.sum();
  if (!(total > 0)) throw std::invalid_argument("split_halves: a half has zero total frequency");
  return v / total;
}

}  // namespace

FrequencyTable parse_frequency_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("frequency table: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  if (header.size() < 2 || header[0] != "keyword")
    throw std::runtime_error("frequency table: header must be keyword,period_1,...");
  const std::size_t periods = header.size() - 1;

  FrequencyTable t;
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != periods + 1)
      throw std::runtime_error("frequency table line " + std::to_string(lineno) + ": expected " +
                               std::to_string(periods + 1) + " fields");
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      try {
        row.push_back(std::stod(cells[c]));
      } catch (const std::exception&) {
        throw std::runtime_error("frequency table line " + std::to_string(lineno) + ": bad number '" + cells[c] + "'");
      }
      if (row.back() < 0) throw std::runtime_error("frequency table line " + std::to_string(lineno) + ": negative value");
    }
    t.keywords.push_back(cells[0]);
    rows.push_back(std::move(row));
  }
  t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(periods));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < periods; ++c)
      t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return t;
}

FrequencyTable load_frequency_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_frequency_table(in);
}

FrequencySplit split_halves(const FrequencyTable& table) {
  const auto k = table.values.cols();
  if (k == 0 || table.values.rows() == 0) throw std::invalid_argument("split_halves: empty table");
  if (k == 1) {
    const Vector v = normalized_mean(table.values);
    return {v, v};
  }
  const auto half = k / 2;
  return {normalized_mean(table.values.leftCols(half)), normalized_mean(table.values.rightCols(k - half))};
}

FrequencyTable align_frequency_table(const FrequencyTable& table, const std::vector<std::string>& keywords) {
  std::map<std::string, Eigen::Index> row_of;
  for (std::size_t r = 0; r < table.keywords.size(); ++r) row_of[table.keywords[r]] = static_cast<Eigen::Index>(r);
  FrequencyTable out;
  out.keywords = keywords;
  out.values = Matrix::Zero(static_cast<Eigen::Index>(keywords.size()), table.values.cols());
  for (std::size_t r = 0; r < keywords.size(); ++r)
    if (auto it = row_of.find(keywords[r]); it != row_of.end())
      out.values.row(static_cast<Eigen::Index>(r)) = table.values.row(it->second);
  return out;
}

}  // namespace ihop::pipeline
