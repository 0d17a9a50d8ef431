#include "ihop/core/io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ihop::io {

namespace {

std::size_t parse_header_field(const std::string& header, const std::string& key) {
  std::istringstream ss(header);
  std::string item;
  while (ss >> item) {
    if (item.rfind(key + "=", 0) == 0) return std::stoul(item.substr(key.size() + 1));
  }
  throw std::runtime_error("collection header lacks '" + key + "=': " + header);
}

std::vector<double> split_doubles(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

}  // namespace

void write_collection(std::ostream& out, const DocumentCollection& docs) {
  out << "n=" << docs.num_keywords() << " N_d=" << docs.num_docs() << '\n';
  for (const auto& doc : docs.documents()) {
    for (std::size_t i = 0; i < doc.size(); ++i) out << (i ? " " : "") << doc[i];
    out << '\n';
  }
}

DocumentCollection read_collection(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("collection: missing header line");
  const std::size_t n = parse_header_field(header, "n");
  const std::size_t num_docs = parse_header_field(header, "N_d");
  std::vector<std::vector<Keyword>> docs;
  docs.reserve(num_docs);
  std::string line;
  while (docs.size() < num_docs && std::getline(in, line)) {
    std::istringstream ss(line);
    std::vector<Keyword> doc;
    Keyword k;
    while (ss >> k) doc.push_back(k);
    if (!ss.eof()) throw std::runtime_error("collection: malformed line " + std::to_string(docs.size() + 2));
    docs.push_back(std::move(doc));
  }
  if (docs.size() != num_docs)
    throw std::runtime_error("collection: header promises " + std::to_string(num_docs) +
                             " documents, found " + std::to_string(docs.size()));
  return DocumentCollection(n, std::move(docs));
}

void save_collection(const std::filesystem::path& path, const DocumentCollection& docs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_collection(out, docs);
}

DocumentCollection load_collection(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_collection(in);
}

void write_vector_csv(std::ostream& out, const Vector& v) {
  out << "value\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << v(i) << '\n';
}

Vector read_vector_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("vector csv: missing header");
  std::vector<double> values;
  while (std::getline(in, line))
    if (!line.empty()) values.push_back(std::stod(line));
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? ",c" : "c") << c;
  out << '\n' << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << m(r, c);
    out << '\n';
  }
}

Matrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("matrix csv: missing header");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(split_doubles(line));
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != c)
      throw std::runtime_error("matrix csv: ragged row " + std::to_string(i + 2));
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace ihop::io
