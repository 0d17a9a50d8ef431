#include "ihop/harness/results.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace ihop::harness {

const char* const kResultsHeader =
    "scenario,attack,defense,n,N_d,N_aux,rho,n_iters,p_free,alpha,tpr,fpr,rep,seed,accuracy,runtime_s";

namespace {

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

void write_config(std::ostream& out, const ResultRow& r) {
  out << r.scenario << ',' << r.attack << ',' << r.defense << ',' << r.n << ',' << r.N_d << ',' << r.N_aux << ','
      << r.rho << ',' << r.n_iters << ',' << fmt(r.p_free) << ',' << fmt(r.alpha) << ',' << fmt(r.tpr) << ','
      << fmt(r.fpr);
}

auto config_key(const ResultRow& r) {
  return std::tie(r.scenario, r.attack, r.defense, r.n, r.N_d, r.N_aux, r.rho, r.n_iters, r.p_free, r.alpha, r.tpr,
                  r.fpr);
}

}  // namespace

void write_results_header(std::ostream& out) { out << kResultsHeader << '\n'; }

void write_result_row(std::ostream& out, const ResultRow& row) {
  write_config(out, row);
  out << ',' << row.rep << ',' << row.seed << ',' << fmt(row.accuracy) << ',' << fmt(row.runtime_s) << '\n';
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("results: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) throw std::runtime_error("results: unexpected header '" + line + "'");
  std::vector<ResultRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 16) throw std::runtime_error("results line " + std::to_string(lineno) + ": expected 16 fields");
    try {
      ResultRow r;
      r.scenario = f[0];
      r.attack = f[1];
      r.defense = f[2];
      r.n = std::stoull(f[3]);
      r.N_d = std::stoull(f[4]);
      r.N_aux = std::stoull(f[5]);
      r.rho = std::stoull(f[6]);
      r.n_iters = std::stoull(f[7]);
      r.p_free = std::stod(f[8]);
      r.alpha = std::stod(f[9]);
      r.tpr = std::stod(f[10]);
      r.fpr = std::stod(f[11]);
      r.rep = std::stoull(f[12]);
      r.seed = std::stoull(f[13]);
      r.accuracy = std::stod(f[14]);
      r.runtime_s = std::stod(f[15]);
      if (!(r.accuracy >= 0 && r.accuracy <= 1)) throw std::invalid_argument("accuracy outside [0,1]");
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error("results line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::vector<SummaryRow> out;
  std::vector<std::vector<double>> acc, time;
  for (const auto& r : rows) {
    std::size_t g = 0;
    while (g < out.size() && config_key(out[g].config) != config_key(r)) ++g;
    if (g == out.size()) {
      SummaryRow s;
      s.config = r;
      s.config.rep = 0;
      s.config.seed = 0;
      s.config.accuracy = 0;
      s.config.runtime_s = 0;
      out.push_back(s);
      acc.emplace_back();
      time.emplace_back();
    }
    acc[g].push_back(r.accuracy);
    time[g].push_back(r.runtime_s);
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    const auto k = static_cast<double>(acc[g].size());
    double mean = 0, mean_t = 0;
    for (double a : acc[g]) mean += a;
    for (double t : time[g]) mean_t += t;
    mean /= k;
    mean_t /= k;
    double ss = 0;
    for (double a : acc[g]) ss += (a - mean) * (a - mean);
    out[g].count = acc[g].size();
    out[g].mean_accuracy = mean;
    out[g].mean_runtime_s = mean_t;
    out[g].single = acc[g].size() == 1;
    out[g].ci_half_width = out[g].single ? 0.0 : 1.96 * std::sqrt(ss / (k - 1)) / std::sqrt(k);
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << "scenario,attack,defense,n,N_d,N_aux,rho,n_iters,p_free,alpha,tpr,fpr,"
         "reps,mean_accuracy,ci95_half_width,mean_runtime_s,single_rep\n";
  for (const auto& s : summary) {
    write_config(out, s.config);
    out << ',' << s.count << ',' << fmt(s.mean_accuracy) << ',' << fmt(s.ci_half_width) << ','
        << fmt(s.mean_runtime_s) << ',' << (s.single ? 1 : 0) << '\n';
  }
}

}  // namespace ihop::harness
