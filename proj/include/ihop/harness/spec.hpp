#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ihop/attack/ihop.hpp"
#include "ihop/core/types.hpp"

namespace ihop::harness {

enum class AttackKind { Ihop, Sap, Freq, Ikk };
enum class DefenseKind { None, Clrz, Osse, Pancake };
enum class QueryModel { Iid, Markov };

std::string_view to_string(AttackKind a);
std::string_view to_string(DefenseKind d);
std::string_view to_string(QueryModel q);

/// One fully specified experiment configuration.
struct ExperimentSpec {
  Scenario scenario = Scenario::S1;
  AttackKind attack = AttackKind::Ihop;
  DefenseKind defense = DefenseKind::None;

  // Document source: a collection file, or the synthetic generator when empty.
  std::string corpus;
  std::size_t gen_keywords = 0;  // synthetic universe size; 0 means n
  std::size_t gen_docs = 0;      // synthetic corpus size; 0 means N_d + N_aux
  double zipf = 1.0;
  double mixing = 0.5;
  std::size_t topics = 8;
  double max_volume = 0.2;

  std::size_t n = 100;
  std::size_t N_d = 1000;
  std::size_t N_aux = 1000;
  std::size_t rho = 0;
  bool self_consistent = false;  // auxiliary documents = client documents

  // Query generation.
  QueryModel query_model = QueryModel::Iid;
  double query_zipf = 1.0;
  std::string keywords_file;  // keyword names aligned with `corpus`
  std::string freq_table;     // Google-Trends-style CSV; first half -> aux, second -> client
  std::string chain;          // n x n client chain CSV; empty: random_correlated_chain
  std::string aux_chain;      // n x n auxiliary chain CSV; empty: the client chain
  double chain_sharpness = 8.0;

  // Attack parameters.
  std::size_t n_iters = 1000;
  double p_free = 0.25;
  std::string ihop_mode = "auto";
  bool negated_complement_sign = false;
  attack::RhoCircMode rho_circ = attack::RhoCircMode::ExcludeSelf;
  double alpha = 0.5;
  double ikk_T0 = 100.0;
  double ikk_cooling = 0.99995;
  double ikk_T_min = 1e-10;

  // Defense parameters.
  double tpr = 0.9999;
  double fpr = 0.0;

  std::size_t repetitions = 30;
  std::uint64_t base_seed = 0;
  std::size_t threads = 1;

  /// Throws std::invalid_argument for combinations the scenario cannot support.
  void validate() const;
  /// The IHOP coefficient mode, resolving "auto" from scenario and defense.
  attack::CoefficientMode coefficient_mode() const;
};

/// Sets one key from its textual value; throws std::invalid_argument for an
/// unknown key or an unparsable value.
void apply_key(ExperimentSpec& spec, const std::string& key, const std::string& value);
/// All keys apply_key accepts, in documentation order.
const std::vector<std::string>& known_keys();

struct ParsedSpecFile {
  /// Key/value pairs in file order; a value list `[a, b]` becomes a sweep axis.
  std::vector<std::pair<std::string, std::vector<std::string>>> entries;
  std::vector<ExperimentSpec> configurations;  // cross product, last key fastest
};

/// `key = value` lines, `#` comments. Unknown keys, duplicates and bad values
/// are reported as std::runtime_error with the offending line number.
ParsedSpecFile parse_spec(std::istream& in, const std::string& source_name = "<spec>");
ParsedSpecFile load_spec(const std::filesystem::path& path);

}  // namespace ihop::harness
