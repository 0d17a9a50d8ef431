#include "ihop/harness/spec.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ihop::harness {

std::string_view to_string(AttackKind a) {
  switch (a) {
    case AttackKind::Ihop: return "ihop";
    case AttackKind::Sap: return "sap";
    case AttackKind::Freq: return "freq";
    case AttackKind::Ikk: return "ikk";
  }
  return "?";
}

std::string_view to_string(DefenseKind d) {
  switch (d) {
    case DefenseKind::None: return "none";
    case DefenseKind::Clrz: return "clrz";
    case DefenseKind::Osse: return "osse";
    case DefenseKind::Pancake: return "pancake";
  }
  return "?";
}

std::string_view to_string(QueryModel q) { return q == QueryModel::Iid ? "iid" : "markov"; }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t parse_count(const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::invalid_argument("expected a nonnegative integer, got '" + v + "'");
  return static_cast<std::size_t>(x);
}

double parse_real(const std::string& v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::invalid_argument("expected a number, got '" + v + "'");
  return x;
}

bool parse_flag(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected true/false, got '" + v + "'");
}

template <typename E>
E parse_choice(const std::string& v, std::initializer_list<E> options) {
  std::string allowed;
  for (E e : options) {
    if (v == to_string(e)) return e;
    allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(e));
  }
  throw std::invalid_argument("expected one of {" + allowed + "}, got '" + v + "'");
}

using Setter = std::function<void(ExperimentSpec&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"scenario", [](ExperimentSpec& s, const std::string& v) { s.scenario = parse_scenario(v); }},
      {"attack", [](ExperimentSpec& s, const std::string& v) {
         s.attack = parse_choice(v, {AttackKind::Ihop, AttackKind::Sap, AttackKind::Freq, AttackKind::Ikk});
       }},
      {"defense", [](ExperimentSpec& s, const std::string& v) {
         s.defense = parse_choice(v, {DefenseKind::None, DefenseKind::Clrz, DefenseKind::Osse, DefenseKind::Pancake});
       }},
      {"corpus", [](ExperimentSpec& s, const std::string& v) { s.corpus = v; }},
      {"gen_keywords", [](ExperimentSpec& s, const std::string& v) { s.gen_keywords = parse_count(v); }},
      {"gen_docs", [](ExperimentSpec& s, const std::string& v) { s.gen_docs = parse_count(v); }},
      {"zipf", [](ExperimentSpec& s, const std::string& v) { s.zipf = parse_real(v); }},
      {"mixing", [](ExperimentSpec& s, const std::string& v) { s.mixing = parse_real(v); }},
      {"topics", [](ExperimentSpec& s, const std::string& v) { s.topics = parse_count(v); }},
      {"max_volume", [](ExperimentSpec& s, const std::string& v) { s.max_volume = parse_real(v); }},
      {"n", [](ExperimentSpec& s, const std::string& v) { s.n = parse_count(v); }},
      {"N_d", [](ExperimentSpec& s, const std::string& v) { s.N_d = parse_count(v); }},
      {"N_aux", [](ExperimentSpec& s, const std::string& v) { s.N_aux = parse_count(v); }},
      {"rho", [](ExperimentSpec& s, const std::string& v) { s.rho = parse_count(v); }},
      {"self_consistent", [](ExperimentSpec& s, const std::string& v) { s.self_consistent = parse_flag(v); }},
      {"query_model", [](ExperimentSpec& s, const std::string& v) {
         s.query_model = parse_choice(v, {QueryModel::Iid, QueryModel::Markov});
       }},
      {"query_zipf", [](ExperimentSpec& s, const std::string& v) { s.query_zipf = parse_real(v); }},
      {"keywords_file", [](ExperimentSpec& s, const std::string& v) { s.keywords_file = v; }},
      {"freq_table", [](ExperimentSpec& s, const std::string& v) { s.freq_table = v; }},
      {"chain", [](ExperimentSpec& s, const std::string& v) { s.chain = v; }},
      {"aux_chain", [](ExperimentSpec& s, const std::string& v) { s.aux_chain = v; }},
      {"chain_sharpness", [](ExperimentSpec& s, const std::string& v) { s.chain_sharpness = parse_real(v); }},
      {"n_iters", [](ExperimentSpec& s, const std::string& v) { s.n_iters = parse_count(v); }},
      {"p_free", [](ExperimentSpec& s, const std::string& v) { s.p_free = parse_real(v); }},
      {"ihop_mode", [](ExperimentSpec& s, const std::string& v) {
         if (v != "auto") attack::parse_coefficient_mode(v);
         s.ihop_mode = v;
       }},
      {"negated_complement_sign", [](ExperimentSpec& s, const std::string& v) { s.negated_complement_sign = parse_flag(v); }},
      {"rho_circ", [](ExperimentSpec& s, const std::string& v) {
         if (v == "exclude_self") s.rho_circ = attack::RhoCircMode::ExcludeSelf;
         else if (v == "pooled") s.rho_circ = attack::RhoCircMode::Pooled;
         else throw std::invalid_argument("expected exclude_self or pooled, got '" + v + "'");
       }},
      {"alpha", [](ExperimentSpec& s, const std::string& v) { s.alpha = parse_real(v); }},
      {"ikk_T0", [](ExperimentSpec& s, const std::string& v) { s.ikk_T0 = parse_real(v); }},
      {"ikk_cooling", [](ExperimentSpec& s, const std::string& v) { s.ikk_cooling = parse_real(v); }},
      {"ikk_T_min", [](ExperimentSpec& s, const std::string& v) { s.ikk_T_min = parse_real(v); }},
      {"tpr", [](ExperimentSpec& s, const std::string& v) { s.tpr = parse_real(v); }},
      {"fpr", [](ExperimentSpec& s, const std::string& v) { s.fpr = parse_real(v); }},
      {"repetitions", [](ExperimentSpec& s, const std::string& v) { s.repetitions = parse_count(v); }},
      {"base_seed", [](ExperimentSpec& s, const std::string& v) { s.base_seed = parse_count(v); }},
      {"threads", [](ExperimentSpec& s, const std::string& v) { s.threads = parse_count(v); }},
  };
  return table;
}

void fail(bool bad, const std::string& message) {
  if (bad) throw std::invalid_argument(message);
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& entry : setters()) out.push_back(entry.first);
    return out;
  }();
  return keys;
}

void apply_key(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  for (const auto& [name, set] : setters())
    if (name == key) {
      set(spec, value);
      return;
    }
  throw std::invalid_argument("unknown key '" + key + "'");
}

attack::CoefficientMode ExperimentSpec::coefficient_mode() const {
  using M = attack::CoefficientMode;
  if (ihop_mode != "auto") return attack::parse_coefficient_mode(ihop_mode);
  if (defense == DefenseKind::Pancake) return M::Pancake;
  switch (scenario) {
    case Scenario::S1: return M::Volume;
    case Scenario::S2: return M::VolumeFreqIid;
    case Scenario::S3: return query_model == QueryModel::Markov ? M::Markov : M::FreqIid;
  }
  return M::Volume;
}

void ExperimentSpec::validate() const {
  fail(n == 0, "n must be positive");
  fail(repetitions == 0, "repetitions must be positive");
  const bool has_docs = scenario != Scenario::S3;
  if (has_docs) {
    fail(N_d == 0, "N_d must be positive in S1/S2");
    fail(!self_consistent && N_aux == 0, "N_aux must be positive unless self_consistent is set");
  }
  fail(scenario == Scenario::S1 && rho != 0, "S1 has no queries: rho must be 0");
  fail(scenario != Scenario::S1 && rho == 0, "S2/S3 need rho >= 1");
  fail(scenario == Scenario::S1 && attack == AttackKind::Freq, "freq needs query frequencies, unavailable in S1");
  fail(scenario == Scenario::S3 && (attack == AttackKind::Sap || attack == AttackKind::Ikk),
       "S3 leaks no volumes: sap and ikk are unavailable");
  fail(defense == DefenseKind::Pancake && scenario != Scenario::S3, "pancake runs only in S3");
  fail(defense == DefenseKind::Pancake && attack != AttackKind::Ihop, "pancake is attacked by ihop only");
  fail(defense == DefenseKind::Osse && scenario != Scenario::S2, "osse runs only in S2");
  fail(defense == DefenseKind::Clrz && scenario == Scenario::S3, "clrz affects volumes, absent in S3");
  if (defense == DefenseKind::Clrz || defense == DefenseKind::Osse)
    fail(!(fpr >= 0 && fpr <= tpr && tpr <= 1), "need 0 <= fpr <= tpr <= 1");
  fail(!(p_free > 0 && p_free < 1), "p_free must lie in (0,1)");
  fail(!(alpha >= 0 && alpha <= 1), "alpha must lie in [0,1]");
  fail(!(ikk_cooling > 0 && ikk_cooling < 1) || !(ikk_T_min > 0 && ikk_T_min < ikk_T0), "invalid IKK schedule");
  fail(!(mixing >= 0 && mixing <= 1), "mixing must lie in [0,1]");
  fail(corpus.empty() && gen_keywords != 0 && gen_keywords < n, "gen_keywords must be >= n");
  fail(!keywords_file.empty() && corpus.empty(), "keywords_file needs corpus");
  fail(!freq_table.empty() && keywords_file.empty() && scenario != Scenario::S3, "freq_table needs keywords_file");
  fail(threads == 0, "threads must be positive");

  if (attack == AttackKind::Ihop) {
    using M = attack::CoefficientMode;
    const M mode = coefficient_mode();
    const bool needs_volume = mode == M::Volume || mode == M::VolumeFreqIid;
    const bool needs_freq = mode == M::FreqIid || mode == M::VolumeFreqIid;
    fail(needs_volume && scenario == Scenario::S3, "ihop mode needs volumes, absent in S3");
    fail(needs_freq && scenario == Scenario::S1, "ihop mode needs frequencies, absent in S1");
    fail(mode == M::Markov && scenario != Scenario::S3, "markov mode is for S3 token sequences");
    fail(mode == M::Pancake && defense != DefenseKind::Pancake, "pancake mode needs defense = pancake");
  }
}

ParsedSpecFile parse_spec(std::istream& in, const std::string& source_name) {
  ParsedSpecFile out;
  std::map<std::string, std::size_t> seen;
  std::string raw;
  std::size_t lineno = 0;
  auto error = [&](const std::string& what) {
    return std::runtime_error(source_name + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw error("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool known = false;
    for (const auto& k : known_keys()) known = known || k == key;
    if (!known) throw error("unknown key '" + key + "'");
    if (seen.count(key)) throw error("duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) + ")");
    seen[key] = lineno;

    std::vector<std::string> values;
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']') throw error("unterminated list");
      std::stringstream items(value.substr(1, value.size() - 2));
      for (std::string item; std::getline(items, item, ',');) values.push_back(trim(item));
      if (values.empty() || (values.size() == 1 && values[0].empty())) throw error("empty list");
    } else {
      values.push_back(value);
    }
    ExperimentSpec probe;
    for (const auto& v : values) {
      try {
        apply_key(probe, key, v);
      } catch (const std::invalid_argument& e) {
        throw error(key + ": " + e.what());
      }
    }
    out.entries.emplace_back(key, std::move(values));
  }

  // Cross product; the last key varies fastest.
  std::vector<std::size_t> idx(out.entries.size(), 0);
  while (true) {
    ExperimentSpec spec;
    for (std::size_t e = 0; e < out.entries.size(); ++e) apply_key(spec, out.entries[e].first, out.entries[e].second[idx[e]]);
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(source_name + ": invalid configuration #" + std::to_string(out.configurations.size() + 1) +
                               ": " + e.what());
    }
    out.configurations.push_back(std::move(spec));
    std::size_t e = out.entries.size();
    while (e > 0 && ++idx[e - 1] == out.entries[e - 1].second.size()) idx[--e] = 0;
    if (e == 0) return out;
  }
}

ParsedSpecFile load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file " + path.string());
  return parse_spec(in, path.string());
}

}  // namespace ihop::harness
