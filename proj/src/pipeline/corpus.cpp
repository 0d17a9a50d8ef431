#include "ihop/pipeline/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "ihop/pipeline/porter.hpp"

namespace ihop::pipeline {

namespace {

constexpr std::string_view kStopwords =
    "i me my myself we our ours ourselves you you're you've you'll you'd your yours yourself "
    "yourselves he him his himself she she's her hers herself it it's its itself they them "
    "their theirs themselves what which who whom this that that'll these those am is are was "
    "were be been being have has had having do does did doing a an the and but if or because "
    "as until while of at by for with about against between into through during before after "
    "above below to from up down in out on off over under again further then once here there "
    "when where why how all any both each few more most other some such no nor not only own "
    "same so than too very s t can will just don don't should should've now d ll m o re ve y "
    "ain aren aren't couldn couldn't didn didn't doesn doesn't hadn hadn't hasn hasn't haven "
    "haven't isn isn't ma mightn mightn't mustn mustn't needn needn't shan shan't shouldn "
    "shouldn't wasn wasn't weren weren't won won't wouldn wouldn't ";

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool all_letters(std::string_view w) {
  return std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

std::string lowercase(std::string_view w) {
  std::string out(w);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::string_view strip_footer(std::string_view text) {
  const auto pos = text.find("To unsubscribe");
  return pos == std::string_view::npos ? text : text.substr(0, pos);
}

}  // namespace

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = [] {
    std::set<std::string> out;
    std::istringstream in{std::string(kStopwords)};
    for (std::string w; in >> w;) out.insert(w);
    return out;
  }();
  return words;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword file " + path.string());
  std::set<std::string> out;
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    out.insert(lowercase(line));
  }
  return out;
}

void CorpusConfig::validate() const {
  if (min_len > max_len) throw std::invalid_argument("CorpusConfig: min_len > max_len");
  if (top_k == 0) throw std::invalid_argument("CorpusConfig: top_k must be positive");
}

std::vector<std::string_view> word_runs(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_char(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && is_word_char(text[i])) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::set<std::string> document_stems(std::string_view text, const CorpusConfig& config,
                                     std::map<std::string, std::set<std::string>>* stem_words) {
  if (config.strip_unsubscribe_footer) text = strip_footer(text);
  std::set<std::string> stems;
  for (auto run : word_runs(text)) {
    const std::string word = lowercase(run);
    if (!all_letters(word)) continue;
    if (config.stopwords.count(word)) continue;
    if (word.size() < config.min_len || word.size() > config.max_len) continue;
    std::string stem = porter_stem(word);
    if (stem_words) (*stem_words)[stem].insert(word);
    stems.insert(std::move(stem));
  }
  return stems;
}

PreprocessedCorpus select_top_keywords(const std::vector<std::string>& keywords,
                                       const DocumentCollection& docs, std::size_t top_k) {
  if (keywords.size() != docs.num_keywords())
    throw std::invalid_argument("select_top_keywords: keyword names do not match the collection");
  const auto counts = docs.keyword_counts();
  std::vector<Keyword> order(keywords.size());
  for (Keyword k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](Keyword a, Keyword b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return keywords[a] < keywords[b];
  });
  PreprocessedCorpus out;
  out.truncated_request = top_k > order.size();
  order.resize(std::min(top_k, order.size()));
  for (Keyword k : order) out.keywords.push_back(keywords[k]);
  out.docs = docs.restrict_keywords(order);
  return out;
}

PreprocessedCorpus preprocess_corpus(const std::vector<std::string>& raw_docs, const CorpusConfig& config) {
  config.validate();
  if (raw_docs.empty()) throw std::invalid_argument("preprocess_corpus: empty corpus");

  std::map<std::string, std::set<std::string>> stem_words;
  std::vector<std::set<std::string>> per_doc;
  per_doc.reserve(raw_docs.size());
  for (const auto& text : raw_docs) per_doc.push_back(document_stems(text, config, &stem_words));

  // Universe in byte order first, so ids never depend on document order.
  std::vector<std::string> names;
  names.reserve(stem_words.size());
  for (const auto& entry : stem_words) names.push_back(entry.first);
  std::vector<std::vector<Keyword>> ids(per_doc.size());
  for (std::size_t d = 0; d < per_doc.size(); ++d)
    for (const auto& s : per_doc[d])
      ids[d].push_back(static_cast<Keyword>(std::lower_bound(names.begin(), names.end(), s) - names.begin()));

  auto out = select_top_keywords(names, DocumentCollection(names.size(), std::move(ids)), config.top_k);
  if (out.truncated_request)
    std::cerr << "warning: top_k=" << config.top_k << " exceeds the " << names.size()
              << " distinct stems; keeping all\n";
  for (const auto& k : out.keywords) out.stem_words[k] = stem_words[k];
  return out;
}

std::vector<std::string> read_corpus_directory(const std::filesystem::path& dir, std::string_view path_filter) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (!path_filter.empty()) {
      const auto rel = fs::relative(entry.path(), dir);
      bool keep = false;
      for (const auto& part : rel.parent_path())
        if (part.string() == path_filter) keep = true;
      if (!keep) continue;
    }
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::string> docs;
  docs.reserve(files.size());
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    docs.push_back(buf.str());
  }
  return docs;
}

std::vector<std::string> read_corpus_lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open corpus file " + file.string());
  std::vector<std::string> docs;
  for (std::string line; std::getline(in, line);) docs.push_back(line);
  return docs;
}

void save_keywords(const std::filesystem::path& path, const std::vector<std::string>& keywords) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& k : keywords) out << k << '\n';
}

std::vector<std::string> load_keywords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

}  // namespace ihop::pipeline
