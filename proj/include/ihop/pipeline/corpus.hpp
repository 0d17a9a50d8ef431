#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ihop/core/types.hpp"

namespace ihop::pipeline {

/// The standard 179-word English stopword list (also shipped as data/stopwords_en.txt).
const std::set<std::string>& default_stopwords();
/// One word per line; blank lines and lines starting with '#' are skipped.
std::set<std::string> load_stopwords(const std::filesystem::path& path);

struct CorpusConfig {
  std::set<std::string> stopwords = default_stopwords();
  std::size_t min_len = 3;
  std::size_t max_len = 20;
  std::size_t top_k = 3000;
  // Drop everything from the first "To unsubscribe" line (mailing-list footers).
  bool strip_unsubscribe_footer = false;

  void validate() const;
};

struct PreprocessedCorpus {
  std::vector<std::string> keywords;  // keyword id -> stem
  DocumentCollection docs;
  std::map<std::string, std::set<std::string>> stem_words;  // kept stem -> surface words
  bool truncated_request = false;  // top_k exceeded the number of distinct stems
};

/// Maximal runs of ASCII [A-Za-z0-9_].
std::vector<std::string_view> word_runs(std::string_view text);

/// The kept stems of one document in sorted order (no top-k cut).
std::set<std::string> document_stems(std::string_view text, const CorpusConfig& config,
                                     std::map<std::string, std::set<std::string>>* stem_words = nullptr);

/// Tokenize, lowercase, drop words with non-letters, stopwords and words
/// outside [min_len, max_len], stem, then keep the top_k stems by document
/// frequency (ties broken by the stem's byte order). Keyword ids follow that
/// ranking. Throws std::invalid_argument on an empty corpus.
PreprocessedCorpus preprocess_corpus(const std::vector<std::string>& raw_docs, const CorpusConfig& config);

/// Re-ranks a keyword universe by document frequency and cuts it at `top_k`.
/// Applying it to the output of preprocess_corpus with the same top_k is the identity.
PreprocessedCorpus select_top_keywords(const std::vector<std::string>& keywords,
                                       const DocumentCollection& docs, std::size_t top_k);

/// Every regular file below `dir`, in sorted path order, one document each.
/// With `path_filter` non-empty only paths containing it as a directory
/// component are read (e.g. "_sent_mail").
std::vector<std::string> read_corpus_directory(const std::filesystem::path& dir,
                                               std::string_view path_filter = {});
/// One document per line.
std::vector<std::string> read_corpus_lines(const std::filesystem::path& file);

void save_keywords(const std::filesystem::path& path, const std::vector<std::string>& keywords);
std::vector<std::string> load_keywords(const std::filesystem::path& path);

}  // namespace ihop::pipeline
