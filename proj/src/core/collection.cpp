#include <algorithm>
#include <stdexcept>
#include <string>

#include "ihop/core/types.hpp"

namespace ihop {

DocumentCollection::DocumentCollection(std::size_t num_keywords,
                                       std::vector<std::vector<Keyword>> documents)
    : num_keywords_(num_keywords), documents_(std::move(documents)) {
  for (std::size_t d = 0; d < documents_.size(); ++d) {
    auto& doc = documents_[d];
    std::sort(doc.begin(), doc.end());
    doc.erase(std::unique(doc.begin(), doc.end()), doc.end());
    if (!doc.empty() && doc.back() >= num_keywords_)
      throw std::invalid_argument("document " + std::to_string(d) + " has keyword index " +
                                  std::to_string(doc.back()) + " >= n=" +
                                  std::to_string(num_keywords_));
  }
}

std::vector<BitVector> DocumentCollection::keyword_patterns() const {
  std::vector<BitVector> patterns(num_keywords_, BitVector(documents_.size()));
  for (std::size_t d = 0; d < documents_.size(); ++d)
    for (Keyword k : documents_[d]) patterns[k].set(d);
  return patterns;
}

std::vector<std::size_t> DocumentCollection::keyword_counts() const {
  std::vector<std::size_t> counts(num_keywords_, 0);
  for (const auto& doc : documents_)
    for (Keyword k : doc) ++counts[k];
  return counts;
}

DocumentCollection DocumentCollection::select_documents(std::span<const std::size_t> doc_ids) const {
  std::vector<std::vector<Keyword>> docs;
  docs.reserve(doc_ids.size());
  for (std::size_t d : doc_ids) {
    if (d >= documents_.size()) throw std::out_of_range("select_documents: bad document id");
    docs.push_back(documents_[d]);
  }
  return DocumentCollection(num_keywords_, std::move(docs));
}

DocumentCollection DocumentCollection::restrict_keywords(std::span<const Keyword> keywords) const {
  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> remap(num_keywords_, kAbsent);
  for (std::size_t k = 0; k < keywords.size(); ++k) {
    if (keywords[k] >= num_keywords_) throw std::out_of_range("restrict_keywords: bad keyword");
    if (remap[keywords[k]] != kAbsent) throw std::invalid_argument("restrict_keywords: duplicate keyword");
    remap[keywords[k]] = k;
  }
  std::vector<std::vector<Keyword>> docs(documents_.size());
  for (std::size_t d = 0; d < documents_.size(); ++d)
    for (Keyword k : documents_[d])
      if (remap[k] != kAbsent) docs[d].push_back(remap[k]);
  return DocumentCollection(keywords.size(), std::move(docs));
}

}  // namespace ihop
