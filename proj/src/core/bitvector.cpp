#include <bit>
#include <stdexcept>
#include <string>

#include "ihop/core/types.hpp"

namespace ihop {

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::S1: return "S1";
    case Scenario::S2: return "S2";
    case Scenario::S3: return "S3";
  }
  return "?";
}

Scenario parse_scenario(std::string_view text) {
  if (text == "S1" || text == "s1") return Scenario::S1;
  if (text == "S2" || text == "s2") return Scenario::S2;
  if (text == "S3" || text == "s3") return Scenario::S3;
  throw std::invalid_argument("unknown scenario '" + std::string(text) + "'");
}

BitVector::BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

void BitVector::set(std::size_t i, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (value)
    words_[i >> 6] |= mask;
  else
    words_[i >> 6] &= ~mask;
}

std::size_t BitVector::count() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t BitVector::and_count(const BitVector& other) const {
  if (other.size_ != size_) throw std::invalid_argument("BitVector: size mismatch");
  std::size_t total = 0;
  for (std::size_t k = 0; k < words_.size(); ++k)
    total += static_cast<std::size_t>(std::popcount(words_[k] & other.words_[k]));
  return total;
}

std::size_t BitVector::or_count(const BitVector& other) const {
  if (other.size_ != size_) throw std::invalid_argument("BitVector: size mismatch");
  std::size_t total = 0;
  for (std::size_t k = 0; k < words_.size(); ++k)
    total += static_cast<std::size_t>(std::popcount(words_[k] | other.words_[k]));
  return total;
}

bool Assignment::is_injective(std::size_t num_keywords) const {
  std::vector<char> seen(num_keywords, 0);
  for (Keyword k : map_) {
    if (k >= num_keywords || seen[k]) return false;
    seen[k] = 1;
  }
  return true;
}

}  // namespace ihop
