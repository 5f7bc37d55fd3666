#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "botwatch/corpus.hpp"

namespace botwatch::textbase {

struct TextbaseParams {
  // Accounts at or above either cap are excluded from the edit-distance
  // feature (reported as zeros) instead of burning quadratic time.
  std::size_t lev_max_posts = 500;
  std::size_t lev_max_replies = 500;
  // Texts longer than this many characters are truncated for the distance.
  std::size_t lev_truncate_chars = 2000;
  // Words need at least this many corpus-wide occurrences to get a weight.
  std::int64_t tfidf_min_count = 10;
};

// Unit-cost Levenshtein distance over Unicode code points (bit-parallel;
// linear in max(len)/64 * min-ish, fine for post-sized texts).
std::size_t levenshtein(std::string_view a, std::string_view b);

// |F| from the account's occurrence model over blog bodies; 0 when the
// account has no blogs or they contain no words.
std::int64_t frequent_word_count(const corpus::AccountRecord& account);

// Corpus-wide TF-IDF table. One document per account: all blog and reply
// bodies concatenated. Only words with at least `tfidf_min_count` total
// occurrences across the corpus carry weights.
class TfidfTable {
 public:
  TfidfTable(const corpus::LabeledCorpus& corpus, const TextbaseParams& params);

  // tf(word, account) × ln(N_docs / df(word)); 0 for ineligible words.
  double weight(const std::string& account, const std::string& word) const;

  // (mean, max) weight over the account's eligible words; (0, 0) if none.
  std::pair<double, double> summary(const std::string& account) const;

  std::size_t eligible_words() const { return document_frequency_.size(); }

 private:
  std::size_t documents_ = 0;
  std::unordered_map<std::string, std::int64_t> document_frequency_;
  std::unordered_map<std::string,
                     std::unordered_map<std::string, std::int64_t>>
      term_frequency_;  // account → word → count (eligible words only)
};

struct LevenshteinMeans {
  double title = 0.0;
  double content = 0.0;
  double reply = 0.0;
  bool sampled_out = false;  // hit the <500 posts / <500 replies rule
};

// Mean pairwise edit distance within blog titles, blog bodies, and reply
// bodies; a category with fewer than two texts contributes 0.
LevenshteinMeans levenshtein_regularity(const corpus::AccountRecord& account,
                                        const TextbaseParams& params = {});

}  // namespace botwatch::textbase
