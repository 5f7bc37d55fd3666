#include "botwatch/textbase.hpp"

#include <algorithm>
#include <cmath>

#include "botwatch/cdfa.hpp"
#include "botwatch/util.hpp"

namespace botwatch::textbase {
namespace {

// UTF-8 → code points; malformed bytes decode as themselves so the distance
// is still well-defined on arbitrary input.
std::vector<char32_t> decode_utf8(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto byte = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = byte;
    if (byte >= 0xF0) {
      extra = 3;
      cp = byte & 0x07;
    } else if (byte >= 0xE0) {
      extra = 2;
      cp = byte & 0x0F;
    } else if (byte >= 0xC0) {
      extra = 1;
      cp = byte & 0x1F;
    }
    if (extra > 0 && i + extra < text.size() + 0u) {
      bool ok = true;
      for (int k = 1; k <= extra; ++k) {
        const auto cont = static_cast<unsigned char>(text[i + k]);
        if ((cont & 0xC0) != 0x80) {
          ok = false;
          break;
        }
        cp = (cp << 6) | (cont & 0x3F);
      }
      if (ok) {
        out.push_back(cp);
        i += extra + 1;
        continue;
      }
    } else if (extra == 0 && byte < 0x80) {
      out.push_back(cp);
      ++i;
      continue;
    }
    out.push_back(byte);  // stray continuation or truncated sequence
    ++i;
  }
  return out;
}

// Myers/Hyyrö bit-parallel Levenshtein over an already-decoded pattern.
// One 64-bit block per 64 pattern symbols; the text streams through.
class BlockDistance {
 public:
  explicit BlockDistance(const std::vector<char32_t>& pattern)
      : m_(pattern.size()), blocks_((pattern.size() + 63) / 64) {
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      auto& mask = eq_[pattern[i]];
      if (mask.empty()) mask.resize(blocks_, 0);
      mask[i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }

  std::size_t distance(const std::vector<char32_t>& text) const {
    if (m_ == 0) return text.size();
    std::vector<std::uint64_t> pv(blocks_, ~std::uint64_t{0});
    std::vector<std::uint64_t> mv(blocks_, 0);
    const std::uint64_t last_bit = std::uint64_t{1} << ((m_ - 1) % 64);
    std::size_t score = m_;
    static const std::vector<std::uint64_t> kZero;

    for (char32_t c : text) {
      auto found = eq_.find(c);
      const std::vector<std::uint64_t>& eq =
          found == eq_.end() ? kZero : found->second;
      // The boundary row D[0][j] = j, so every text step carries +1 into the
      // first block; seeding 0 would compute the best-suffix match instead of
      // the global distance.
      int hin = 1;
      for (std::size_t b = 0; b < blocks_; ++b) {
        const std::uint64_t high =
            b + 1 == blocks_ ? last_bit : (std::uint64_t{1} << 63);
        hin = advance(pv[b], mv[b], b < eq.size() ? eq[b] : 0, hin, high);
      }
      score += hin;
    }
    return score;
  }

 private:
  static int advance(std::uint64_t& pv, std::uint64_t& mv, std::uint64_t eq,
                     int hin, std::uint64_t high) {
    const std::uint64_t xv = eq | mv;
    if (hin < 0) eq |= 1;
    const std::uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
    std::uint64_t ph = mv | ~(xh | pv);
    std::uint64_t mh = pv & xh;
    int hout = 0;
    if (ph & high) hout = 1;
    if (mh & high) hout = -1;
    ph <<= 1;
    mh <<= 1;
    if (hin > 0) ph |= 1;
    if (hin < 0) mh |= 1;
    pv = mh | ~(xv | ph);
    mv = ph & xv;
    return hout;
  }

  std::size_t m_;
  std::size_t blocks_;
  std::unordered_map<char32_t, std::vector<std::uint64_t>> eq_;
};

double mean_pairwise(const std::vector<std::string_view>& texts,
                     std::size_t truncate_chars) {
  if (texts.size() < 2) return 0.0;
  std::vector<std::vector<char32_t>> decoded;
  decoded.reserve(texts.size());
  for (auto text : texts) {
    decoded.push_back(decode_utf8(utf8_truncate(text, truncate_chars)));
  }
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < decoded.size(); ++i) {
    BlockDistance pattern(decoded[i]);
    for (std::size_t j = i + 1; j < decoded.size(); ++j) {
      total += static_cast<double>(pattern.distance(decoded[j]));
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

}  // namespace

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a == b) return 0;
  const std::vector<char32_t> da = decode_utf8(a);
  const std::vector<char32_t> db = decode_utf8(b);
  // Fewer pattern blocks when the shorter string drives the bitmasks.
  if (da.size() <= db.size()) return BlockDistance(da).distance(db);
  return BlockDistance(db).distance(da);
}

std::int64_t frequent_word_count(const corpus::AccountRecord& account) {
  cdfa::ArticleSet articles;
  articles.source = cdfa::Source::content;
  for (const auto& comment : account.comments) {
    if (comment.is_blog()) {
      articles.articles.push_back(cdfa::tokenize(comment.body));
    }
  }
  if (articles.articles.empty()) return 0;
  bool any_word = false;
  for (const auto& article : articles.articles) {
    if (!article.empty()) {
      any_word = true;
      break;
    }
  }
  if (!any_word) return 0;
  const cdfa::OccurrenceModel model = cdfa::build_occurrence(articles);
  std::int64_t count = 0;
  for (auto flag : model.frequent_mask) count += flag;
  return count;
}

TfidfTable::TfidfTable(const corpus::LabeledCorpus& corpus,
                       const TextbaseParams& params) {
  documents_ = corpus.accounts.size();
  std::unordered_map<std::string, std::int64_t> corpus_count;
  std::vector<std::unordered_map<std::string, std::int64_t>> per_account;
  per_account.reserve(documents_);

  for (const auto& account : corpus.accounts) {
    auto& counts = per_account.emplace_back();
    for (const auto& comment : account.comments) {
      for (auto& word : cdfa::tokenize(comment.body)) {
        ++counts[word];
      }
    }
    for (const auto& [word, count] : counts) corpus_count[word] += count;
  }

  for (std::size_t i = 0; i < corpus.accounts.size(); ++i) {
    auto& kept = term_frequency_[corpus.accounts[i].name];
    for (const auto& [word, count] : per_account[i]) {
      if (corpus_count.at(word) >= params.tfidf_min_count) {
        kept.emplace(word, count);
        ++document_frequency_[word];
      }
    }
  }
}

double TfidfTable::weight(const std::string& account,
                          const std::string& word) const {
  auto doc = term_frequency_.find(account);
  if (doc == term_frequency_.end()) return 0.0;
  auto tf = doc->second.find(word);
  if (tf == doc->second.end()) return 0.0;
  const auto df = document_frequency_.at(word);
  return static_cast<double>(tf->second) *
         std::log(static_cast<double>(documents_) / static_cast<double>(df));
}

std::pair<double, double> TfidfTable::summary(const std::string& account) const {
  auto doc = term_frequency_.find(account);
  if (doc == term_frequency_.end() || doc->second.empty()) return {0.0, 0.0};
  double total = 0.0;
  double max_weight = 0.0;
  for (const auto& [word, tf] : doc->second) {
    const auto df = document_frequency_.at(word);
    const double w =
        static_cast<double>(tf) *
        std::log(static_cast<double>(documents_) / static_cast<double>(df));
    total += w;
    max_weight = std::max(max_weight, w);
  }
  return {total / static_cast<double>(doc->second.size()), max_weight};
}

LevenshteinMeans levenshtein_regularity(const corpus::AccountRecord& account,
                                        const TextbaseParams& params) {
  LevenshteinMeans means;
  std::vector<std::string_view> titles;
  std::vector<std::string_view> contents;
  std::vector<std::string_view> replies;
  for (const auto& comment : account.comments) {
    if (comment.is_blog()) {
      titles.push_back(comment.title);
      contents.push_back(comment.body);
    } else {
      replies.push_back(comment.body);
    }
  }
  if (contents.size() >= params.lev_max_posts ||
      replies.size() >= params.lev_max_replies) {
    means.sampled_out = true;
    return means;
  }
  means.title = mean_pairwise(titles, params.lev_truncate_chars);
  means.content = mean_pairwise(contents, params.lev_truncate_chars);
  means.reply = mean_pairwise(replies, params.lev_truncate_chars);
  return means;
}

}  // namespace botwatch::textbase
