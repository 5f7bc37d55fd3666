// Shared fixtures and independent oracles for the test suites. Oracles are
// deliberately naive re-implementations (different algorithms, no shared
// code paths with the library) used to cross-check derived values.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "botwatch/corpus.hpp"

namespace test_support {

// --- fixture builders -------------------------------------------------------

inline botwatch::corpus::CommentRecord blog(
    std::string author, std::string permlink, std::int64_t created_at,
    std::string body = "", std::string title = "",
    std::vector<std::string> tags = {}) {
  botwatch::corpus::CommentRecord c;
  c.author = std::move(author);
  c.permlink = std::move(permlink);
  c.depth = 0;
  c.title = std::move(title);
  c.body = std::move(body);
  c.tags = std::move(tags);
  c.created_at = created_at;
  return c;
}

inline botwatch::corpus::CommentRecord reply(
    std::string author, std::string permlink, std::string parent_id, int depth,
    std::int64_t created_at, std::string body = "") {
  botwatch::corpus::CommentRecord c;
  c.author = std::move(author);
  c.permlink = std::move(permlink);
  c.parent_id = std::move(parent_id);
  c.depth = depth;
  c.body = std::move(body);
  c.created_at = created_at;
  return c;
}

inline botwatch::corpus::AccountRecord account(std::string name,
                                               std::int64_t created_at = 0,
                                               std::string creator = "x") {
  botwatch::corpus::AccountRecord a;
  a.name = std::move(name);
  a.created_at = created_at;
  a.creator = std::move(creator);
  return a;
}

inline void sort_comments(botwatch::corpus::AccountRecord& a) {
  std::sort(a.comments.begin(), a.comments.end(),
            [](const auto& l, const auto& r) {
              return std::tie(l.created_at, l.permlink) <
                     std::tie(r.created_at, r.permlink);
            });
}

// --- occurrence-model oracle -------------------------------------------------
// Enumerates vectors and distances directly from word sets, no shared code
// with the library implementation.

struct OccurrenceOracle {
  std::vector<std::string> vocabulary;          // first-appearance order
  std::vector<std::vector<int>> vectors;        // binary, per article
  std::vector<std::int64_t> totals;             // column sums
  std::vector<int> frequent;                    // 0/1 mask
  std::vector<double> distances;                // sqrt of squared diffs
};

inline OccurrenceOracle occurrence_oracle(
    const std::vector<std::vector<std::string>>& articles) {
  OccurrenceOracle oracle;
  for (const auto& article : articles) {
    for (const auto& word : article) {
      if (std::find(oracle.vocabulary.begin(), oracle.vocabulary.end(),
                    word) == oracle.vocabulary.end()) {
        oracle.vocabulary.push_back(word);
      }
    }
  }
  const std::size_t n = oracle.vocabulary.size();
  oracle.totals.assign(n, 0);
  for (const auto& article : articles) {
    std::vector<int> v(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(article.begin(), article.end(), oracle.vocabulary[i]) !=
          article.end()) {
        v[i] = 1;
      }
    }
    for (std::size_t i = 0; i < n; ++i) oracle.totals[i] += v[i];
    oracle.vectors.push_back(std::move(v));
  }
  std::int64_t max_total = 0;
  for (auto t : oracle.totals) max_total = std::max(max_total, t);
  oracle.frequent.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    oracle.frequent[i] =
        static_cast<double>(oracle.totals[i]) >= 0.1 * max_total ? 1 : 0;
  }
  for (const auto& v : oracle.vectors) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = oracle.frequent[i] - v[i];
      sum += d * d;
    }
    oracle.distances.push_back(std::sqrt(sum));
  }
  return oracle;
}

// --- edit-distance oracle ----------------------------------------------------
// Classic quadratic DP over code points.

inline std::vector<std::uint32_t> decode_utf8_oracle(const std::string& text) {
  std::vector<std::uint32_t> points;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    std::uint32_t cp = b0;
    if ((b0 & 0x80u) == 0) {
      len = 1;
    } else if ((b0 & 0xE0u) == 0xC0u) {
      len = 2;
      cp = b0 & 0x1Fu;
    } else if ((b0 & 0xF0u) == 0xE0u) {
      len = 3;
      cp = b0 & 0x0Fu;
    } else if ((b0 & 0xF8u) == 0xF0u) {
      len = 4;
      cp = b0 & 0x07u;
    } else {
      points.push_back(b0);  // malformed byte decodes as itself
      ++i;
      continue;
    }
    if (i + len > text.size()) {
      points.push_back(b0);
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto bk = static_cast<unsigned char>(text[i + k]);
      if ((bk & 0xC0u) != 0x80u) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (bk & 0x3Fu);
    }
    if (!ok) {
      points.push_back(b0);
      ++i;
      continue;
    }
    points.push_back(cp);
    i += len;
  }
  return points;
}

inline std::size_t levenshtein_oracle(const std::string& a,
                                      const std::string& b) {
  const auto pa = decode_utf8_oracle(a);
  const auto pb = decode_utf8_oracle(b);
  std::vector<std::size_t> prev(pb.size() + 1);
  std::vector<std::size_t> cur(pb.size() + 1);
  for (std::size_t j = 0; j <= pb.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= pa.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= pb.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (pa[i - 1] == pb[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[pb.size()];
}

// --- entropy oracles ----------------------------------------------------------

inline double entropy_oracle(const std::vector<std::int64_t>& counts) {
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (auto c : counts) {
    if (c <= 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

inline double symbol_entropy_oracle(const std::vector<int>& symbols) {
  std::map<int, std::int64_t> counts;
  for (int s : symbols) ++counts[s];
  std::vector<std::int64_t> values;
  for (const auto& [s, c] : counts) values.push_back(c);
  return entropy_oracle(values);
}

// --- cluster oracle -----------------------------------------------------------
// Threshold at a given cut; reports the purity of an assignment against it.

inline double purity_against_cut(const std::vector<double>& values,
                                 const std::vector<int>& assignment,
                                 double cut) {
  // For each predicted cluster, count its majority true-side membership.
  std::map<int, std::map<int, std::int64_t>> table;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ++table[assignment[i]][values[i] < cut ? 0 : 1];
  }
  std::int64_t agree = 0;
  for (const auto& [cluster, sides] : table) {
    std::int64_t best = 0;
    for (const auto& [side, count] : sides) best = std::max(best, count);
    agree += best;
  }
  return values.empty() ? 1.0
                        : static_cast<double>(agree) /
                              static_cast<double>(values.size());
}

// --- confusion-matrix oracle ---------------------------------------------------

struct ConfusionOracle {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline ConfusionOracle metrics_oracle(const std::vector<int>& predictions,
                                      const std::vector<int>& labels) {
  double tp = 0;
  double fp = 0;
  double fn = 0;
  double tn = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == 1 && labels[i] == 1) ++tp;
    if (predictions[i] == 1 && labels[i] == 0) ++fp;
    if (predictions[i] == 0 && labels[i] == 1) ++fn;
    if (predictions[i] == 0 && labels[i] == 0) ++tn;
  }
  ConfusionOracle m;
  const double n = tp + fp + fn + tn;
  m.accuracy = n > 0 ? 100.0 * (tp + tn) / n : 0.0;
  m.precision = (tp + fp) > 0 ? 100.0 * tp / (tp + fp) : 0.0;
  m.recall = (tp + fn) > 0 ? 100.0 * tp / (tp + fn) : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

}  // namespace test_support
