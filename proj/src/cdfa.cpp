#include "botwatch/cdfa.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "botwatch/util.hpp"

namespace botwatch::cdfa {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const auto is_space = [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

OccurrenceModel build_occurrence(const ArticleSet& articles) {
  if (articles.articles.empty()) {
    throw std::invalid_argument("no articles");
  }
  OccurrenceModel model;
  std::unordered_map<std::string, std::size_t> index;

  for (const auto& article : articles.articles) {
    for (const auto& word : article) {
      auto [it, inserted] = index.emplace(word, model.vocabulary.size());
      if (inserted) model.vocabulary.push_back(word);
    }
  }
  if (model.vocabulary.empty()) {
    throw std::invalid_argument("all articles are empty");
  }

  const std::size_t n = model.vocabulary.size();
  model.total_occurrence.assign(n, 0);
  model.occurrence_vectors.reserve(articles.m());
  for (const auto& article : articles.articles) {
    std::vector<std::uint8_t> v(n, 0);
    for (const auto& word : article) {
      v[index.at(word)] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) model.total_occurrence[i] += v[i];
    model.occurrence_vectors.push_back(std::move(v));
  }

  const std::int64_t max_total =
      *std::max_element(model.total_occurrence.begin(),
                        model.total_occurrence.end());
  model.frequent_mask.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    // T[i] ≥ 0.1·max(T), kept exact in integers.
    model.frequent_mask[i] = model.total_occurrence[i] * 10 >= max_total;
  }
  return model;
}

std::vector<double> distances(const OccurrenceModel& model) {
  std::vector<double> result;
  result.reserve(model.occurrence_vectors.size());
  const std::size_t n = model.vocabulary.size();
  for (const auto& v : model.occurrence_vectors) {
    std::int64_t mismatches = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mismatches += (model.frequent_mask[i] != v[i]);
    }
    result.push_back(std::sqrt(static_cast<double>(mismatches)));
  }
  return result;
}

namespace {

MacSummary source_features(const std::vector<std::vector<std::string>>& texts,
                           Source source, std::uint64_t seed,
                           const DpgmmParams& params) {
  if (texts.size() < 5) return {};
  ArticleSet set{texts, source};
  bool any_word = false;
  for (const auto& article : texts) {
    if (!article.empty()) {
      any_word = true;
      break;
    }
  }
  if (!any_word) return {};  // nothing to model: degenerate like "too few"
  const OccurrenceModel model = build_occurrence(set);
  return mac_cdfa(distances(model), seed, params);
}

}  // namespace

CdfaFeatures cdfa_features(const corpus::AccountRecord& account,
                           std::uint64_t seed, const DpgmmParams& params) {
  std::vector<std::vector<std::string>> titles;
  std::vector<std::vector<std::string>> contents;
  std::vector<std::vector<std::string>> replies;
  for (const auto& comment : account.comments) {
    if (comment.is_blog()) {
      titles.push_back(tokenize(comment.title));
      contents.push_back(tokenize(comment.body));
    } else {
      replies.push_back(tokenize(comment.body));
    }
  }

  CdfaFeatures features;
  features.title =
      source_features(titles, Source::title, mix_seed(seed, "cdfa-T"), params);
  features.content = source_features(contents, Source::content,
                                     mix_seed(seed, "cdfa-C"), params);
  features.reply =
      source_features(replies, Source::reply, mix_seed(seed, "cdfa-R"), params);
  return features;
}

}  // namespace botwatch::cdfa
