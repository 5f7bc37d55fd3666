#include "botwatch/temporal.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "botwatch/behavior.hpp"

namespace botwatch::temporal {
namespace {

double entropy_bits(const std::unordered_map<std::uint64_t, std::int64_t>& counts,
                    std::int64_t total) {
  double h = 0.0;
  for (const auto& [key, count] : counts) {
    (void)key;
    const double p = static_cast<double>(count) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

bool body_has_hashtag(std::string_view body) {
  for (std::size_t i = 0; i + 1 < body.size(); ++i) {
    if (body[i] != '#') continue;
    const auto next = static_cast<unsigned char>(body[i + 1]);
    if (std::isalnum(next) || next == '_') return true;
  }
  return false;
}

bool body_has_mention(std::string_view body) {
  for (std::size_t i = 0; i + 1 < body.size(); ++i) {
    if (body[i] != '@') continue;
    const auto next = static_cast<unsigned char>(body[i + 1]);
    if (std::isalnum(next)) return true;
  }
  return false;
}

}  // namespace

std::vector<int> bin_intervals(const std::vector<std::int64_t>& timestamps,
                               const TemporalParams& params) {
  std::vector<int> symbols;
  if (timestamps.size() < 2) return symbols;
  symbols.reserve(timestamps.size() - 1);
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    const std::int64_t delta =
        std::max<std::int64_t>(0, timestamps[i] - timestamps[i - 1]);
    const auto width = static_cast<std::uint64_t>(delta) + 1;
    const int symbol = static_cast<int>(std::bit_width(width)) - 1;
    symbols.push_back(std::min(symbol, params.symbol_cap));
  }
  return symbols;
}

double cce(const std::vector<int>& symbols, int max_order) {
  if (symbols.empty() || max_order < 1) return 0.0;
  const std::size_t n_symbols = symbols.size();

  // Dense relabel so every symbol packs into a fixed number of bits.
  std::unordered_map<int, std::uint64_t> ids;
  std::vector<std::uint64_t> dense(n_symbols);
  for (std::size_t i = 0; i < n_symbols; ++i) {
    auto [it, inserted] = ids.emplace(symbols[i], ids.size());
    dense[i] = it->second;
  }
  const int bits = std::max<int>(1, std::bit_width(ids.size() - 1));
  if (static_cast<std::size_t>(bits) * static_cast<std::size_t>(max_order) >
      63) {
    // Packing would overflow; shrink the searched orders to what fits. In
    // practice alphabets here are ≤ 21 symbols (5 bits), so 10 orders fit.
    max_order = static_cast<int>(63 / bits);
  }

  // EN(X₁) and H over 1-grams.
  std::unordered_map<std::uint64_t, std::int64_t> counts;
  for (auto s : dense) ++counts[s];
  const double en1 = entropy_bits(counts, static_cast<std::int64_t>(n_symbols));

  double best = en1;  // CCE(1) = EN(X₁)
  double h_prev = en1;
  for (int order = 2; order <= max_order; ++order) {
    if (static_cast<std::size_t>(order) > n_symbols) break;
    const std::size_t instances = n_symbols - order + 1;
    counts.clear();
    std::uint64_t window = 0;
    const std::uint64_t mask =
        (order * bits >= 64) ? ~std::uint64_t{0}
                             : ((std::uint64_t{1} << (order * bits)) - 1);
    for (std::size_t i = 0; i < n_symbols; ++i) {
      window = ((window << bits) | dense[i]) & mask;
      if (i + 1 >= static_cast<std::size_t>(order)) ++counts[window];
    }
    const double h_n = entropy_bits(counts, static_cast<std::int64_t>(instances));
    const double ce = std::max(0.0, h_n - h_prev);
    std::int64_t singletons = 0;
    for (const auto& [key, count] : counts) {
      (void)key;
      singletons += count == 1;
    }
    const double per =
        static_cast<double>(singletons) / static_cast<double>(instances);
    best = std::min(best, ce + per * en1);
    h_prev = h_n;
    if (counts.size() == instances) break;  // all patterns unique from here on
  }
  return best;
}

ContentRatios ratios(const corpus::AccountRecord& account) {
  ContentRatios result;
  if (account.comments.empty()) return result;
  std::int64_t hashtag = 0;
  std::int64_t mention = 0;
  std::int64_t url = 0;
  for (const auto& comment : account.comments) {
    const bool tagged = comment.is_blog() && !comment.tags.empty();
    hashtag += tagged || body_has_hashtag(comment.body);
    mention += body_has_mention(comment.body);
    url += !behavior::find_urls(comment.body).empty();
  }
  const auto total = static_cast<double>(account.comments.size());
  result.hashtag = static_cast<double>(hashtag) / total;
  result.mention = static_cast<double>(mention) / total;
  result.url = static_cast<double>(url) / total;
  return result;
}

double ff_ratio(std::int64_t follower_count, std::int64_t following_count) {
  if (follower_count < 0 || following_count < 0) {
    throw std::invalid_argument("negative follower/following count");
  }
  const std::int64_t total = follower_count + following_count;
  if (total == 0) return 0.0;
  return static_cast<double>(follower_count) / static_cast<double>(total);
}

std::int64_t account_age(const corpus::AccountRecord& account,
                         std::int64_t dataset_end) {
  if (account.created_at > dataset_end) {
    throw std::invalid_argument("account \"" + account.name +
                                "\" created after the dataset end");
  }
  return dataset_end - account.created_at;
}

TemporalFeatures temporal_features(const corpus::AccountRecord& account,
                                   std::int64_t dataset_end,
                                   const TemporalParams& params) {
  TemporalFeatures features;
  std::vector<std::int64_t> times;
  times.reserve(account.comments.size());
  for (const auto& comment : account.comments) {
    times.push_back(comment.created_at);
  }
  std::sort(times.begin(), times.end());
  features.entropy_rate = cce(bin_intervals(times, params), params.max_order);
  const ContentRatios r = ratios(account);
  features.hashtag_ratio = r.hashtag;
  features.mention_ratio = r.mention;
  features.url_ratio = r.url;
  features.ff_ratio = ff_ratio(account.follower_count, account.following_count);
  features.account_age = account_age(account, dataset_end);
  return features;
}

}  // namespace botwatch::temporal
