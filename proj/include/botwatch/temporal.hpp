#pragma once

#include <cstdint>
#include <vector>

#include "botwatch/corpus.hpp"

namespace botwatch::temporal {

struct TemporalParams {
  int symbol_cap = 20;  // ≈ 12 days; floor(log2(Δt+1)) bins above collapse
  int max_order = 10;   // CCE search depth
};

struct TemporalFeatures {
  double entropy_rate = 0.0;  // bits
  double hashtag_ratio = 0.0;
  double mention_ratio = 0.0;
  double url_ratio = 0.0;
  double ff_ratio = 0.0;
  std::int64_t account_age = 0;  // seconds
};

// Δt between consecutive timestamps, discretized as floor(log2(Δt+1)) and
// capped. Fewer than 2 timestamps → empty sequence.
std::vector<int> bin_intervals(const std::vector<std::int64_t>& timestamps,
                               const TemporalParams& params = {});

// Corrected conditional entropy rate (bits): min over n ≤ max_order of
// CE(n) + per(n)·EN(X₁), with CCE(1) = EN(X₁). Empty sequence → 0.
double cce(const std::vector<int>& symbols, int max_order = 10);

struct ContentRatios {
  double hashtag = 0.0;
  double mention = 0.0;
  double url = 0.0;
};

// Fraction of the account's comments containing at least one hashtag
// (body `#word` or nonempty tag metadata), mention (`@name`), or valid URL.
ContentRatios ratios(const corpus::AccountRecord& account);

// followers / (followers + followings); 0 when both are 0.
double ff_ratio(std::int64_t follower_count, std::int64_t following_count);

// dataset_end − created_at; throws std::invalid_argument when the account
// postdates the dataset end.
std::int64_t account_age(const corpus::AccountRecord& account,
                         std::int64_t dataset_end);

TemporalFeatures temporal_features(const corpus::AccountRecord& account,
                                   std::int64_t dataset_end,
                                   const TemporalParams& params = {});

}  // namespace botwatch::temporal
