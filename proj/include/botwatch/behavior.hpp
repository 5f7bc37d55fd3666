#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "botwatch/corpus.hpp"

namespace botwatch::behavior {

struct InnovationParams {
  int shuffles = 3;
  int min_tokens = 10;   // below this the account gives no signal: α = 0
  double alpha_max = 10.0;
};

struct BehaviorFeatures {
  double avg_response_time = 0.0;   // seconds
  double avg_comment_length = 0.0;  // characters
  double innovation_rate = 0.0;     // decay exponent α
  std::int64_t max_daily_comments = 0;
  std::int64_t link_count = 0;
  double thread_deviation = 0.0;  // seconds
};

// Structural URL scan used by link_count and the temporal module's URL
// ratio: http(s) scheme plus a host that has a dot (or is localhost).
std::vector<std::string_view> find_urls(std::string_view body);

// Shared thread context: one pass over the corpus precomputes per-blog mean
// response times for thread_deviation. The corpus must outlive this object.
class BehaviorContext {
 public:
  explicit BehaviorContext(const corpus::LabeledCorpus& corpus);

  const corpus::ThreadIndex& index() const { return index_; }

  // Mean response time over every reply in a blog's thread; nullptr when
  // the blog has no replies with resolvable response times.
  const double* blog_mean_response(const std::string& blog_id) const;

 private:
  corpus::ThreadIndex index_;
  std::unordered_map<std::string, double> blog_mean_;
};

// One Δt per reply authored by the account: time since the latest earlier
// sibling, or since the parent for a first reply. Replies whose parents are
// unresolvable are skipped (and counted when `skipped` is non-null).
std::vector<std::int64_t> response_times(const BehaviorContext& context,
                                         const corpus::AccountRecord& account,
                                         std::size_t* skipped = nullptr);

double avg_comment_length(const corpus::AccountRecord& account);

// Word-introduction decay rate α, averaged over seeded shuffles of article
// order. All-novel streams give 0; heavy reuse gives large α (capped).
double innovation_rate(const corpus::AccountRecord& account,
                       std::uint64_t seed, const InnovationParams& params = {});

std::int64_t max_daily_comments(const corpus::AccountRecord& account);

std::int64_t link_count(const corpus::AccountRecord& account);

double thread_deviation(const BehaviorContext& context,
                        const corpus::AccountRecord& account);

BehaviorFeatures behavior_features(const BehaviorContext& context,
                                   const corpus::AccountRecord& account,
                                   std::uint64_t seed,
                                   const InnovationParams& params = {});

}  // namespace botwatch::behavior
