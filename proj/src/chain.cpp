#include "botwatch/chain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "botwatch/util.hpp"

namespace botwatch::chain {
namespace {

template <class Key>
double entropy_bits(const std::unordered_map<Key, std::int64_t>& counts,
                    std::int64_t total) {
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (const auto& [key, count] : counts) {
    (void)key;
    const double p = static_cast<double>(count) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

std::vector<std::int64_t> all_transfer_times(
    const corpus::AccountRecord& account) {
  std::vector<std::int64_t> times;
  times.reserve(account.transfers_in.size() + account.transfers_out.size());
  for (const auto& t : account.transfers_in) times.push_back(t.timestamp);
  for (const auto& t : account.transfers_out) times.push_back(t.timestamp);
  return times;
}

}  // namespace

TransferStats transfer_stats(const corpus::AccountRecord& account) {
  TransferStats stats;
  const auto times = all_transfer_times(account);
  stats.n_transfers = static_cast<std::int64_t>(times.size());
  if (times.empty()) return stats;
  const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
  stats.activation_time = *hi - *lo;
  if (stats.activation_time == 0) {
    stats.daily_transfer = static_cast<double>(stats.n_transfers);
  } else {
    stats.daily_transfer =
        static_cast<double>(stats.n_transfers) /
        (static_cast<double>(stats.activation_time) / kSecondsPerDay);
  }
  return stats;
}

double daily_transfer_entropy(const corpus::AccountRecord& account) {
  const auto times = all_transfer_times(account);
  if (times.empty()) return 0.0;
  std::unordered_map<std::int64_t, std::int64_t> per_day;
  std::int64_t first_day = utc_day(times.front());
  std::int64_t last_day = first_day;
  for (auto t : times) {
    const std::int64_t day = utc_day(t);
    per_day[day] += 1;
    first_day = std::min(first_day, day);
    last_day = std::max(last_day, day);
  }
  const std::int64_t window = last_day - first_day + 1;
  // Distribution over the count VALUE seen each day; silent days count 0.
  std::unordered_map<std::int64_t, std::int64_t> value_counts;
  for (const auto& [day, count] : per_day) {
    (void)day;
    value_counts[count] += 1;
  }
  const auto active_days = static_cast<std::int64_t>(per_day.size());
  if (window > active_days) value_counts[0] = window - active_days;
  return entropy_bits(value_counts, window);
}

DegreeFeatures degree_features(const corpus::AccountRecord& account) {
  DegreeFeatures features;
  std::unordered_map<std::string, std::int64_t> senders;
  for (const auto& t : account.transfers_in) senders[t.from] += 1;
  std::unordered_map<std::string, std::int64_t> recipients;
  for (const auto& t : account.transfers_out) recipients[t.to] += 1;
  features.in_degree = static_cast<std::int64_t>(senders.size());
  features.out_degree = static_cast<std::int64_t>(recipients.size());
  features.in_account_entropy = entropy_bits(
      senders, static_cast<std::int64_t>(account.transfers_in.size()));
  features.out_account_entropy = entropy_bits(
      recipients, static_cast<std::int64_t>(account.transfers_out.size()));
  return features;
}

int steem_created(const corpus::AccountRecord& account,
                  const ChainParams& params) {
  return account.creator == params.faucet_account ? 1 : 0;
}

TransferPostRatios transfer_post_ratios(const corpus::AccountRecord& account) {
  struct DayActivity {
    std::int64_t blogs = 0;
    std::int64_t replies = 0;
    std::int64_t transfers = 0;
  };
  std::map<std::int64_t, DayActivity> days;
  for (const auto& comment : account.comments) {
    auto& day = days[utc_day(comment.created_at)];
    (comment.is_blog() ? day.blogs : day.replies) += 1;
  }
  for (auto t : all_transfer_times(account)) {
    days[utc_day(t)].transfers += 1;
  }

  struct Mean {
    double total = 0.0;
    std::int64_t n = 0;
    double value() const {
      return n == 0 ? 0.0 : total / static_cast<double>(n);
    }
  };
  Mean either, blogs, replies;
  for (const auto& [day, activity] : days) {
    (void)day;
    const auto transfers = static_cast<double>(activity.transfers);
    if (activity.blogs + activity.replies > 0) {
      either.total +=
          transfers / static_cast<double>(activity.blogs + activity.replies);
      either.n += 1;
    }
    if (activity.blogs > 0) {
      blogs.total += transfers / static_cast<double>(activity.blogs);
      blogs.n += 1;
    }
    if (activity.replies > 0) {
      replies.total += transfers / static_cast<double>(activity.replies);
      replies.n += 1;
    }
  }
  TransferPostRatios ratios;
  ratios.per_blog_or_reply = either.value();
  ratios.per_blog = blogs.value();
  ratios.per_reply = replies.value();
  return ratios;
}

ChainFeatures chain_features(const corpus::AccountRecord& account,
                             const ChainParams& params) {
  ChainFeatures features;
  const TransferStats stats = transfer_stats(account);
  features.n_transfers = stats.n_transfers;
  features.activation_time = stats.activation_time;
  features.daily_transfer = stats.daily_transfer;
  features.daily_transfer_entropy = daily_transfer_entropy(account);
  const DegreeFeatures degrees = degree_features(account);
  features.in_degree = degrees.in_degree;
  features.out_degree = degrees.out_degree;
  features.in_account_entropy = degrees.in_account_entropy;
  features.out_account_entropy = degrees.out_account_entropy;
  features.steem_created = steem_created(account, params);
  const TransferPostRatios ratios = transfer_post_ratios(account);
  features.transfers_per_blog_or_reply = ratios.per_blog_or_reply;
  features.transfers_per_blog = ratios.per_blog;
  features.transfers_per_reply = ratios.per_reply;
  return features;
}

}  // namespace botwatch::chain
