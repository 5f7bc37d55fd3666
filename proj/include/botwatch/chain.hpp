#pragma once

#include <cstdint>
#include <string>

#include "botwatch/corpus.hpp"

namespace botwatch::chain {

struct ChainParams {
  std::string faucet_account = "steem";
};

struct ChainFeatures {
  std::int64_t n_transfers = 0;
  double daily_transfer_entropy = 0.0;  // bits
  std::int64_t activation_time = 0;     // seconds, first to last transfer
  double daily_transfer = 0.0;          // transfers per day
  std::int64_t in_degree = 0;           // distinct senders
  std::int64_t out_degree = 0;          // distinct recipients
  double in_account_entropy = 0.0;      // bits
  double out_account_entropy = 0.0;     // bits
  int steem_created = 0;
  double transfers_per_blog_or_reply = 0.0;
  double transfers_per_blog = 0.0;
  double transfers_per_reply = 0.0;
};

struct TransferStats {
  std::int64_t n_transfers = 0;
  std::int64_t activation_time = 0;
  double daily_transfer = 0.0;
};

// Counts incoming + outgoing events; activation window over their union.
// A zero-length window (or none) makes daily_transfer the raw count.
TransferStats transfer_stats(const corpus::AccountRecord& account);

// Entropy of the per-UTC-day transfer count across the activation window,
// zero-count days inside the window included.
double daily_transfer_entropy(const corpus::AccountRecord& account);

struct DegreeFeatures {
  std::int64_t in_degree = 0;
  std::int64_t out_degree = 0;
  double in_account_entropy = 0.0;
  double out_account_entropy = 0.0;
};

DegreeFeatures degree_features(const corpus::AccountRecord& account);

int steem_created(const corpus::AccountRecord& account,
                  const ChainParams& params = {});

struct TransferPostRatios {
  double per_blog_or_reply = 0.0;
  double per_blog = 0.0;
  double per_reply = 0.0;
};

// Mean over UTC days with qualifying activity of (transfers that day /
// activity that day); days without the denominator activity are skipped.
TransferPostRatios transfer_post_ratios(const corpus::AccountRecord& account);

ChainFeatures chain_features(const corpus::AccountRecord& account,
                             const ChainParams& params = {});

}  // namespace botwatch::chain
