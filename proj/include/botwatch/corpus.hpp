#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace botwatch::corpus {

// A blog is a comment of depth 0; replies have depth = parent depth + 1.
struct CommentRecord {
  std::string author;
  std::string permlink;  // unique id within a corpus
  std::optional<std::string> parent_id;
  int depth = 0;
  std::string title;
  std::string body;
  std::vector<std::string> tags;
  std::int64_t created_at = 0;

  bool is_blog() const { return !parent_id.has_value(); }
};

struct TransferRecord {
  std::string from;
  std::string to;  // self-transfers are legal
  double amount = 0.0;
  std::int64_t timestamp = 0;
};

struct AccountRecord {
  std::string name;
  std::int64_t created_at = 0;
  std::string creator;
  std::int64_t follower_count = 0;
  std::int64_t following_count = 0;
  std::vector<CommentRecord> comments;  // sorted by (created_at, permlink)
  std::vector<TransferRecord> transfers_out;
  std::vector<TransferRecord> transfers_in;

  std::size_t blog_count() const;
  std::size_t reply_count() const;
};

enum class Label { human = 0, bot = 1 };

struct LabeledCorpus {
  std::vector<AccountRecord> accounts;
  std::map<std::string, Label> labels;  // ordered, for stable iteration
  std::int64_t dataset_end = 0;         // end of the observation window

  const AccountRecord* find(const std::string& name) const;
};

// Counters surfaced by ingest for CLI diagnostics.
struct IngestStats {
  std::size_t lines = 0;
  std::size_t accounts = 0;
  std::size_t comments = 0;
  std::size_t transfers = 0;
  std::size_t labels = 0;
  std::size_t depth_conflicts = 0;  // stored depth disagreed with parent chain
};

// Input is UTF-8 line-delimited JSON, one object per line, discriminated by
// "kind" in {account, comment, transfer, label}. Unknown fields are ignored;
// depth is recomputed from the parent chain and the stored value corrected
// when they disagree. Throws std::runtime_error with a line number on
// malformed input and on dangling parent ids.
LabeledCorpus ingest(const std::string& path, std::int64_t dataset_end,
                     IngestStats* stats = nullptr);
LabeledCorpus ingest_stream(std::istream& in, std::int64_t dataset_end,
                            IngestStats* stats = nullptr);

// Canonical pass-through of the same line format: accounts sorted by name,
// then comments chronologically, then transfers, then labels. ingest of an
// exported file reproduces the corpus exactly.
void export_corpus(const LabeledCorpus& corpus, const std::string& path);
void export_stream(const LabeledCorpus& corpus, std::ostream& out);

// Keeps exactly the accounts with blog count + reply count >= min_activity.
LabeledCorpus filter_active(const LabeledCorpus& corpus, int min_activity = 40);

// Latest timestamp in the corpus (account creations, comments, transfers);
// 0 for an empty corpus. The default observation-window end when a corpus
// file does not state one.
std::int64_t latest_event_time(const LabeledCorpus& corpus);

// ---------------------------------------------------------------------------
// Thread structure shared by the response-time features. Built once per
// corpus; the corpus must outlive the index.
class ThreadIndex {
 public:
  explicit ThreadIndex(const LabeledCorpus& corpus);

  const CommentRecord* find(const std::string& id) const;

  // Children of a comment, sorted by (created_at, permlink).
  std::span<const CommentRecord* const> children(const std::string& id) const;

  // Seconds since the latest earlier sibling under the same parent, or since
  // the parent itself for the first reply. nullopt when the parent chain is
  // broken (counted in dangling_parents()).
  std::optional<std::int64_t> response_time(const CommentRecord& reply) const;

  // Permlink of the depth-0 ancestor, or nullptr when unresolvable.
  const std::string* root_blog(const CommentRecord& comment) const;

  // Every reply (depth >= 1, any author) in the thread under a blog.
  std::span<const CommentRecord* const> thread_replies(
      const std::string& blog_id) const;

  std::size_t dangling_parents() const { return dangling_parents_; }

 private:
  std::unordered_map<std::string, const CommentRecord*> by_id_;
  std::unordered_map<std::string, std::vector<const CommentRecord*>> children_;
  std::unordered_map<std::string, std::string> roots_;
  std::unordered_map<std::string, std::vector<const CommentRecord*>> threads_;
  std::size_t dangling_parents_ = 0;
};

// ---------------------------------------------------------------------------
// Synthetic labeled corpora for tests and benchmarks. Bot accounts write
// from a per-account set of fixed forms in which only numbers, account names
// and links vary; human accounts sample a personal vocabulary with bursty
// timing. Everything is driven by one seed, so equal seeds give
// byte-identical exports.
struct SynthSpec {
  int bots = 10;
  int humans = 20;

  int min_comments = 45;
  int max_comments = 110;

  // Per-class chance that a comment is a blog rather than a reply.
  double bot_blog_fraction = 0.25;
  double human_blog_fraction = 0.40;

  // Humans: personal vocabulary drawn from a shared word stock, Zipf-like
  // usage, variable article length.
  int human_vocab_min = 150;
  int human_vocab_max = 4000;
  int human_words_min = 15;
  int human_words_max = 60;

  // Bots: one to a few templates; placeholder slots rotate numbers,
  // accounts, links.
  int bot_templates_min = 1;
  int bot_templates_max = 3;
  int bot_template_words_min = 4;
  int bot_template_words_max = 60;

  // Decorations sprinkled into human text.
  double human_url_prob = 0.08;
  double human_mention_prob = 0.12;
  double human_hashtag_prob = 0.15;
  double human_tags_prob = 0.5;

  // Timing: bots post on a fixed cadence with jitter; humans follow
  // log-normal gaps.
  std::int64_t bot_interval_min = 600;
  std::int64_t bot_interval_max = 14400;
  std::int64_t bot_jitter = 60;
  double human_log_gap_mean = 8.6;  // exp(8.6) ~ 1.5 h median
  double human_log_gap_sigma = 1.8;

  double bot_transfer_mean = 25.0;
  double human_transfer_mean = 8.0;
  double bot_hub_fraction = 0.08;  // a few bots pay out to hundreds of accounts

  std::int64_t start_time = 1548979200;  // 2019-02-01T00:00:00Z

  std::string faucet_account = "steem";
  double bot_faucet_prob = 0.25;
  double human_faucet_prob = 0.45;
};

LabeledCorpus synthesize(const SynthSpec& spec, std::uint64_t seed);

}  // namespace botwatch::corpus
