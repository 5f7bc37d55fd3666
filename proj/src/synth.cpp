#include <algorithm>
#include <cmath>
#include <iterator>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "botwatch/corpus.hpp"
#include "botwatch/util.hpp"

namespace botwatch::corpus {
namespace {

// Deterministic pseudo-word stock: positional syllable encoding keeps every
// index distinct without a dictionary file.
const char* const kSyllables[] = {
    "ba", "be", "bi", "bo", "bu", "da", "de", "di", "do", "du", "fa", "fe",
    "fi", "fo", "fu", "ga", "ge", "gi", "go", "gu", "ka", "ke", "ki", "ko",
    "ku", "la", "le", "li", "lo", "lu", "ma", "me", "mi", "mo", "mu", "na",
    "ne", "ni", "no", "nu", "pa", "pe", "pi", "po", "pu", "ra", "re", "ri",
    "ro", "ru", "sa", "se", "si", "so", "su", "ta", "te", "ti", "to", "tu",
    "va", "ve", "vi", "vo", "vu", "za", "ze", "zi", "zo", "zu"};
constexpr std::size_t kSyllableCount = std::size(kSyllables);

std::string stock_word(std::size_t index) {
  std::string word;
  std::size_t value = index;
  do {
    word += kSyllables[value % kSyllableCount];
    value /= kSyllableCount;
  } while (value > 0);
  if (word.size() < 4) word += kSyllables[index % kSyllableCount];
  return word;
}

// Zipf-like sampler over ranks 0..n-1 with weight 1/(rank+1), via inverse
// transform on the cumulative weights.
class ZipfSampler {
 public:
  explicit ZipfSampler(std::size_t n) : cumulative_(n) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      total += 1.0 / static_cast<double>(r + 1);
      cumulative_[r] = total;
    }
  }

  std::size_t draw(Rng& rng) const {
    const double u = rng.next_unit() * cumulative_.back();
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

enum class SlotKind { number, account, link };

struct BotTemplate {
  std::vector<std::string> fixed;  // fixed.size() == slots.size() + 1
  std::vector<SlotKind> slots;
  std::string title;  // blogs reuse one fixed headline per template
};

struct DraftComment {
  std::size_t account = 0;
  bool blog = false;
  std::int64_t created_at = 0;
  std::string title;
  std::string body;
  std::vector<std::string> tags;
};

struct AccountPlan {
  bool bot = false;
  std::vector<std::string> vocabulary;          // humans
  std::unique_ptr<ZipfSampler> usage;           // humans
  std::vector<BotTemplate> templates;           // bots
  std::int64_t interval = 0;                    // bots: base cadence
};

std::string join_words(const std::vector<std::string>& words) {
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) text += ' ';
    text += words[i];
  }
  return text;
}

}  // namespace

LabeledCorpus synthesize(const SynthSpec& spec, std::uint64_t seed) {
  if (spec.bots < 0 || spec.humans < 0) {
    throw std::invalid_argument("negative account count");
  }
  if (spec.human_vocab_min < 1 || spec.human_vocab_max < spec.human_vocab_min) {
    throw std::invalid_argument("human vocabulary range is empty");
  }
  if (spec.bot_templates_min < 1 ||
      spec.bot_templates_max < spec.bot_templates_min) {
    throw std::invalid_argument("bot template range is empty");
  }
  if (spec.bot_template_words_min < 1 ||
      spec.bot_template_words_max < spec.bot_template_words_min) {
    throw std::invalid_argument("bot template word range is empty");
  }
  if (spec.min_comments < 1 || spec.max_comments < spec.min_comments) {
    throw std::invalid_argument("comment count range is empty");
  }
  if (spec.human_words_min < 1 || spec.human_words_max < spec.human_words_min) {
    throw std::invalid_argument("human word range is empty");
  }

  Rng rng(mix_seed(seed, "synthesize"));
  const std::size_t total =
      static_cast<std::size_t>(spec.bots) + static_cast<std::size_t>(spec.humans);

  LabeledCorpus corpus;
  corpus.accounts.resize(total);

  const std::size_t stock_size =
      std::max<std::size_t>(6000, static_cast<std::size_t>(spec.human_vocab_max) * 2);

  std::vector<std::string> names(total);
  int digits = 1;
  for (std::size_t v = total; v >= 10; v /= 10) ++digits;
  for (std::size_t i = 0; i < total; ++i) {
    std::string number = std::to_string(i);
    names[i] = "user" + std::string(digits - number.size(), '0') + number;
  }

  std::vector<AccountPlan> plans(total);
  for (std::size_t i = 0; i < total; ++i) {
    const bool bot = i < static_cast<std::size_t>(spec.bots);
    AccountRecord& account = corpus.accounts[i];
    account.name = names[i];
    corpus.labels[account.name] = bot ? Label::bot : Label::human;

    AccountPlan& plan = plans[i];
    plan.bot = bot;
    if (bot) {
      // Young accounts on a fixed posting cadence.
      account.created_at =
          spec.start_time - rng.range(0, 90) * kSecondsPerDay;
      account.follower_count = rng.poisson(3.0);
      account.following_count = 150 + rng.range(0, 1800);
      plan.interval = rng.range(spec.bot_interval_min, spec.bot_interval_max);
      const int n_templates =
          static_cast<int>(rng.range(spec.bot_templates_min, spec.bot_templates_max));
      for (int t = 0; t < n_templates; ++t) {
        BotTemplate form;
        const int words = static_cast<int>(rng.range(
            spec.bot_template_words_min, spec.bot_template_words_max));
        const int max_slots = std::min(3, std::max(1, words / 4));
        const int n_slots = static_cast<int>(rng.range(1, max_slots));
        // Divide `words` fixed words into n_slots+1 runs.
        std::vector<int> cut_points;
        for (int s = 0; s < n_slots; ++s) {
          cut_points.push_back(static_cast<int>(rng.range(0, words)));
        }
        std::sort(cut_points.begin(), cut_points.end());
        std::vector<std::string> base(words);
        for (auto& w : base) w = stock_word(rng.below(stock_size));
        int prev = 0;
        for (int s = 0; s <= n_slots; ++s) {
          const int end = s < n_slots ? cut_points[s] : words;
          std::vector<std::string> run(base.begin() + prev, base.begin() + end);
          form.fixed.push_back(join_words(run));
          prev = end;
        }
        for (int s = 0; s < n_slots; ++s) {
          const auto k = rng.below(3);
          form.slots.push_back(k == 0   ? SlotKind::number
                               : k == 1 ? SlotKind::account
                                        : SlotKind::link);
        }
        std::vector<std::string> headline;
        for (int w = 0; w < 4; ++w) headline.push_back(stock_word(rng.below(stock_size)));
        form.title = join_words(headline);
        plan.templates.push_back(std::move(form));
      }
    } else {
      account.created_at =
          spec.start_time - rng.range(30, 900) * kSecondsPerDay;
      account.follower_count = 10 + rng.poisson(90.0);
      account.following_count = 10 + rng.poisson(140.0);
      const auto vocab_size = static_cast<std::size_t>(
          rng.range(spec.human_vocab_min, spec.human_vocab_max));
      const std::size_t offset = rng.below(stock_size - vocab_size + 1);
      plan.vocabulary.reserve(vocab_size);
      for (std::size_t w = 0; w < vocab_size; ++w) {
        plan.vocabulary.push_back(stock_word(offset + w));
      }
      rng.shuffle(plan.vocabulary);  // decouple rank from stock order
      plan.usage = std::make_unique<ZipfSampler>(vocab_size);
    }
    account.creator =
        rng.next_unit() < (bot ? spec.bot_faucet_prob : spec.human_faucet_prob)
            ? spec.faucet_account
            : names[rng.below(total)];
  }

  // Pass 1: draft every comment with timestamps and text, no threading yet.
  std::vector<DraftComment> drafts;
  for (std::size_t i = 0; i < total; ++i) {
    const AccountPlan& plan = plans[i];
    const AccountRecord& account = corpus.accounts[i];
    const int n_comments =
        static_cast<int>(rng.range(spec.min_comments, spec.max_comments));
    std::int64_t at = spec.start_time + rng.range(0, 30 * kSecondsPerDay);
    at = std::max(at, account.created_at + 1);
    const double blog_fraction =
        plan.bot ? spec.bot_blog_fraction : spec.human_blog_fraction;

    for (int k = 0; k < n_comments; ++k) {
      DraftComment draft;
      draft.account = i;
      draft.blog = rng.next_unit() < blog_fraction;
      draft.created_at = at;

      if (plan.bot) {
        const BotTemplate& form =
            plan.templates[rng.below(plan.templates.size())];
        std::string body;
        for (std::size_t s = 0; s < form.slots.size(); ++s) {
          body += form.fixed[s];
          std::string filler;
          switch (form.slots[s]) {
            case SlotKind::number:
              filler = std::to_string(rng.range(1, 100)) + "%";
              break;
            case SlotKind::account:
              filler = "@" + names[rng.below(total)];
              break;
            case SlotKind::link:
              filler = "https://steemit.com/p/" +
                       std::to_string(rng.range(100000, 999999));
              break;
          }
          if (!body.empty() && body.back() != ' ') body += ' ';
          body += filler;
          if (!form.fixed[s + 1].empty()) body += ' ';
        }
        body += form.fixed.back();
        draft.body = body;
        if (draft.blog) draft.title = form.title;
        at += plan.interval + rng.range(-spec.bot_jitter, spec.bot_jitter);
        if (at <= draft.created_at) at = draft.created_at + 1;
      } else {
        const int words = static_cast<int>(
            rng.range(spec.human_words_min, spec.human_words_max));
        std::vector<std::string> tokens;
        tokens.reserve(words);
        for (int w = 0; w < words; ++w) {
          tokens.push_back(plan.vocabulary[plan.usage->draw(rng)]);
        }
        if (rng.next_unit() < spec.human_url_prob) {
          tokens.push_back("https://example.com/" +
                           plan.vocabulary[plan.usage->draw(rng)]);
        }
        if (rng.next_unit() < spec.human_mention_prob) {
          tokens.push_back("@" + names[rng.below(total)]);
        }
        if (rng.next_unit() < spec.human_hashtag_prob) {
          tokens.push_back("#" + plan.vocabulary[plan.usage->draw(rng)]);
        }
        draft.body = join_words(tokens);
        if (draft.blog) {
          const int title_words = static_cast<int>(rng.range(3, 8));
          std::vector<std::string> title;
          for (int w = 0; w < title_words; ++w) {
            title.push_back(plan.vocabulary[plan.usage->draw(rng)]);
          }
          draft.title = join_words(title);
          if (rng.next_unit() < spec.human_tags_prob) {
            const int n_tags = static_cast<int>(rng.range(1, 4));
            for (int t = 0; t < n_tags; ++t) {
              draft.tags.push_back(plan.vocabulary[plan.usage->draw(rng)]);
            }
          }
        }
        const double gap =
            rng.lognormal(spec.human_log_gap_mean, spec.human_log_gap_sigma);
        at += std::max<std::int64_t>(1, static_cast<std::int64_t>(gap));
      }
      drafts.push_back(std::move(draft));
    }
  }

  // Pass 2: order globally by time and attach replies to earlier comments,
  // preferring recent ones so threads look alive.
  std::stable_sort(drafts.begin(), drafts.end(),
                   [](const DraftComment& a, const DraftComment& b) {
                     return a.created_at < b.created_at;
                   });
  std::vector<std::string> permlinks(drafts.size());
  std::vector<int> depths(drafts.size(), 0);
  std::vector<int> per_account_seq(total, 0);
  for (std::size_t k = 0; k < drafts.size(); ++k) {
    DraftComment& draft = drafts[k];
    const int seq = per_account_seq[draft.account]++;
    permlinks[k] = names[draft.account] + "-p" + std::to_string(seq);
    if (!draft.blog && k == 0) draft.blog = true;  // nothing to reply to yet

    CommentRecord record;
    record.author = names[draft.account];
    record.permlink = permlinks[k];
    record.title = draft.title;
    record.body = std::move(draft.body);
    record.tags = std::move(draft.tags);
    record.created_at = draft.created_at;
    if (!draft.blog) {
      const std::size_t window = std::min<std::size_t>(k, 50);
      const std::size_t pick = k - 1 - rng.below(window);
      record.parent_id = permlinks[pick];
      record.depth = depths[pick] + 1;
    }
    depths[k] = record.depth;
    corpus.accounts[draft.account].comments.push_back(std::move(record));
  }

  // Transfers. Bots push more volume; a few act as payout hubs with a wide
  // fan-out of recipients.
  std::int64_t last_activity = spec.start_time;
  for (const auto& account : corpus.accounts) {
    for (const auto& c : account.comments) {
      last_activity = std::max(last_activity, c.created_at);
    }
  }
  for (std::size_t i = 0; i < total; ++i) {
    AccountRecord& account = corpus.accounts[i];
    const bool bot = plans[i].bot;
    const bool hub = bot && rng.next_unit() < spec.bot_hub_fraction;
    const double mean =
        bot ? spec.bot_transfer_mean : spec.human_transfer_mean;
    const int n_out = rng.poisson(hub ? mean * 8 : mean);
    // Transfers stay inside the observation window so they never predate
    // a recipient account (every account exists by start_time).
    const std::int64_t window_lo =
        std::max(account.created_at + 1, spec.start_time);
    const std::int64_t window =
        std::max<std::int64_t>(1, last_activity - window_lo);
    for (int t = 0; t < n_out; ++t) {
      TransferRecord transfer;
      transfer.from = account.name;
      transfer.to = hub ? names[rng.below(total)]
                        : names[rng.below(std::min<std::size_t>(total, 40))];
      transfer.amount = rng.exponential(1.0 / 4.0);
      transfer.timestamp = window_lo + rng.below(window);
      // Bots batch their payouts into a few bursts; humans spread out.
      if (bot && t > 0 && rng.next_unit() < 0.7) {
        transfer.timestamp = account.transfers_out.back().timestamp +
                             rng.range(5, 600);
        if (transfer.timestamp > last_activity) {
          transfer.timestamp = window_lo + rng.below(window);
        }
      }
      account.transfers_out.push_back(transfer);
      // Mirror onto the recipient when it is one of ours.
      for (auto& other : corpus.accounts) {
        if (other.name == transfer.to) {
          other.transfers_in.push_back(transfer);
          break;
        }
      }
    }
  }

  std::int64_t max_time = spec.start_time;
  for (const auto& account : corpus.accounts) {
    max_time = std::max(max_time, account.created_at);
    for (const auto& c : account.comments) {
      max_time = std::max(max_time, c.created_at);
    }
    for (const auto& t : account.transfers_out) {
      max_time = std::max(max_time, t.timestamp);
    }
  }
  corpus.dataset_end = max_time + kSecondsPerDay;

  for (auto& account : corpus.accounts) {
    std::sort(account.comments.begin(), account.comments.end(),
              [](const CommentRecord& a, const CommentRecord& b) {
                if (a.created_at != b.created_at) {
                  return a.created_at < b.created_at;
                }
                return a.permlink < b.permlink;
              });
    auto transfer_before = [](const TransferRecord& a,
                              const TransferRecord& b) {
      return std::tie(a.timestamp, a.from, a.to, a.amount) <
             std::tie(b.timestamp, b.from, b.to, b.amount);
    };
    std::sort(account.transfers_out.begin(), account.transfers_out.end(),
              transfer_before);
    std::sort(account.transfers_in.begin(), account.transfers_in.end(),
              transfer_before);
  }
  return corpus;
}

}  // namespace botwatch::corpus
