#include "botwatch/behavior.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>

#include "botwatch/cdfa.hpp"
#include "botwatch/util.hpp"

namespace botwatch::behavior {
namespace {

bool is_url_char(unsigned char c) {
  if (std::isalnum(c)) return true;
  switch (c) {
    case '-': case '.': case '_': case '~': case ':': case '/': case '?':
    case '#': case '[': case ']': case '@': case '!': case '$': case '&':
    case '\'': case '(': case ')': case '*': case '+': case ',': case ';':
    case '=': case '%':
      return true;
    default:
      return false;
  }
}

// Host validation: dotted labels of [alnum-], no empty labels, no label
// starting or ending with '-'; bare "localhost" also passes.
bool valid_host(std::string_view host) {
  if (host == "localhost") return true;
  if (host.empty() || host.find('.') == std::string_view::npos) return false;
  std::size_t start = 0;
  while (start <= host.size()) {
    std::size_t dot = host.find('.', start);
    const std::string_view label =
        host.substr(start, dot == std::string_view::npos ? host.size() - start
                                                         : dot - start);
    if (label.empty()) return false;
    if (label.front() == '-' || label.back() == '-') return false;
    for (unsigned char c : label) {
      if (!std::isalnum(c) && c != '-') return false;
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return true;
}

}  // namespace

std::vector<std::string_view> find_urls(std::string_view body) {
  std::vector<std::string_view> urls;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const std::size_t hit = body.find("http", pos);
    if (hit == std::string_view::npos) break;
    std::string_view rest = body.substr(hit);
    std::size_t scheme_len = 0;
    if (rest.starts_with("https://")) {
      scheme_len = 8;
    } else if (rest.starts_with("http://")) {
      scheme_len = 7;
    } else {
      pos = hit + 4;
      continue;
    }
    std::size_t end = scheme_len;
    while (end < rest.size() &&
           is_url_char(static_cast<unsigned char>(rest[end]))) {
      ++end;
    }
    // Trailing sentence punctuation is not part of the URL.
    while (end > scheme_len &&
           (rest[end - 1] == '.' || rest[end - 1] == ',' ||
            rest[end - 1] == ';' || rest[end - 1] == ')' ||
            rest[end - 1] == '\'' || rest[end - 1] == '!')) {
      --end;
    }
    const std::string_view candidate = rest.substr(0, end);
    std::string_view after_scheme = candidate.substr(scheme_len);
    const std::size_t host_end = after_scheme.find_first_of(":/?#[]@");
    const std::string_view host =
        host_end == std::string_view::npos ? after_scheme
                                           : after_scheme.substr(0, host_end);
    if (valid_host(host)) {
      urls.push_back(candidate);
      pos = hit + end;
    } else {
      pos = hit + scheme_len;
    }
  }
  return urls;
}

BehaviorContext::BehaviorContext(const corpus::LabeledCorpus& corpus)
    : index_(corpus) {
  struct Sum {
    double total = 0.0;
    std::size_t n = 0;
  };
  std::unordered_map<std::string, Sum> sums;
  for (const auto& account : corpus.accounts) {
    for (const auto& comment : account.comments) {
      if (comment.is_blog()) continue;
      const auto rt = index_.response_time(comment);
      const std::string* root = index_.root_blog(comment);
      if (!rt || !root) continue;
      auto& sum = sums[*root];
      sum.total += static_cast<double>(*rt);
      sum.n += 1;
    }
  }
  blog_mean_.reserve(sums.size());
  for (const auto& [blog, sum] : sums) {
    blog_mean_.emplace(blog, sum.total / static_cast<double>(sum.n));
  }
}

const double* BehaviorContext::blog_mean_response(
    const std::string& blog_id) const {
  auto it = blog_mean_.find(blog_id);
  return it == blog_mean_.end() ? nullptr : &it->second;
}

std::vector<std::int64_t> response_times(const BehaviorContext& context,
                                         const corpus::AccountRecord& account,
                                         std::size_t* skipped) {
  std::vector<std::int64_t> times;
  std::size_t missing = 0;
  for (const auto& comment : account.comments) {
    if (comment.is_blog()) continue;
    const auto rt = context.index().response_time(comment);
    if (rt) {
      times.push_back(*rt);
    } else {
      ++missing;
    }
  }
  if (skipped) *skipped = missing;
  return times;
}

double avg_comment_length(const corpus::AccountRecord& account) {
  if (account.comments.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& comment : account.comments) {
    total += utf8_length(comment.body);
  }
  return static_cast<double>(total) /
         static_cast<double>(account.comments.size());
}

double innovation_rate(const corpus::AccountRecord& account,
                       std::uint64_t seed, const InnovationParams& params) {
  std::vector<std::vector<std::string>> articles;
  std::size_t total_tokens = 0;
  for (const auto& comment : account.comments) {
    articles.push_back(cdfa::tokenize(comment.body));
    total_tokens += articles.back().size();
  }
  if (total_tokens < static_cast<std::size_t>(params.min_tokens)) return 0.0;

  double alpha_sum = 0.0;
  for (int s = 0; s < params.shuffles; ++s) {
    Rng rng(mix_seed(mix_seed(seed, "innovation"), static_cast<std::uint64_t>(s)));
    std::vector<std::size_t> order = rng.permutation(articles.size());

    // Introduction indicator per token position in the concatenated stream.
    std::unordered_map<std::string_view, bool> seen;
    seen.reserve(total_tokens);
    std::vector<std::uint8_t> novel;
    novel.reserve(total_tokens);
    for (std::size_t a : order) {
      for (const auto& token : articles[a]) {
        auto [it, inserted] = seen.emplace(token, true);
        (void)it;
        novel.push_back(inserted ? 1 : 0);
      }
    }

    // Logarithmic position bins: bin b covers positions [2^b, 2^{b+1}).
    struct Bin {
      std::int64_t introductions = 0;
      std::int64_t positions = 0;
      double lo = 0;
      double hi = 0;
    };
    std::vector<Bin> bins;
    for (std::size_t k = 0; k < novel.size(); ++k) {
      const std::uint64_t position = k + 1;  // 1-indexed
      const int b = static_cast<int>(std::bit_width(position)) - 1;
      if (static_cast<std::size_t>(b) >= bins.size()) {
        bins.resize(b + 1);
        bins[b].lo = static_cast<double>(position);
      }
      bins[b].introductions += novel[k];
      bins[b].positions += 1;
      bins[b].hi = static_cast<double>(position);
    }

    // Least squares of ln(rate) on ln(bin midpoint) over nonzero bins.
    std::vector<std::pair<double, double>> points;
    for (const auto& bin : bins) {
      if (bin.introductions == 0 || bin.positions == 0) continue;
      const double rate = static_cast<double>(bin.introductions) /
                          static_cast<double>(bin.positions);
      const double midpoint = (bin.lo + bin.hi) / 2.0;
      points.emplace_back(std::log(midpoint), std::log(rate));
    }
    double alpha;
    if (points.size() < 2) {
      // A single usable bin means introductions die off immediately: the
      // decay is as steep as we can resolve.
      alpha = params.alpha_max;
    } else {
      double mean_x = 0.0;
      double mean_y = 0.0;
      for (const auto& [x, y] : points) {
        mean_x += x;
        mean_y += y;
      }
      mean_x /= static_cast<double>(points.size());
      mean_y /= static_cast<double>(points.size());
      double sxy = 0.0;
      double sxx = 0.0;
      for (const auto& [x, y] : points) {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
      }
      const double slope = sxx > 0 ? sxy / sxx : 0.0;
      alpha = std::clamp(-slope, 0.0, params.alpha_max);
    }
    alpha_sum += alpha;
  }
  return alpha_sum / static_cast<double>(params.shuffles);
}

std::int64_t max_daily_comments(const corpus::AccountRecord& account) {
  std::unordered_map<std::int64_t, std::int64_t> per_day;
  for (const auto& comment : account.comments) {
    per_day[utc_day(comment.created_at)] += 1;
  }
  std::int64_t best = 0;
  for (const auto& [day, count] : per_day) {
    (void)day;
    best = std::max(best, count);
  }
  return best;
}

std::int64_t link_count(const corpus::AccountRecord& account) {
  std::int64_t count = 0;
  for (const auto& comment : account.comments) {
    count += static_cast<std::int64_t>(find_urls(comment.body).size());
  }
  return count;
}

double thread_deviation(const BehaviorContext& context,
                        const corpus::AccountRecord& account) {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& comment : account.comments) {
    if (comment.is_blog()) continue;
    const auto rt = context.index().response_time(comment);
    const std::string* root = context.index().root_blog(comment);
    if (!rt || !root) continue;
    const double* mean = context.blog_mean_response(*root);
    if (!mean) continue;
    total += std::abs(static_cast<double>(*rt) - *mean);
    ++n;
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

BehaviorFeatures behavior_features(const BehaviorContext& context,
                                   const corpus::AccountRecord& account,
                                   std::uint64_t seed,
                                   const InnovationParams& params) {
  BehaviorFeatures features;
  const auto times = response_times(context, account);
  if (!times.empty()) {
    double total = 0.0;
    for (auto t : times) total += static_cast<double>(t);
    features.avg_response_time = total / static_cast<double>(times.size());
  }
  features.avg_comment_length = avg_comment_length(account);
  features.innovation_rate = innovation_rate(account, seed, params);
  features.max_daily_comments = max_daily_comments(account);
  features.link_count = link_count(account);
  features.thread_deviation = thread_deviation(context, account);
  return features;
}

}  // namespace botwatch::behavior
