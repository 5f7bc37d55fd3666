#include "botwatch/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "botwatch/util.hpp"
#include "nlohmann/json.hpp"

namespace botwatch::corpus {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

std::string get_string(const nlohmann::json& obj, const char* key,
                       std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    fail_line(line, std::string("missing or non-string field \"") + key + "\"");
  }
  return it->get<std::string>();
}

std::int64_t get_timestamp(const nlohmann::json& obj, const char* key,
                           std::size_t line) {
  const std::string text = get_string(obj, key, line);
  try {
    return parse_iso8601_utc(text);
  } catch (const std::exception& e) {
    fail_line(line, std::string("field \"") + key + "\": " + e.what());
  }
}

std::int64_t get_count(const nlohmann::json& obj, const char* key,
                       std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    fail_line(line, std::string("missing or non-integer field \"") + key + "\"");
  }
  auto value = it->get<std::int64_t>();
  if (value < 0) fail_line(line, std::string("negative \"") + key + "\"");
  return value;
}

// Comment ordering used everywhere a comment list is canonical.
bool comment_before(const CommentRecord& a, const CommentRecord& b) {
  if (a.created_at != b.created_at) return a.created_at < b.created_at;
  return a.permlink < b.permlink;
}

void sort_account(AccountRecord& account) {
  std::sort(account.comments.begin(), account.comments.end(), comment_before);
  auto transfer_before = [](const TransferRecord& a, const TransferRecord& b) {
    return std::tie(a.timestamp, a.from, a.to, a.amount) <
           std::tie(b.timestamp, b.from, b.to, b.amount);
  };
  std::sort(account.transfers_out.begin(), account.transfers_out.end(),
            transfer_before);
  std::sort(account.transfers_in.begin(), account.transfers_in.end(),
            transfer_before);
}

}  // namespace

std::size_t AccountRecord::blog_count() const {
  std::size_t n = 0;
  for (const auto& c : comments) n += c.is_blog() ? 1 : 0;
  return n;
}

std::size_t AccountRecord::reply_count() const {
  return comments.size() - blog_count();
}

const AccountRecord* LabeledCorpus::find(const std::string& name) const {
  for (const auto& account : accounts) {
    if (account.name == name) return &account;
  }
  return nullptr;
}

LabeledCorpus ingest(const std::string& path, std::int64_t dataset_end,
                     IngestStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return ingest_stream(in, dataset_end, stats);
}

LabeledCorpus ingest_stream(std::istream& in, std::int64_t dataset_end,
                            IngestStats* stats) {
  LabeledCorpus corpus;
  corpus.dataset_end = dataset_end;
  IngestStats counters;

  struct PendingComment {
    CommentRecord record;
    std::size_t line;
  };
  std::vector<PendingComment> comments;
  struct PendingTransfer {
    TransferRecord record;
    std::size_t line;
  };
  std::vector<PendingTransfer> transfers;
  std::unordered_map<std::string, std::size_t> account_index;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    counters.lines++;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      fail_line(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) fail_line(line_no, "record is not an object");

    const std::string kind = get_string(obj, "kind", line_no);
    if (kind == "account") {
      AccountRecord account;
      account.name = get_string(obj, "name", line_no);
      account.created_at = get_timestamp(obj, "created_at", line_no);
      account.creator = get_string(obj, "creator", line_no);
      account.follower_count = get_count(obj, "follower_count", line_no);
      account.following_count = get_count(obj, "following_count", line_no);
      if (account_index.count(account.name)) {
        fail_line(line_no, "duplicate account \"" + account.name + "\"");
      }
      account_index.emplace(account.name, corpus.accounts.size());
      corpus.accounts.push_back(std::move(account));
      counters.accounts++;
    } else if (kind == "comment") {
      CommentRecord c;
      c.author = get_string(obj, "author", line_no);
      c.permlink = get_string(obj, "permlink", line_no);
      if (auto it = obj.find("parent_id"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) fail_line(line_no, "non-string \"parent_id\"");
        c.parent_id = it->get<std::string>();
      }
      if (auto it = obj.find("depth"); it != obj.end() && !it->is_null()) {
        if (!it->is_number_integer()) {
          fail_line(line_no, "non-integer \"depth\"");
        }
        c.depth = it->get<int>();
      } else {
        c.depth = c.parent_id ? -1 : 0;  // unknown, fill in from the chain
      }
      if (auto it = obj.find("title"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) fail_line(line_no, "non-string \"title\"");
        c.title = it->get<std::string>();
      }
      c.body = get_string(obj, "body", line_no);
      if (auto it = obj.find("tags"); it != obj.end() && !it->is_null()) {
        if (!it->is_array()) fail_line(line_no, "non-array \"tags\"");
        for (const auto& tag : *it) {
          if (!tag.is_string()) fail_line(line_no, "non-string tag");
          c.tags.push_back(tag.get<std::string>());
        }
      }
      c.created_at = get_timestamp(obj, "created_at", line_no);
      comments.push_back({std::move(c), line_no});
      counters.comments++;
    } else if (kind == "transfer") {
      TransferRecord t;
      t.from = get_string(obj, "from", line_no);
      t.to = get_string(obj, "to", line_no);
      auto it = obj.find("amount");
      if (it == obj.end() || !it->is_number()) {
        fail_line(line_no, "missing or non-numeric \"amount\"");
      }
      t.amount = it->get<double>();
      if (t.amount < 0) fail_line(line_no, "negative \"amount\"");
      t.timestamp = get_timestamp(obj, "timestamp", line_no);
      transfers.push_back({std::move(t), line_no});
      counters.transfers++;
    } else if (kind == "label") {
      const std::string name = get_string(obj, "name", line_no);
      const std::string value = get_string(obj, "label", line_no);
      Label label;
      if (value == "bot") {
        label = Label::bot;
      } else if (value == "human") {
        label = Label::human;
      } else {
        fail_line(line_no, "label must be \"bot\" or \"human\", got \"" +
                               value + "\"");
      }
      corpus.labels[name] = label;
      counters.labels++;
    } else {
      fail_line(line_no, "unknown kind \"" + kind + "\"");
    }
  }
  if (in.bad()) throw std::runtime_error("read error after line " +
                                         std::to_string(line_no));

  // Resolve comment depths against the parent chain before scattering the
  // records into their accounts.
  std::unordered_map<std::string, std::size_t> comment_index;
  comment_index.reserve(comments.size());
  for (std::size_t i = 0; i < comments.size(); ++i) {
    auto [it, inserted] =
        comment_index.emplace(comments[i].record.permlink, i);
    if (!inserted) {
      fail_line(comments[i].line,
                "duplicate permlink \"" + comments[i].record.permlink + "\"");
    }
  }
  std::vector<int> resolved(comments.size(), -1);
  for (std::size_t i = 0; i < comments.size(); ++i) {
    if (resolved[i] >= 0) continue;
    // Walk up until a blog or an already-resolved ancestor, then unwind.
    std::vector<std::size_t> chain;
    std::size_t j = i;
    while (true) {
      const CommentRecord& c = comments[j].record;
      if (!c.parent_id) {
        resolved[j] = 0;
        break;
      }
      auto it = comment_index.find(*c.parent_id);
      if (it == comment_index.end()) {
        fail_line(comments[j].line, "dangling parent_id \"" + *c.parent_id +
                                        "\" of comment \"" + c.permlink +
                                        "\"");
      }
      if (resolved[it->second] >= 0) {
        chain.push_back(j);
        j = it->second;
        break;
      }
      chain.push_back(j);
      if (chain.size() > comments.size()) {
        fail_line(comments[j].line,
                  "parent cycle involving \"" + c.permlink + "\"");
      }
      j = it->second;
    }
    int depth = resolved[j];
    for (auto rit = chain.rbegin(); rit != chain.rend(); ++rit) {
      resolved[*rit] = ++depth;
    }
  }
  for (std::size_t i = 0; i < comments.size(); ++i) {
    if (comments[i].record.depth != resolved[i]) {
      if (comments[i].record.depth >= 0) counters.depth_conflicts++;
      comments[i].record.depth = resolved[i];
    }
  }

  for (auto& pending : comments) {
    auto it = account_index.find(pending.record.author);
    if (it == account_index.end()) {
      fail_line(pending.line, "comment author \"" + pending.record.author +
                                  "\" has no account record");
    }
    corpus.accounts[it->second].comments.push_back(std::move(pending.record));
  }
  for (auto& pending : transfers) {
    auto from = account_index.find(pending.record.from);
    auto to = account_index.find(pending.record.to);
    if (from == account_index.end() && to == account_index.end()) {
      fail_line(pending.line, "transfer touches no known account (" +
                                  pending.record.from + " -> " +
                                  pending.record.to + ")");
    }
    if (from != account_index.end()) {
      corpus.accounts[from->second].transfers_out.push_back(pending.record);
    }
    if (to != account_index.end()) {
      corpus.accounts[to->second].transfers_in.push_back(
          std::move(pending.record));
    }
  }
  for (const auto& [name, label] : corpus.labels) {
    (void)label;
    if (!account_index.count(name)) {
      throw std::runtime_error("label for unknown account \"" + name + "\"");
    }
  }
  for (auto& account : corpus.accounts) {
    sort_account(account);
    if (account.created_at > dataset_end) {
      throw std::runtime_error("account \"" + account.name +
                               "\" created after dataset end");
    }
    for (const auto& c : account.comments) {
      if (c.created_at > dataset_end) {
        throw std::runtime_error("comment \"" + c.permlink +
                                 "\" after dataset end");
      }
    }
    for (const auto& t : account.transfers_out) {
      if (t.timestamp > dataset_end) {
        throw std::runtime_error("transfer from \"" + t.from +
                                 "\" after dataset end");
      }
    }
  }

  if (stats) *stats = counters;
  return corpus;
}

void export_corpus(const LabeledCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  export_stream(corpus, out);
  if (!out) throw std::runtime_error("write error on " + path);
}

void export_stream(const LabeledCorpus& corpus, std::ostream& out) {
  std::vector<const AccountRecord*> accounts;
  accounts.reserve(corpus.accounts.size());
  std::unordered_set<std::string> known;
  for (const auto& account : corpus.accounts) {
    accounts.push_back(&account);
    known.insert(account.name);
  }
  std::sort(accounts.begin(), accounts.end(),
            [](const AccountRecord* a, const AccountRecord* b) {
              return a->name < b->name;
            });

  auto emit = [&out](const ordered_json& obj) { out << obj.dump() << '\n'; };

  for (const AccountRecord* account : accounts) {
    ordered_json obj;
    obj["kind"] = "account";
    obj["name"] = account->name;
    obj["created_at"] = format_iso8601_utc(account->created_at);
    obj["creator"] = account->creator;
    obj["follower_count"] = account->follower_count;
    obj["following_count"] = account->following_count;
    emit(obj);
  }
  for (const AccountRecord* account : accounts) {
    for (const auto& c : account->comments) {
      ordered_json obj;
      obj["kind"] = "comment";
      obj["author"] = c.author;
      obj["permlink"] = c.permlink;
      if (c.parent_id) obj["parent_id"] = *c.parent_id;
      obj["depth"] = c.depth;
      obj["title"] = c.title;
      obj["body"] = c.body;
      obj["tags"] = c.tags;
      obj["created_at"] = format_iso8601_utc(c.created_at);
      emit(obj);
    }
  }
  // Each transfer with a known sender is emitted from the sender's ledger;
  // inbound copies are emitted only when the sender is outside the corpus,
  // so re-ingesting attaches every record exactly once per side.
  for (const AccountRecord* account : accounts) {
    auto write_transfer = [&](const TransferRecord& t) {
      ordered_json obj;
      obj["kind"] = "transfer";
      obj["from"] = t.from;
      obj["to"] = t.to;
      obj["amount"] = t.amount;
      obj["timestamp"] = format_iso8601_utc(t.timestamp);
      emit(obj);
    };
    for (const auto& t : account->transfers_out) write_transfer(t);
    for (const auto& t : account->transfers_in) {
      if (!known.count(t.from)) write_transfer(t);
    }
  }
  for (const auto& [name, label] : corpus.labels) {
    ordered_json obj;
    obj["kind"] = "label";
    obj["name"] = name;
    obj["label"] = label == Label::bot ? "bot" : "human";
    emit(obj);
  }
}

LabeledCorpus filter_active(const LabeledCorpus& corpus, int min_activity) {
  if (min_activity < 0) {
    throw std::invalid_argument("min_activity must be non-negative");
  }
  LabeledCorpus kept;
  kept.dataset_end = corpus.dataset_end;
  for (const auto& account : corpus.accounts) {
    if (account.comments.size() >= static_cast<std::size_t>(min_activity)) {
      kept.accounts.push_back(account);
      auto it = corpus.labels.find(account.name);
      if (it != corpus.labels.end()) kept.labels.emplace(*it);
    }
  }
  return kept;
}

std::int64_t latest_event_time(const LabeledCorpus& corpus) {
  std::int64_t latest = std::numeric_limits<std::int64_t>::min();
  for (const auto& account : corpus.accounts) {
    latest = std::max(latest, account.created_at);
    for (const auto& comment : account.comments) {
      latest = std::max(latest, comment.created_at);
    }
    for (const auto& transfer : account.transfers_out) {
      latest = std::max(latest, transfer.timestamp);
    }
    for (const auto& transfer : account.transfers_in) {
      latest = std::max(latest, transfer.timestamp);
    }
  }
  return latest == std::numeric_limits<std::int64_t>::min() ? 0 : latest;
}

// --- ThreadIndex -----------------------------------------------------------

ThreadIndex::ThreadIndex(const LabeledCorpus& corpus) {
  for (const auto& account : corpus.accounts) {
    for (const auto& c : account.comments) {
      by_id_.emplace(c.permlink, &c);
    }
  }
  for (const auto& [id, comment] : by_id_) {
    (void)id;
    if (comment->parent_id) {
      if (by_id_.count(*comment->parent_id)) {
        children_[*comment->parent_id].push_back(comment);
      } else {
        dangling_parents_++;
      }
    }
  }
  auto ptr_before = [](const CommentRecord* a, const CommentRecord* b) {
    if (a->created_at != b->created_at) return a->created_at < b->created_at;
    return a->permlink < b->permlink;
  };
  for (auto& [id, kids] : children_) {
    (void)id;
    std::sort(kids.begin(), kids.end(), ptr_before);
  }
  // Resolve each comment's root blog iteratively, memoizing along the chain.
  for (const auto& [id, comment] : by_id_) {
    if (roots_.count(id)) continue;
    std::vector<const std::string*> chain;
    const CommentRecord* cur = comment;
    const std::string* root = nullptr;
    while (true) {
      auto memo = roots_.find(cur->permlink);
      if (memo != roots_.end()) {
        root = &memo->second;
        break;
      }
      if (!cur->parent_id) {
        roots_.emplace(cur->permlink, cur->permlink);
        root = &roots_.at(cur->permlink);
        break;
      }
      chain.push_back(&cur->permlink);
      auto parent = by_id_.find(*cur->parent_id);
      if (parent == by_id_.end()) {
        root = nullptr;  // broken chain: no root for anything on it
        break;
      }
      cur = parent->second;
    }
    if (root) {
      const std::string root_copy = *root;
      for (const std::string* link : chain) roots_.emplace(*link, root_copy);
    }
  }
  for (const auto& [id, comment] : by_id_) {
    if (comment->is_blog()) continue;
    auto root = roots_.find(id);
    if (root != roots_.end()) threads_[root->second].push_back(comment);
  }
  for (auto& [id, replies] : threads_) {
    (void)id;
    std::sort(replies.begin(), replies.end(), ptr_before);
  }
}

const CommentRecord* ThreadIndex::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : it->second;
}

std::span<const CommentRecord* const> ThreadIndex::children(
    const std::string& id) const {
  auto it = children_.find(id);
  if (it == children_.end()) return {};
  return {it->second.data(), it->second.size()};
}

std::optional<std::int64_t> ThreadIndex::response_time(
    const CommentRecord& reply) const {
  if (!reply.parent_id) return std::nullopt;
  auto parent = by_id_.find(*reply.parent_id);
  if (parent == by_id_.end()) return std::nullopt;
  auto kids = children(*reply.parent_id);
  const CommentRecord* previous = parent->second;
  for (const CommentRecord* kid : kids) {
    if (kid == &reply) {
      return reply.created_at - previous->created_at;
    }
    previous = kid;
  }
  return std::nullopt;  // reply not indexed under its parent
}

const std::string* ThreadIndex::root_blog(const CommentRecord& comment) const {
  auto it = roots_.find(comment.permlink);
  return it == roots_.end() ? nullptr : &it->second;
}

std::span<const CommentRecord* const> ThreadIndex::thread_replies(
    const std::string& blog_id) const {
  auto it = threads_.find(blog_id);
  if (it == threads_.end()) return {};
  return {it->second.data(), it->second.size()};
}

}  // namespace botwatch::corpus
