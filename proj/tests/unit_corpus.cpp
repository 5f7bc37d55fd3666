#include <regex>
#include <set>
#include <sstream>
#include <string>

#include "botwatch/corpus.hpp"
#include "botwatch/util.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace botwatch;
using namespace botwatch::corpus;

namespace {

constexpr std::int64_t kEnd = 4102444800;  // 2100-01-01, far future

LabeledCorpus ingest_text(const std::string& text, std::int64_t end = kEnd,
                          IngestStats* stats = nullptr) {
  std::istringstream in(text);
  return ingest_stream(in, end, stats);
}

std::string export_text(const LabeledCorpus& corpus) {
  std::ostringstream out;
  export_stream(corpus, out);
  return out.str();
}

const char* kTwoCommentCorpus = R"({"kind":"account","name":"alice","created_at":"2019-01-01T00:00:00Z","creator":"steem","follower_count":1,"following_count":2}
{"kind":"account","name":"bob","created_at":"2019-01-02T00:00:00Z","creator":"steem","follower_count":3,"following_count":4}
{"kind":"comment","author":"alice","permlink":"p1","depth":0,"title":"hi","body":"first post","tags":["intro"],"created_at":"2019-02-01T00:00:00Z"}
{"kind":"comment","author":"bob","permlink":"p2","parent_id":"p1","depth":1,"title":"","body":"welcome","tags":[],"created_at":"2019-02-01T01:00:00Z"}
{"kind":"label","name":"alice","label":"human"}
{"kind":"label","name":"bob","label":"bot"}
)";

}  // namespace

TEST_CASE("iso8601 parsing and formatting") {
  CHECK(parse_iso8601_utc("2019-02-01T00:00:00Z") == 1548979200);
  CHECK(parse_iso8601_utc("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_iso8601_utc("2019-02-01 00:00:00Z") == 1548979200);
  CHECK(parse_iso8601_utc("2019-02-01T00:00:00+00:00") == 1548979200);
  CHECK(parse_iso8601_utc("2019-02-01T00:00:00.75Z") == 1548979200);
  CHECK(format_iso8601_utc(1548979200) == "2019-02-01T00:00:00Z");
  CHECK(parse_iso8601_utc(format_iso8601_utc(123456789)) == 123456789);
  CHECK_THROWS(parse_iso8601_utc("not a time"));
  CHECK_THROWS(parse_iso8601_utc("2019-02-01T00:00:00+02:00"));
  CHECK_THROWS(parse_iso8601_utc("2019-13-01T00:00:00Z"));
}

TEST_CASE("ingest builds depths from the parent chain") {
  const LabeledCorpus corpus = ingest_text(kTwoCommentCorpus);
  REQUIRE(corpus.accounts.size() == 2);
  const AccountRecord* alice = corpus.find("alice");
  const AccountRecord* bob = corpus.find("bob");
  REQUIRE(alice != nullptr);
  REQUIRE(bob != nullptr);
  REQUIRE(alice->comments.size() == 1);
  REQUIRE(bob->comments.size() == 1);
  CHECK(alice->comments[0].depth == 0);
  CHECK(alice->comments[0].is_blog());
  CHECK(bob->comments[0].depth == 1);
  CHECK_FALSE(bob->comments[0].is_blog());
  CHECK(corpus.labels.at("alice") == Label::human);
  CHECK(corpus.labels.at("bob") == Label::bot);
}

TEST_CASE("ingest corrects a stored depth that disagrees with the chain") {
  std::string text = kTwoCommentCorpus;
  text = std::regex_replace(text, std::regex("\"parent_id\":\"p1\",\"depth\":1"),
                            "\"parent_id\":\"p1\",\"depth\":7");
  IngestStats stats;
  const LabeledCorpus corpus = ingest_text(text, kEnd, &stats);
  CHECK(corpus.find("bob")->comments[0].depth == 1);
  CHECK(stats.depth_conflicts == 1);
}

TEST_CASE("ingest rejects a dangling parent id, naming the orphan") {
  std::string text = kTwoCommentCorpus;
  text = std::regex_replace(text, std::regex("\"parent_id\":\"p1\""),
                            "\"parent_id\":\"missing\"");
  try {
    ingest_text(text);
    FAIL("expected an error");
  } catch (const std::exception& error) {
    const std::string what = error.what();
    CHECK(what.find("p2") != std::string::npos);
  }
}

TEST_CASE("ingest reports malformed lines by number") {
  std::string text = kTwoCommentCorpus;
  text += "this is not json\n";
  try {
    ingest_text(text);
    FAIL("expected an error");
  } catch (const std::exception& error) {
    CHECK(std::string(error.what()).find("7") != std::string::npos);
  }
}

TEST_CASE("ingest validation failures") {
  SUBCASE("comment by unknown account") {
    std::string text = kTwoCommentCorpus;
    text = std::regex_replace(text, std::regex("\"author\":\"bob\""),
                              "\"author\":\"carol\"");
    CHECK_THROWS(ingest_text(text));
  }
  SUBCASE("duplicate permlink") {
    std::string text = kTwoCommentCorpus;
    text = std::regex_replace(text, std::regex("\"permlink\":\"p2\""),
                              "\"permlink\":\"p1\"");
    CHECK_THROWS(ingest_text(text));
  }
  SUBCASE("label of unknown account") {
    std::string text = kTwoCommentCorpus;
    text += R"({"kind":"label","name":"carol","label":"bot"})"
            "\n";
    CHECK_THROWS(ingest_text(text));
  }
  SUBCASE("timestamp after the dataset end") {
    CHECK_THROWS(ingest_text(kTwoCommentCorpus, parse_iso8601_utc(
                                                    "2019-02-01T00:30:00Z")));
  }
  SUBCASE("unknown kind") {
    std::string text = kTwoCommentCorpus;
    text += R"({"kind":"vote","voter":"alice"})"
            "\n";
    CHECK_THROWS(ingest_text(text));
  }
}

TEST_CASE("ingest of an exported corpus is the identity") {
  const LabeledCorpus corpus =
      synthesize(SynthSpec{}, /*seed=*/99);
  const std::string once = export_text(corpus);
  const LabeledCorpus again = ingest_text(once, corpus.dataset_end);
  CHECK(export_text(again) == once);
}

TEST_CASE("a 984-account corpus with 325 bot labels loads at full size") {
  std::ostringstream text;
  for (int i = 0; i < 984; ++i) {
    text << R"({"kind":"account","name":"acct)" << i
         << R"(","created_at":"2019-01-01T00:00:00Z","creator":"steem",)"
         << R"("follower_count":0,"following_count":0})"
         << "\n";
  }
  for (int i = 0; i < 984; ++i) {
    text << R"({"kind":"label","name":"acct)" << i << R"(","label":")"
         << (i < 325 ? "bot" : "human") << R"("})"
         << "\n";
  }
  const LabeledCorpus corpus = ingest_text(text.str());
  CHECK(corpus.accounts.size() == 984);
  std::size_t bots = 0;
  for (const auto& [name, label] : corpus.labels) {
    bots += label == Label::bot;
  }
  CHECK(bots == 325);
  CHECK(corpus.labels.size() == 984);
}

TEST_CASE("filter_active boundary at the activity threshold") {
  LabeledCorpus corpus;
  corpus.dataset_end = kEnd;
  for (int count : {39, 40, 41}) {
    AccountRecord a = test_support::account("acct" + std::to_string(count));
    for (int i = 0; i < count; ++i) {
      a.comments.push_back(test_support::blog(
          a.name, a.name + "-p" + std::to_string(i), 1000 + i, "text"));
    }
    corpus.accounts.push_back(std::move(a));
    corpus.labels.emplace("acct" + std::to_string(count), Label::human);
  }

  const LabeledCorpus kept = filter_active(corpus, 40);
  CHECK(kept.accounts.size() == 2);
  CHECK(kept.find("acct39") == nullptr);
  CHECK(kept.find("acct40") != nullptr);
  CHECK(kept.find("acct41") != nullptr);
  CHECK(kept.labels.count("acct39") == 0);

  SUBCASE("zero threshold is the identity") {
    const LabeledCorpus all = filter_active(corpus, 0);
    CHECK(all.accounts.size() == corpus.accounts.size());
    CHECK(all.labels.size() == corpus.labels.size());
  }
  SUBCASE("negative threshold is rejected") {
    CHECK_THROWS(filter_active(corpus, -1));
  }
}

TEST_CASE("synthesize is byte-reproducible and honors label counts") {
  SynthSpec spec;
  spec.bots = 10;
  spec.humans = 20;
  const LabeledCorpus a = synthesize(spec, 7);
  const LabeledCorpus b = synthesize(spec, 7);
  CHECK(export_text(a) == export_text(b));

  std::size_t bots = 0;
  std::size_t humans = 0;
  for (const auto& [name, label] : a.labels) {
    (label == Label::bot ? bots : humans) += 1;
  }
  CHECK(bots == 10);
  CHECK(humans == 20);
  CHECK(a.accounts.size() == 30);

  const LabeledCorpus c = synthesize(spec, 8);
  CHECK(export_text(a) != export_text(c));
  std::size_t bots_c = 0;
  for (const auto& [name, label] : c.labels) bots_c += label == Label::bot;
  CHECK(bots_c == 10);
}

TEST_CASE("bot texts differ only in numbers, accounts, and links") {
  SynthSpec spec;
  spec.bots = 6;
  spec.humans = 2;
  const LabeledCorpus corpus = synthesize(spec, 21);
  // Account names, link ids, and numeric slots all vary only in digits, so
  // masking digit runs collapses every instance of one template to one string.
  const std::regex digits("[0-9]+");
  for (const auto& account : corpus.accounts) {
    if (corpus.labels.at(account.name) != Label::bot) continue;
    std::set<std::string> masked;
    for (const auto& comment : account.comments) {
      masked.insert(std::regex_replace(comment.body, digits, "#"));
    }
    CHECK(masked.size() <= static_cast<std::size_t>(spec.bot_templates_max));
    CHECK(!masked.empty());
  }
}

TEST_CASE("human accounts draw on a wide vocabulary") {
  SynthSpec spec;
  spec.bots = 1;
  spec.humans = 1;
  spec.human_vocab_min = 5000;
  spec.human_vocab_max = 5000;
  spec.min_comments = 100;
  spec.max_comments = 100;
  const LabeledCorpus corpus = synthesize(spec, 3);
  for (const auto& account : corpus.accounts) {
    if (corpus.labels.at(account.name) != Label::human) continue;
    std::set<std::string> words;
    for (const auto& comment : account.comments) {
      std::istringstream body(comment.body);
      std::string word;
      while (body >> word) words.insert(word);
    }
    CHECK(words.size() > 300);
  }
}

TEST_CASE("synthesize rejects empty configurations") {
  SynthSpec spec;
  spec.bot_templates_min = 0;
  spec.bot_templates_max = 0;
  CHECK_THROWS(synthesize(spec, 1));

  SynthSpec vocab;
  vocab.human_vocab_min = 0;
  vocab.human_vocab_max = 0;
  CHECK_THROWS(synthesize(vocab, 1));

  SynthSpec counts;
  counts.bots = -1;
  CHECK_THROWS(synthesize(counts, 1));
}

TEST_CASE("synthesized corpora satisfy the data-model invariants") {
  const LabeledCorpus corpus = synthesize(SynthSpec{}, 17);
  for (const auto& [name, label] : corpus.labels) {
    CHECK(corpus.find(name) != nullptr);
  }
  for (const auto& account : corpus.accounts) {
    std::int64_t previous = -1;
    for (const auto& comment : account.comments) {
      CHECK(comment.author == account.name);
      CHECK(comment.created_at >= previous);
      CHECK(comment.created_at <= corpus.dataset_end);
      CHECK((comment.depth == 0) == !comment.parent_id.has_value());
      previous = comment.created_at;
    }
    for (const auto& transfer : account.transfers_out) {
      CHECK(transfer.from == account.name);
      CHECK(transfer.amount >= 0.0);
      CHECK(transfer.timestamp <= corpus.dataset_end);
    }
    for (const auto& transfer : account.transfers_in) {
      CHECK(transfer.to == account.name);
    }
  }

  ThreadIndex index(corpus);
  for (const auto& account : corpus.accounts) {
    for (const auto& comment : account.comments) {
      if (comment.is_blog()) continue;
      const CommentRecord* parent = index.find(*comment.parent_id);
      REQUIRE(parent != nullptr);
      CHECK(parent->depth == comment.depth - 1);
      CHECK(parent->created_at <= comment.created_at);
    }
  }
}

TEST_CASE("thread index response times follow the sibling rule") {
  LabeledCorpus corpus;
  corpus.dataset_end = kEnd;
  AccountRecord op = test_support::account("op");
  op.comments.push_back(test_support::blog("op", "root", 0, "post"));
  AccountRecord fan = test_support::account("fan");
  fan.comments.push_back(test_support::reply("fan", "r1", "root", 1, 60));
  fan.comments.push_back(test_support::reply("fan", "r2", "root", 1, 100));
  fan.comments.push_back(test_support::reply("fan", "r3", "r1", 2, 130));
  test_support::sort_comments(fan);
  corpus.accounts.push_back(std::move(op));
  corpus.accounts.push_back(std::move(fan));

  ThreadIndex index(corpus);
  const AccountRecord* account = corpus.find("fan");
  // First reply under the blog: measured from the parent.
  CHECK(index.response_time(account->comments[0]) == 60);
  // Second sibling: measured from the previous sibling.
  CHECK(index.response_time(account->comments[1]) == 40);
  // First reply under r1: measured from r1.
  CHECK(index.response_time(account->comments[2]) == 70);
  CHECK(*index.root_blog(account->comments[2]) == "root");
  CHECK(index.thread_replies("root").size() == 3);
}

TEST_CASE("latest_event_time scans all record kinds") {
  LabeledCorpus corpus;
  CHECK(latest_event_time(corpus) == 0);
  AccountRecord a = test_support::account("a", 50);
  a.comments.push_back(test_support::blog("a", "p", 100));
  a.transfers_out.push_back({"a", "b", 1.0, 900});
  corpus.accounts.push_back(std::move(a));
  CHECK(latest_event_time(corpus) == 900);
}
