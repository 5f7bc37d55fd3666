#include <cmath>
#include <string>
#include <vector>

#include "botwatch/textbase.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace botwatch;
using namespace botwatch::textbase;

namespace {

corpus::LabeledCorpus two_account_corpus(const std::string& body_a,
                                         const std::string& body_b) {
  corpus::LabeledCorpus corpus;
  corpus.dataset_end = 1'000'000;
  corpus::AccountRecord a = test_support::account("a");
  a.comments.push_back(test_support::blog("a", "pa", 10, body_a, "ta"));
  corpus::AccountRecord b = test_support::account("b");
  b.comments.push_back(test_support::blog("b", "pb", 20, body_b, "tb"));
  corpus.accounts.push_back(std::move(a));
  corpus.accounts.push_back(std::move(b));
  corpus.labels.emplace("a", corpus::Label::human);
  corpus.labels.emplace("b", corpus::Label::human);
  return corpus;
}

}  // namespace

TEST_CASE("levenshtein agrees with known values") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "") == 0);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "") == 3);
  CHECK(levenshtein("abc", "abc") == 0);
  CHECK(levenshtein("abc", "abd") == 1);
  // Code points, not bytes: the accented character is one edit.
  CHECK(levenshtein("café", "cafe") == 1);
  CHECK(levenshtein("日本語", "日本") == 1);
}

TEST_CASE("levenshtein matches the textbook dynamic program") {
  // Long enough to need more than one 64-bit block per column.
  const std::string left(97, 'a');
  std::string right(141, 'a');
  for (std::size_t i = 0; i < right.size(); i += 7) right[i] = 'b';
  CHECK(levenshtein(left, right) ==
        test_support::levenshtein_oracle(left, right));

  const std::vector<std::string> samples{
      "",
      "a",
      "ab",
      "the quick brown fox jumps over the lazy dog",
      "the quick brown cat naps beside the lazy dog",
      std::string(70, 'x') + "tail",
      "head" + std::string(70, 'x'),
      "résumé naïve façade",
      "resume naive facade",
  };
  for (const std::string& a : samples) {
    for (const std::string& b : samples) {
      CHECK(levenshtein(a, b) == test_support::levenshtein_oracle(a, b));
    }
  }
}

TEST_CASE("frequent_word_count mirrors the occurrence model") {
  corpus::AccountRecord acct = test_support::account("w");
  const std::vector<std::string> bodies{"a b", "a b", "a b", "a c", "a c"};
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    acct.comments.push_back(
        test_support::blog("w", "p" + std::to_string(i), i, bodies[i]));
  }
  CHECK(frequent_word_count(acct) == 3);

  SUBCASE("no articles") {
    CHECK(frequent_word_count(test_support::account("none")) == 0);
  }
  SUBCASE("twenty identical one-word articles") {
    corpus::AccountRecord mono = test_support::account("mono");
    for (int i = 0; i < 20; ++i) {
      mono.comments.push_back(
          test_support::blog("mono", "p" + std::to_string(i), i, "gm"));
    }
    CHECK(frequent_word_count(mono) == 1);
  }
  SUBCASE("replies do not count as articles") {
    corpus::AccountRecord only_replies = test_support::account("r");
    only_replies.comments.push_back(
        test_support::reply("r", "x", "p0", 1, 5, "word word word"));
    CHECK(frequent_word_count(only_replies) == 0);
  }
}

TEST_CASE("tfidf weights follow tf × ln(N/df)") {
  TextbaseParams params;
  params.tfidf_min_count = 1;

  SUBCASE("a ubiquitous word weighs zero") {
    const corpus::LabeledCorpus corpus =
        two_account_corpus("shared unique_a", "shared other");
    const TfidfTable table(corpus, params);
    CHECK(table.weight("a", "shared") == doctest::Approx(0.0));
    CHECK(table.weight("b", "shared") == doctest::Approx(0.0));
  }
  SUBCASE("word four times in one of two documents") {
    const corpus::LabeledCorpus corpus =
        two_account_corpus("gem gem gem gem", "plain text");
    const TfidfTable table(corpus, params);
    CHECK(table.weight("a", "gem") ==
          doctest::Approx(4.0 * std::log(2.0)));
    CHECK(table.weight("b", "gem") == doctest::Approx(0.0));
  }
  SUBCASE("the count floor excludes rare words at the default") {
    // "nine" appears 9 times corpus-wide, "ten" appears 10 times.
    std::string body_a;
    for (int i = 0; i < 9; ++i) body_a += "nine ";
    for (int i = 0; i < 10; ++i) body_a += "ten ";
    const corpus::LabeledCorpus corpus = two_account_corpus(body_a, "filler");
    const TfidfTable table(corpus, TextbaseParams{});
    CHECK(table.weight("a", "nine") == doctest::Approx(0.0));
    CHECK(table.weight("a", "ten") > 0.0);
    CHECK(table.eligible_words() == 1);
  }
  SUBCASE("summary is (0,0) when the account has no eligible words") {
    const corpus::LabeledCorpus corpus = two_account_corpus("x", "y");
    TextbaseParams strict;
    strict.tfidf_min_count = 100;
    const TfidfTable table(corpus, strict);
    const auto [mean, max] = table.summary("a");
    CHECK(mean == 0.0);
    CHECK(max == 0.0);
  }
  SUBCASE("summary aggregates mean and max") {
    const corpus::LabeledCorpus corpus =
        two_account_corpus("gem gem gem gem rare", "plain");
    const TfidfTable table(corpus, params);
    const double gem = 4.0 * std::log(2.0);
    const double rare = 1.0 * std::log(2.0);
    const auto [mean, max] = table.summary("a");
    CHECK(max == doctest::Approx(gem));
    CHECK(mean == doctest::Approx((gem + rare) / 2.0));
  }
}

TEST_CASE("levenshtein_regularity per-category means") {
  SUBCASE("two identical replies") {
    corpus::AccountRecord acct = test_support::account("same");
    acct.comments.push_back(test_support::reply("same", "r1", "p", 1, 1, "hi"));
    acct.comments.push_back(test_support::reply("same", "r2", "p", 1, 2, "hi"));
    const LevenshteinMeans means = levenshtein_regularity(acct);
    CHECK(means.reply == doctest::Approx(0.0));
    CHECK_FALSE(means.sampled_out);
  }
  SUBCASE("replies one substitution apart") {
    corpus::AccountRecord acct = test_support::account("sub");
    acct.comments.push_back(
        test_support::reply("sub", "r1", "p", 1, 1, "abc"));
    acct.comments.push_back(
        test_support::reply("sub", "r2", "p", 1, 2, "abd"));
    CHECK(levenshtein_regularity(acct).reply == doctest::Approx(1.0));
  }
  SUBCASE("a single title has no pairs") {
    corpus::AccountRecord acct = test_support::account("one");
    acct.comments.push_back(test_support::blog("one", "p", 1, "body", "t"));
    const LevenshteinMeans means = levenshtein_regularity(acct);
    CHECK(means.title == 0.0);
    CHECK(means.content == 0.0);
  }
  SUBCASE("three titles average over all unordered pairs") {
    corpus::AccountRecord acct = test_support::account("tri");
    acct.comments.push_back(test_support::blog("tri", "p1", 1, "b", "aa"));
    acct.comments.push_back(test_support::blog("tri", "p2", 2, "b", "ab"));
    acct.comments.push_back(test_support::blog("tri", "p3", 3, "b", "zz"));
    // Pairs: (aa,ab)=1, (aa,zz)=2, (ab,zz)=2 → mean 5/3.
    CHECK(levenshtein_regularity(acct).title == doctest::Approx(5.0 / 3.0));
  }
  SUBCASE("accounts at the post cap are sampled out") {
    corpus::AccountRecord acct = test_support::account("big");
    for (int i = 0; i < 500; ++i) {
      acct.comments.push_back(
          test_support::blog("big", "p" + std::to_string(i), i, "b", "t"));
    }
    const LevenshteinMeans means = levenshtein_regularity(acct);
    CHECK(means.sampled_out);
    CHECK(means.title == 0.0);
    CHECK(means.content == 0.0);
    CHECK(means.reply == 0.0);
  }
  SUBCASE("499 posts and 499 replies stay in sample") {
    corpus::AccountRecord acct = test_support::account("edge");
    for (int i = 0; i < 499; ++i) {
      acct.comments.push_back(
          test_support::blog("edge", "p" + std::to_string(i), i, "x", "t"));
    }
    for (int i = 0; i < 499; ++i) {
      acct.comments.push_back(test_support::reply(
          "edge", "r" + std::to_string(i), "p0", 1, 1000 + i, "x"));
    }
    CHECK_FALSE(levenshtein_regularity(acct).sampled_out);
  }
  SUBCASE("texts are truncated before the distance") {
    TextbaseParams params;
    params.lev_truncate_chars = 4;
    corpus::AccountRecord acct = test_support::account("trunc");
    acct.comments.push_back(
        test_support::reply("trunc", "r1", "p", 1, 1, "abcdWILDLY"));
    acct.comments.push_back(
        test_support::reply("trunc", "r2", "p", 1, 2, "abcdDIFFERENT"));
    CHECK(levenshtein_regularity(acct, params).reply == doctest::Approx(0.0));
  }
}
