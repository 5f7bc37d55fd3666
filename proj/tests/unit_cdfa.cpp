#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "botwatch/cdfa.hpp"
#include "botwatch/util.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace botwatch;
using namespace botwatch::cdfa;

namespace {

ArticleSet make_articles(std::vector<std::vector<std::string>> words) {
  ArticleSet set;
  set.articles = std::move(words);
  return set;
}

std::vector<int> as_ints(const std::vector<std::uint8_t>& mask) {
  return std::vector<int>(mask.begin(), mask.end());
}

}  // namespace

TEST_CASE("tokenize splits on whitespace runs only") {
  CHECK(tokenize("a b  c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t\n ").empty());
  CHECK(tokenize("Hello Hello!") ==
        std::vector<std::string>{"Hello", "Hello!"});
  CHECK(tokenize("Hello")[0] != tokenize("Hello!")[0]);
  CHECK(tokenize("UPPER upper") == std::vector<std::string>{"UPPER", "upper"});
}

TEST_CASE("occurrence model on the five-article example") {
  const ArticleSet articles = make_articles(
      {{"a", "b"}, {"a", "b"}, {"a", "b"}, {"a", "c"}, {"a", "c"}});
  const OccurrenceModel model = build_occurrence(articles);
  const test_support::OccurrenceOracle oracle =
      test_support::occurrence_oracle(articles.articles);

  CHECK(model.vocabulary == std::vector<std::string>{"a", "b", "c"});
  CHECK(model.total_occurrence == std::vector<std::int64_t>{5, 3, 2});
  CHECK(model.frequent_mask == std::vector<std::uint8_t>{1, 1, 1});
  CHECK(model.vocabulary == oracle.vocabulary);
  CHECK(model.total_occurrence == oracle.totals);
  CHECK(as_ints(model.frequent_mask) == oracle.frequent);

  const std::vector<double> d = distances(model);
  REQUIRE(d.size() == 5);
  for (double value : d) CHECK(value == doctest::Approx(1.0));
  for (std::size_t j = 0; j < d.size(); ++j) {
    CHECK(d[j] == doctest::Approx(oracle.distances[j]));
  }
}

TEST_CASE("single one-word article") {
  const OccurrenceModel model = build_occurrence(make_articles({{"x"}}));
  CHECK(model.vocabulary == std::vector<std::string>{"x"});
  CHECK(model.occurrence_vectors ==
        std::vector<std::vector<std::uint8_t>>{{1}});
  CHECK(model.total_occurrence == std::vector<std::int64_t>{1});
  CHECK(model.frequent_mask == std::vector<std::uint8_t>{1});
}

TEST_CASE("a word in 1 of 20 articles is below the 10% bar") {
  std::vector<std::vector<std::string>> articles(20, {"common"});
  articles[7].push_back("rare");
  const OccurrenceModel model = build_occurrence(make_articles(articles));
  REQUIRE(model.vocabulary.size() == 2);
  const std::size_t rare =
      model.vocabulary[0] == "rare" ? 0 : 1;
  CHECK(model.total_occurrence[rare] == 1);
  CHECK(model.total_occurrence[1 - rare] == 20);
  CHECK(model.frequent_mask[rare] == 0);      // 1·10 < 20
  CHECK(model.frequent_mask[1 - rare] == 1);  // 20·10 ≥ 20
  // Exactly at the bar: 2 of 20 qualifies (2·10 ≥ 20).
  articles[3].push_back("rare");
  const OccurrenceModel at_bar = build_occurrence(make_articles(articles));
  CHECK(at_bar.frequent_mask[rare] == 1);
}

TEST_CASE("build_occurrence rejects empty article sets") {
  CHECK_THROWS(build_occurrence(make_articles({})));
  CHECK_THROWS(build_occurrence(make_articles({{}, {}, {}})));
}

TEST_CASE("distance special cases") {
  OccurrenceModel model;
  model.vocabulary = {"w", "x", "y", "z"};
  model.total_occurrence = {4, 4, 4, 4};
  model.frequent_mask = {1, 1, 1, 1};
  model.occurrence_vectors = {{1, 1, 1, 1}, {0, 0, 0, 0}, {1, 1, 0, 1}};
  const std::vector<double> d = distances(model);
  REQUIRE(d.size() == 3);
  CHECK(d[0] == doctest::Approx(0.0));  // V_j == V_freq
  CHECK(d[1] == doctest::Approx(2.0));  // sqrt(4)
  CHECK(d[2] == doctest::Approx(1.0));  // one mismatch
}

TEST_CASE("dpgmm degenerate and deterministic behavior") {
  const std::vector<double> flat{1.0, 1.0, 1.0, 1.0, 1.0};
  const std::vector<int> assignment = dpgmm_cluster(flat, 11);
  REQUIRE(assignment.size() == flat.size());
  CHECK(std::set<int>(assignment.begin(), assignment.end()).size() == 1);

  botwatch::Rng rng(5);
  std::vector<double> mixed;
  for (int i = 0; i < 60; ++i) mixed.push_back(rng.normal(0.0, 1.0));
  for (int i = 0; i < 60; ++i) mixed.push_back(rng.normal(50.0, 1.0));
  const std::vector<int> first = dpgmm_cluster(mixed, 33);
  const std::vector<int> second = dpgmm_cluster(mixed, 33);
  CHECK(first == second);

  DpgmmParams params;
  for (int label : first) {
    CHECK(label >= 0);
    CHECK(label < params.max_components);
  }

  CHECK_THROWS(dpgmm_cluster({}, 1));
}

TEST_CASE("dpgmm separates two tight, distant groups") {
  botwatch::Rng rng(1234);
  std::vector<double> values;
  for (int i = 0; i < 100; ++i) values.push_back(rng.normal(0.0, 1.0));
  for (int i = 0; i < 100; ++i) values.push_back(rng.normal(50.0, 1.0));
  const std::vector<int> assignment = dpgmm_cluster(values, 77);
  CHECK(test_support::purity_against_cut(values, assignment, 25.0) >= 0.99);

  // The Gibbs sampler may leave a stray singleton cluster behind, but the two
  // dominant clusters must absorb nearly everything.
  std::map<int, int> sizes;
  for (int label : assignment) ++sizes[label];
  CHECK(sizes.size() <= 3);
  std::vector<int> counts;
  for (const auto& [label, count] : sizes) counts.push_back(count);
  std::sort(counts.rbegin(), counts.rend());
  REQUIRE(counts.size() >= 2);
  CHECK(counts[0] + counts[1] >= 198);
}

TEST_CASE("mac_cdfa summaries") {
  SUBCASE("all distances equal") {
    const MacSummary mac = mac_cdfa({1.0, 1.0, 1.0, 1.0, 1.0}, 9);
    CHECK(mac.mean == doctest::Approx(1.0));
    CHECK(mac.variance == doctest::Approx(0.0));
    CHECK(mac.qualified_count == 1);
  }
  SUBCASE("two clean groups of ten") {
    std::vector<double> values(10, 0.0);
    values.insert(values.end(), 10, 5.0);
    const MacSummary mac = mac_cdfa(values, 13);
    CHECK(mac.mean == doctest::Approx(0.0));
    CHECK(mac.variance == doctest::Approx(0.0));
    CHECK(mac.qualified_count == 2);
  }
  SUBCASE("sizes 8 and 2 out of 10 both qualify") {
    std::vector<double> values(8, 0.0);
    values.insert(values.end(), 2, 100.0);
    const MacSummary mac = mac_cdfa(values, 29);
    CHECK(mac.qualified_count == 2);  // 2·5 ≥ 10
    CHECK(mac.mean == doctest::Approx(0.0));
  }
  SUBCASE("fewer than five values violate the contract") {
    CHECK_THROWS(mac_cdfa({1.0, 2.0, 3.0, 4.0}, 1));
  }
}

TEST_CASE("cdfa_features source gating") {
  SUBCASE("3 blogs and 20 replies: only the reply source computes") {
    corpus::AccountRecord acct = test_support::account("a");
    for (int i = 0; i < 3; ++i) {
      acct.comments.push_back(test_support::blog(
          "a", "b" + std::to_string(i), i, "body words here", "title here"));
    }
    for (int i = 0; i < 20; ++i) {
      acct.comments.push_back(test_support::reply(
          "a", "r" + std::to_string(i), "b0", 1, 100 + i,
          i % 2 == 0 ? "thanks for sharing" : "good post my friend"));
    }
    const CdfaFeatures features = cdfa_features(acct, 3);
    CHECK(features.title.mean == 0.0);
    CHECK(features.title.variance == 0.0);
    CHECK(features.title.qualified_count == 0);
    CHECK(features.content.mean == 0.0);
    CHECK(features.content.qualified_count == 0);
    CHECK(features.reply.qualified_count >= 1);
  }
  SUBCASE("a fixed form posted 50 times has zero content variance") {
    corpus::AccountRecord acct = test_support::account("bot");
    for (int i = 0; i < 50; ++i) {
      acct.comments.push_back(test_support::blog(
          "bot", "p" + std::to_string(i), i, "buy the dip now", "daily"));
    }
    const CdfaFeatures features = cdfa_features(acct, 4);
    CHECK(features.content.variance == doctest::Approx(0.0));
    CHECK(features.content.qualified_count == 1);
  }
  SUBCASE("an account with no comments is all zeros") {
    const CdfaFeatures features =
        cdfa_features(test_support::account("empty"), 5);
    for (const MacSummary* mac :
         {&features.title, &features.content, &features.reply}) {
      CHECK(mac->mean == 0.0);
      CHECK(mac->variance == 0.0);
      CHECK(mac->qualified_count == 0);
    }
  }
  SUBCASE("five blogs whose titles are all empty leave the title source zero") {
    corpus::AccountRecord acct = test_support::account("untitled");
    for (int i = 0; i < 5; ++i) {
      acct.comments.push_back(test_support::blog(
          "untitled", "p" + std::to_string(i), i, "some words", ""));
    }
    const CdfaFeatures features = cdfa_features(acct, 6);
    CHECK(features.title.qualified_count == 0);
    CHECK(features.content.qualified_count >= 1);
  }
}
