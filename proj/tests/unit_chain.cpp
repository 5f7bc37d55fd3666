#include <string>
#include <vector>

#include "botwatch/chain.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace botwatch;
using namespace botwatch::chain;

namespace {

constexpr std::int64_t kDay = 86'400;

corpus::TransferRecord out(const std::string& from, const std::string& to,
                           std::int64_t at) {
  return corpus::TransferRecord{from, to, 1.0, at};
}

}  // namespace

TEST_CASE("transfer_stats counts events over the activation window") {
  SUBCASE("no transfers") {
    const TransferStats stats =
        transfer_stats(test_support::account("quiet"));
    CHECK(stats.n_transfers == 0);
    CHECK(stats.activation_time == 0);
    CHECK(stats.daily_transfer == doctest::Approx(0.0));
  }
  SUBCASE("ten transfers over exactly five days") {
    corpus::AccountRecord acct = test_support::account("busy");
    for (int i = 0; i < 10; ++i) {
      // First at t=0, last at t=5 days: window of exactly 5 days.
      acct.transfers_out.push_back(out("busy", "x", i * (5 * kDay) / 9));
    }
    acct.transfers_out.back().timestamp = 5 * kDay;
    const TransferStats stats = transfer_stats(acct);
    CHECK(stats.n_transfers == 10);
    CHECK(stats.activation_time == 5 * kDay);
    CHECK(stats.daily_transfer == doctest::Approx(2.0));
  }
  SUBCASE("all transfers at one timestamp use the single-day convention") {
    corpus::AccountRecord acct = test_support::account("burst");
    for (int i = 0; i < 3; ++i) {
      acct.transfers_out.push_back(out("burst", "x", 777));
    }
    const TransferStats stats = transfer_stats(acct);
    CHECK(stats.n_transfers == 3);
    CHECK(stats.activation_time == 0);
    CHECK(stats.daily_transfer == doctest::Approx(3.0));
  }
  SUBCASE("incoming and outgoing both count") {
    corpus::AccountRecord acct = test_support::account("both");
    acct.transfers_out.push_back(out("both", "x", 100));
    acct.transfers_in.push_back(out("y", "both", 500));
    const TransferStats stats = transfer_stats(acct);
    CHECK(stats.n_transfers == 2);
    CHECK(stats.activation_time == 400);
  }
}

TEST_CASE("daily_transfer_entropy over the window's day counts") {
  SUBCASE("constant count every day") {
    corpus::AccountRecord acct = test_support::account("steady");
    for (int d = 0; d < 6; ++d) {
      acct.transfers_out.push_back(out("steady", "x", d * kDay + 10));
      acct.transfers_out.push_back(out("steady", "x", d * kDay + 20));
    }
    CHECK(daily_transfer_entropy(acct) == doctest::Approx(0.0));
  }
  SUBCASE("two days with counts one and three") {
    corpus::AccountRecord acct = test_support::account("uneven");
    acct.transfers_out.push_back(out("uneven", "x", 10));
    for (int i = 0; i < 3; ++i) {
      acct.transfers_out.push_back(out("uneven", "x", kDay + 10 + i));
    }
    CHECK(daily_transfer_entropy(acct) == doctest::Approx(1.0));
  }
  SUBCASE("no transfers") {
    CHECK(daily_transfer_entropy(test_support::account("none")) ==
          doctest::Approx(0.0));
  }
  SUBCASE("zero-count days inside the window enter the distribution") {
    // Transfers on day 0 and day 2 only; day 1 contributes a zero count,
    // making three days with counts (1, 0, 1): entropy of {2/3·0? ...}
    // distribution over counts {1:2 days, 0:1 day} = H(2/3, 1/3).
    corpus::AccountRecord acct = test_support::account("gappy");
    acct.transfers_out.push_back(out("gappy", "x", 10));
    acct.transfers_out.push_back(out("gappy", "x", 2 * kDay + 10));
    const double expected =
        test_support::entropy_oracle(std::vector<std::int64_t>{2, 1});
    CHECK(daily_transfer_entropy(acct) == doctest::Approx(expected));
  }
}

TEST_CASE("degree features count distinct counterparties") {
  SUBCASE("one hundred transfers to a single account") {
    corpus::AccountRecord acct = test_support::account("hub");
    for (int i = 0; i < 100; ++i) {
      acct.transfers_out.push_back(out("hub", "sink", i));
    }
    const DegreeFeatures degrees = degree_features(acct);
    CHECK(degrees.out_degree == 1);
    CHECK(degrees.out_account_entropy == doctest::Approx(0.0));
    CHECK(degrees.in_degree == 0);
    CHECK(degrees.in_account_entropy == doctest::Approx(0.0));
  }
  SUBCASE("uniform spread over four recipients") {
    corpus::AccountRecord acct = test_support::account("spread");
    for (int r = 0; r < 4; ++r) {
      for (int i = 0; i < 25; ++i) {
        acct.transfers_out.push_back(
            out("spread", "r" + std::to_string(r), r * 100 + i));
      }
    }
    const DegreeFeatures degrees = degree_features(acct);
    CHECK(degrees.out_degree == 4);
    CHECK(degrees.out_account_entropy == doctest::Approx(2.0));
  }
  SUBCASE("incoming side mirrors the outgoing logic") {
    corpus::AccountRecord acct = test_support::account("recv");
    acct.transfers_in.push_back(out("a", "recv", 1));
    acct.transfers_in.push_back(out("a", "recv", 2));
    acct.transfers_in.push_back(out("b", "recv", 3));
    const DegreeFeatures degrees = degree_features(acct);
    CHECK(degrees.in_degree == 2);
    const double expected =
        test_support::entropy_oracle(std::vector<std::int64_t>{2, 1});
    CHECK(degrees.in_account_entropy == doctest::Approx(expected));
  }
}

TEST_CASE("steem_created matches the configured faucet name") {
  CHECK(steem_created(test_support::account("a", 0, "steem")) == 1);
  CHECK(steem_created(test_support::account("b", 0, "anon-exchange")) == 0);
  ChainParams params;
  params.faucet_account = "steemit";
  CHECK(steem_created(test_support::account("c", 0, "steemit"), params) == 1);
  CHECK(steem_created(test_support::account("d", 0, "steem"), params) == 0);
}

TEST_CASE("transfer_post_ratios average per qualifying day") {
  SUBCASE("two transfers and four comments every day") {
    corpus::AccountRecord acct = test_support::account("ratio");
    for (int d = 0; d < 3; ++d) {
      for (int i = 0; i < 2; ++i) {
        acct.transfers_out.push_back(out("ratio", "x", d * kDay + i));
      }
      for (int i = 0; i < 4; ++i) {
        acct.comments.push_back(test_support::blog(
            "ratio", "p" + std::to_string(d) + "_" + std::to_string(i),
            d * kDay + 100 + i, "text"));
      }
    }
    const TransferPostRatios ratios = transfer_post_ratios(acct);
    CHECK(ratios.per_blog_or_reply == doctest::Approx(0.5));
    CHECK(ratios.per_blog == doctest::Approx(0.5));
    CHECK(ratios.per_reply == doctest::Approx(0.0));  // no reply days
  }
  SUBCASE("transfers only on days without posts") {
    corpus::AccountRecord acct = test_support::account("offset");
    acct.transfers_out.push_back(out("offset", "x", 10));
    acct.comments.push_back(
        test_support::blog("offset", "p", kDay + 10, "text"));
    const TransferPostRatios ratios = transfer_post_ratios(acct);
    // The posting day has zero transfers; the transfer day has no posts.
    CHECK(ratios.per_blog_or_reply == doctest::Approx(0.0));
  }
  SUBCASE("posts without transfers give zero") {
    corpus::AccountRecord acct = test_support::account("poster");
    for (int d = 0; d < 3; ++d) {
      acct.comments.push_back(test_support::blog(
          "poster", "p" + std::to_string(d), d * kDay, "text"));
    }
    const TransferPostRatios ratios = transfer_post_ratios(acct);
    CHECK(ratios.per_blog_or_reply == doctest::Approx(0.0));
    CHECK(ratios.per_blog == doctest::Approx(0.0));
  }
  SUBCASE("blog and reply denominators are split correctly") {
    corpus::AccountRecord acct = test_support::account("split");
    acct.transfers_out.push_back(out("split", "x", 50));
    acct.comments.push_back(test_support::blog("split", "p", 100, "text"));
    acct.comments.push_back(
        test_support::reply("split", "r", "p", 1, 200, "re"));
    const TransferPostRatios ratios = transfer_post_ratios(acct);
    CHECK(ratios.per_blog_or_reply == doctest::Approx(0.5));
    CHECK(ratios.per_blog == doctest::Approx(1.0));
    CHECK(ratios.per_reply == doctest::Approx(1.0));
  }
}

TEST_CASE("chain_features bundles all twelve columns") {
  corpus::AccountRecord acct = test_support::account("full", 0, "steem");
  acct.transfers_out.push_back(out("full", "x", 10));
  acct.transfers_in.push_back(out("y", "full", kDay + 10));
  acct.comments.push_back(test_support::blog("full", "p", 15, "text"));
  const ChainFeatures features = chain_features(acct);
  CHECK(features.n_transfers == 2);
  CHECK(features.activation_time == kDay);
  CHECK(features.in_degree == 1);
  CHECK(features.out_degree == 1);
  CHECK(features.steem_created == 1);
  CHECK(features.transfers_per_blog == doctest::Approx(1.0));
}
