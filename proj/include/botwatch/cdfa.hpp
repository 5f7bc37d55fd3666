#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "botwatch/corpus.hpp"

namespace botwatch::cdfa {

// Whitespace split, nothing else: no case folding, no punctuation stripping.
// "Hello" and "Hello!" are distinct words on purpose.
std::vector<std::string> tokenize(std::string_view text);

enum class Source { title, content, reply };

struct ArticleSet {
  std::vector<std::vector<std::string>> articles;
  Source source = Source::content;

  std::size_t m() const { return articles.size(); }
};

struct OccurrenceModel {
  std::vector<std::string> vocabulary;  // first-appearance order
  std::vector<std::vector<std::uint8_t>> occurrence_vectors;  // m × n binary
  std::vector<std::int64_t> total_occurrence;                 // T, length n
  std::vector<std::uint8_t> frequent_mask;  // V_freq: T[i]·10 ≥ max(T)
};

// Throws std::invalid_argument when there are no articles or every article
// is empty (no vocabulary to model).
OccurrenceModel build_occurrence(const ArticleSet& articles);

// Euclidean distance between V_freq and each V_j.
std::vector<double> distances(const OccurrenceModel& model);

struct DpgmmParams {
  int max_components = 5;
  double alpha = 1.0;  // Dirichlet-process concentration
  int sweeps = 200;
};

// Truncated Dirichlet-process 1-D Gaussian mixture fit by collapsed Gibbs
// sampling with a Normal-Inverse-Gamma base measure; returns the final
// sweep's assignment per value. Deterministic for a fixed seed.
std::vector<int> dpgmm_cluster(const std::vector<double>& values,
                               std::uint64_t seed,
                               const DpgmmParams& params = {});

struct MacSummary {
  double mean = 0.0;
  double variance = 0.0;  // population variance of the chosen cluster
  int qualified_count = 0;
};

// Clusters the distances, keeps clusters of size ≥ m/5 (exact rational
// comparison), and summarizes the qualified cluster with the lowest mean.
// Requires at least 5 values; callers emit zeros below that.
MacSummary mac_cdfa(const std::vector<double>& values, std::uint64_t seed,
                    const DpgmmParams& params = {});

struct CdfaFeatures {
  MacSummary title;    // CDFA-T: blog titles
  MacSummary content;  // CDFA-C: blog bodies
  MacSummary reply;    // CDFA-R: reply bodies
};

// Nine features per account. A source with fewer than 5 articles — or no
// words at all — contributes (0, 0, 0).
CdfaFeatures cdfa_features(const corpus::AccountRecord& account,
                           std::uint64_t seed,
                           const DpgmmParams& params = {});

}  // namespace botwatch::cdfa
