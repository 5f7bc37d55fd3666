// Python bindings for the posting-bot detection pipeline. Corpora cross the
// boundary as JSONL text, matrices as (columns, rows, labels) triples, and
// reports as JSON strings, so the Python side needs nothing but json.loads.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "botwatch/corpus.hpp"
#include "botwatch/learn.hpp"
#include "botwatch/pipeline.hpp"
#include "botwatch/temporal.hpp"
#include "botwatch/textbase.hpp"
#include "botwatch/util.hpp"

namespace py = pybind11;

namespace {

botwatch::corpus::LabeledCorpus corpus_from_text(
    const std::string& text, const std::optional<std::string>& dataset_end,
    int min_activity) {
  const std::int64_t end =
      dataset_end ? botwatch::parse_iso8601_utc(*dataset_end)
                  : std::numeric_limits<std::int64_t>::max();
  std::istringstream in(text);
  botwatch::corpus::LabeledCorpus corpus =
      botwatch::corpus::ingest_stream(in, end);
  if (!dataset_end) {
    corpus.dataset_end = botwatch::corpus::latest_event_time(corpus);
  }
  return botwatch::corpus::filter_active(corpus, min_activity);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "posting-bot detection: feature extraction and evaluation";

  // --- corpus ---------------------------------------------------------------
  m.def(
      "synthesize",
      [](int bots, int humans, std::uint64_t seed) {
        botwatch::corpus::SynthSpec spec;
        spec.bots = bots;
        spec.humans = humans;
        const auto corpus = botwatch::corpus::synthesize(spec, seed);
        std::ostringstream out;
        botwatch::corpus::export_stream(corpus, out);
        return out.str();
      },
      py::arg("bots"), py::arg("humans"), py::arg("seed") = 0,
      "Generate a labeled synthetic corpus; returns canonical JSONL text.");

  m.def(
      "ingest",
      [](const std::string& text, const std::optional<std::string>& dataset_end,
         int min_activity) {
        const auto corpus = corpus_from_text(text, dataset_end, min_activity);
        std::ostringstream out;
        botwatch::corpus::export_stream(corpus, out);
        return out.str();
      },
      py::arg("text"), py::arg("dataset_end") = std::nullopt,
      py::arg("min_activity") = 40,
      "Validate JSONL corpus text and return it in canonical form, keeping "
      "accounts with at least min_activity comments.");

  // --- feature extraction -----------------------------------------------------
  m.def(
      "extract_features",
      [](const std::string& text, std::uint64_t seed,
         const std::optional<std::vector<std::string>>& groups,
         const std::optional<std::string>& dataset_end, int min_activity,
         unsigned threads) {
        botwatch::pipeline::PipelineConfig config;
        config.seed = seed;
        config.min_activity = min_activity;
        config.threads = threads;
        if (groups) config.groups = *groups;
        const auto corpus = corpus_from_text(text, dataset_end, min_activity);
        const auto extracted =
            botwatch::pipeline::extract_matrix(corpus, config);
        py::dict result;
        result["columns"] = extracted.matrix.columns;
        result["rows"] = extracted.matrix.rows;
        result["labels"] = extracted.matrix.labels;
        result["accounts"] = extracted.account_names;
        return result;
      },
      py::arg("text"), py::arg("seed") = 0, py::arg("groups") = std::nullopt,
      py::arg("dataset_end") = std::nullopt, py::arg("min_activity") = 40,
      py::arg("threads") = 0,
      "Extract the per-account feature matrix from JSONL corpus text. "
      "Groups: cdfa, santia, chu, chain, baselines.");

  m.def(
      "evaluate",
      [](const std::vector<std::string>& columns,
         const std::vector<std::vector<double>>& rows,
         const std::vector<int>& labels, std::uint64_t seed,
         const std::optional<std::vector<std::string>>& combos,
         int outer_folds, int inner_folds) {
        botwatch::learn::FeatureMatrix matrix;
        matrix.columns = columns;
        matrix.rows = rows;
        matrix.labels = labels;
        botwatch::pipeline::EvalConfig config;
        config.seed = seed;
        if (combos) config.combos = *combos;
        config.outer_folds = outer_folds;
        config.inner_folds = inner_folds;
        return botwatch::pipeline::run_eval(matrix, config).dump(2) + "\n";
      },
      py::arg("columns"), py::arg("rows"), py::arg("labels"),
      py::arg("seed") = 0, py::arg("combos") = std::nullopt,
      py::arg("outer_folds") = 5, py::arg("inner_folds") = 5,
      "Nested cross-validation over feature-set combinations; returns the "
      "evaluation report as a JSON string.");

  // --- individual operations --------------------------------------------------
  m.def("tokenize", &botwatch::cdfa::tokenize, py::arg("text"),
        "Whitespace tokenization, no normalization.");

  m.def(
      "levenshtein",
      [](const std::string& a, const std::string& b) {
        return botwatch::textbase::levenshtein(a, b);
      },
      py::arg("a"), py::arg("b"),
      "Unit-cost edit distance over Unicode code points.");

  m.def(
      "dpgmm_cluster",
      [](const std::vector<double>& values, std::uint64_t seed,
         int max_components, double alpha, int sweeps) {
        botwatch::cdfa::DpgmmParams params;
        params.max_components = max_components;
        params.alpha = alpha;
        params.sweeps = sweeps;
        return botwatch::cdfa::dpgmm_cluster(values, seed, params);
      },
      py::arg("values"), py::arg("seed") = 0, py::arg("max_components") = 5,
      py::arg("alpha") = 1.0, py::arg("sweeps") = 200,
      "Cluster one-dimensional values; returns one label per value.");

  m.def(
      "mac_cdfa",
      [](const std::vector<double>& values, std::uint64_t seed,
         int max_components, double alpha, int sweeps) {
        botwatch::cdfa::DpgmmParams params;
        params.max_components = max_components;
        params.alpha = alpha;
        params.sweeps = sweeps;
        const auto summary = botwatch::cdfa::mac_cdfa(values, seed, params);
        return py::make_tuple(summary.mean, summary.variance,
                              summary.qualified_count);
      },
      py::arg("values"), py::arg("seed") = 0, py::arg("max_components") = 5,
      py::arg("alpha") = 1.0, py::arg("sweeps") = 200,
      "(mean, variance, qualified clusters) of the minimum-average cluster "
      "of the distance values.");

  m.def(
      "interval_symbols",
      [](const std::vector<std::int64_t>& timestamps, int symbol_cap) {
        botwatch::temporal::TemporalParams params;
        params.symbol_cap = symbol_cap;
        return botwatch::temporal::bin_intervals(timestamps, params);
      },
      py::arg("timestamps"), py::arg("symbol_cap") = 20,
      "Logarithmic interval symbols for an ascending timestamp list.");

  m.def("cce", &botwatch::temporal::cce, py::arg("symbols"),
        py::arg("max_order") = 10,
        "Corrected conditional entropy of a symbol sequence, in bits.");

  m.def("ff_ratio", &botwatch::temporal::ff_ratio, py::arg("follower_count"),
        py::arg("following_count"),
        "followers / (followers + followings); 0 when both are 0.");

  m.def(
      "cohens_kappa",
      [](const std::vector<std::vector<std::int64_t>>& table) {
        if (table.size() != 2 || table[0].size() != 2 || table[1].size() != 2) {
          throw std::invalid_argument("table must be 2x2");
        }
        return botwatch::learn::cohens_kappa(
            {{{table[0][0], table[0][1]}, {table[1][0], table[1][1]}}});
      },
      py::arg("table"),
      "Cohen's kappa (percent) from a 2x2 agreement table.");

  m.def(
      "metrics",
      [](const std::vector<int>& predictions, const std::vector<int>& labels) {
        const auto set = botwatch::learn::metrics(predictions, labels);
        py::dict result;
        result["accuracy"] = set.accuracy;
        result["precision"] = set.precision;
        result["recall"] = set.recall;
        result["f1"] = set.f1;
        return result;
      },
      py::arg("predictions"), py::arg("labels"),
      "Accuracy/precision/recall/F1 (percent), bots as the positive class.");

  m.def("stratified_folds", &botwatch::learn::stratified_folds,
        py::arg("labels"), py::arg("k"), py::arg("seed") = 0,
        "Stratified fold id per row, each class dealt round-robin.");

  m.def(
      "dowdall_rank",
      [](const std::vector<std::vector<double>>& importances) {
        py::list result;
        for (const auto& entry : botwatch::learn::dowdall_rank(importances)) {
          result.append(
              py::make_tuple(entry.feature, entry.points, entry.rank));
        }
        return result;
      },
      py::arg("importances"),
      "Fuse per-model importance vectors; (feature_index, points, rank) "
      "tuples, best first.");

  m.def("classifier_kinds", &botwatch::learn::classifier_kinds,
        "Names accepted by train/evaluate model specs.");
}
