#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "extsum/corpus.hpp"

namespace extsum {

struct RougeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// N-gram counting

struct NgramProfile {
  int n = 1;
  std::unordered_map<std::string, int> counts;  // gram -> occurrences
  long long total = 0;                          // sum of counts
};

// Grams are runs of n consecutive tokens, keyed with an unprintable joiner.
NgramProfile ngram_profile(const std::vector<std::string>& tokens, int n);

// The token stream used for scoring: normalized text, all sentences, word
// tokens only (punctuation dropped, stopwords kept).
std::vector<std::string> scoring_tokens(const std::string& text);

// ---------------------------------------------------------------------------
// Scores

struct RougeScore {
  int n = 1;
  double recall = 0.0;
  double precision = 0.0;
  double f = 0.0;
  long long matched = 0;      // clipped matches pooled over references
  long long peer_total = 0;   // peer grams x reference count
  long long model_total = 0;  // grams across all references
  bool degenerate = false;    // a side had no grams of this order
};

// Co-occurrence scoring of one candidate against a pool of references:
// each reference contributes min(candidate count, reference count) per gram.
RougeScore rouge_n(const std::vector<std::string>& peer_tokens,
                   const std::vector<std::vector<std::string>>& model_tokens,
                   int n);

RougeScore rouge_n_text(const std::string& peer_text,
                        const std::vector<std::string>& model_texts, int n);

// ---------------------------------------------------------------------------
// Corpus-level evaluation

struct PeerSummary {
  std::string system_id;
  std::string item_id;
  std::string text;
};

struct RougeReportRow {
  std::string system;
  std::string item;  // "ALL" for the per-system aggregate
  RougeScore score;
};

struct RougeReport {
  std::vector<RougeReportRow> rows;
  std::vector<std::string> warnings;
};

// References live at <gold_root>/<item-id>/<annotator>.txt. Items without
// references are skipped with a warning; an evaluation where nothing could
// be scored is an error. Aggregate rows average the per-item rates and sum
// the counts.
RougeReport evaluate_run(const std::vector<PeerSummary>& peers,
                         const std::filesystem::path& gold_root,
                         const std::vector<int>& orders);

// TSV: system item n recall precision f matched peer_total model_total
// (rates with 6 decimals; header row included; rows sorted).
std::string format_report_tsv(const RougeReport& report);

}  // namespace extsum
