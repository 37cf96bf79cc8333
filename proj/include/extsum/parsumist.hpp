#pragma once

#include <array>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "extsum/corpus.hpp"
#include "extsum/vectorize.hpp"

namespace extsum {

// ---------------------------------------------------------------------------
// Per-sentence features, each normalized by sentence length.

inline constexpr int kFeatureCount = 8;

// f1 overlap with title words, f2 inverse length, f3 proper nouns,
// f4 Latin-script words, f5 quotation marks, f6 non-pronoun share,
// f7 percent signs, f8 non-parenthesis share.
struct FeatureVector {
  std::array<double, kFeatureCount> f{};
};

// Title words: word-token surfaces of the title with stopwords removed.
std::unordered_set<std::string> title_word_set(const std::string& title,
                                               const Lexicons& lexicons);

FeatureVector extract_features(
    const Sentence& sentence, const std::unordered_set<std::string>& title_words);
FeatureVector extract_features(const Sentence& sentence, const Document& doc,
                               const Lexicons& lexicons);

struct ScoreConfig {
  std::array<double, kFeatureCount> weights{1, 1, 1, 1, 1, 1, 1, 1};
  double cosine_threshold = 0.1;  // redundancy cutoff for admission
  int max_sentences = 10;
};

// Weighted sum of the features.
double score_sentence(const FeatureVector& features, const ScoreConfig& cfg);

// ---------------------------------------------------------------------------
// Selection

// Corpus-wide sentence-length quartiles (linear interpolation between order
// statistics). Sentences outside [q1, q3] are not eligible for selection.
struct Quartiles {
  double q1 = 0.0, q3 = 0.0;
};
Quartiles corpus_length_quartiles(const Corpus& corpus);
double quantile(std::vector<double> values, double q);  // q in [0, 1]

struct ScoredCandidate {
  int position = 0;  // index into the item's sentence list
  double score = 0.0;
  int length = 0;
  const SentenceVector* vec = nullptr;
};

// Greedy pick by descending score (ties to the earlier position): skip
// sentences outside the length band; admit a sentence only if its smallest
// cosine against everything already selected does not exceed the threshold
// (the first admitted sentence is unconstrained). Stops at max_sentences.
// Returns selected positions in ascending (temporal) order.
std::vector<int> select_sentences(const std::vector<ScoredCandidate>& cands,
                                  const Quartiles& quartiles,
                                  const ScoreConfig& cfg);

// ---------------------------------------------------------------------------
// Summaries

struct Summary {
  std::string system_id;
  std::string item_id;
  std::vector<SentenceRef> refs;    // temporal order
  std::vector<std::string> lines;   // sentence texts, parallel to refs
  double realized_ratio = 0.0;      // |selected| / |item|
  std::map<std::string, std::string> params;

  std::string text() const;  // lines joined with newlines
};

// Feature-additive summarizer over one item. Redundancy cosines are taken
// in the latent space of the supplied model (tf inputs, given policy).
Summary summarize_parsumist(const Item& item, const LsaModel& model,
                            const Vocabulary& vocab, StopwordPolicy lsa_policy,
                            const Quartiles& quartiles,
                            const Lexicons& lexicons, const ScoreConfig& cfg);

std::string parsumist_system_id(const ScoreConfig& cfg);

}  // namespace extsum
