#include "extsum/parsumist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace extsum {

std::unordered_set<std::string> title_word_set(const std::string& title,
                                               const Lexicons& lexicons) {
  std::unordered_set<std::string> words;
  for (const auto& t : tokenize(title, lexicons)) {
    if (t.is_word && !t.is_stopword) words.insert(t.surface);
  }
  return words;
}

FeatureVector extract_features(
    const Sentence& sentence,
    const std::unordered_set<std::string>& title_words) {
  FeatureVector fv;
  const double len = sentence.length();
  if (len == 0) return fv;  // structurally impossible for parsed sentences
  int title_hits = 0, proper = 0, latin = 0, quotes = 0, pronouns = 0,
      percents = 0, parens = 0;
  for (const auto& t : sentence.tokens) {
    if (t.is_word && title_words.count(t.surface)) ++title_hits;
    if (t.is_proper_noun) ++proper;
    if (t.is_word && t.has_letter && t.is_latin_script) ++latin;
    if (t.is_quote_mark) ++quotes;
    if (t.is_pronoun) ++pronouns;
    if (t.is_percent_sign) ++percents;
    if (t.is_parenthesis) ++parens;
  }
  fv.f[0] = title_hits / len;
  fv.f[1] = 1.0 / len;
  fv.f[2] = proper / len;
  fv.f[3] = latin / len;
  fv.f[4] = quotes / len;
  fv.f[5] = (len - pronouns) / len;
  fv.f[6] = percents / len;
  fv.f[7] = (len - parens) / len;
  return fv;
}

FeatureVector extract_features(const Sentence& sentence, const Document& doc,
                               const Lexicons& lexicons) {
  return extract_features(sentence, title_word_set(doc.title, lexicons));
}

double score_sentence(const FeatureVector& features, const ScoreConfig& cfg) {
  double s = 0.0;
  for (int j = 0; j < kFeatureCount; ++j) s += cfg.weights[j] * features.f[j];
  return s;
}

// ---------------------------------------------------------------------------

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty set");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(h));
  return values[lo] + (h - lo) * (values[hi] - values[lo]);
}

Quartiles corpus_length_quartiles(const Corpus& corpus) {
  std::vector<double> lengths;
  for (const auto& topic : corpus.topics) {
    for (const auto& doc : topic.documents) {
      for (const auto& s : doc.sentences) {
        lengths.push_back(static_cast<double>(s.length()));
      }
    }
  }
  if (lengths.empty()) throw CorpusError("corpus has no sentences");
  Quartiles q;
  q.q1 = quantile(lengths, 0.25);
  q.q3 = quantile(lengths, 0.75);
  return q;
}

std::vector<int> select_sentences(const std::vector<ScoredCandidate>& cands,
                                  const Quartiles& quartiles,
                                  const ScoreConfig& cfg) {
  std::vector<int> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (cands[a].score != cands[b].score) {
      return cands[a].score > cands[b].score;
    }
    return cands[a].position < cands[b].position;
  });

  std::vector<int> picked;  // indices into cands
  for (int idx : order) {
    if (static_cast<int>(picked.size()) >= cfg.max_sentences) break;
    const auto& c = cands[idx];
    if (c.length < quartiles.q1 || c.length > quartiles.q3) continue;
    if (!picked.empty()) {
      double min_cos = std::numeric_limits<double>::infinity();
      for (int p : picked) {
        min_cos = std::min(min_cos, cosine(*c.vec, *cands[p].vec));
      }
      if (min_cos > cfg.cosine_threshold) continue;  // redundant
    }
    picked.push_back(idx);
  }

  std::vector<int> positions;
  positions.reserve(picked.size());
  for (int idx : picked) positions.push_back(cands[idx].position);
  std::sort(positions.begin(), positions.end());
  return positions;
}

// ---------------------------------------------------------------------------

std::string Summary::text() const {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

std::string parsumist_system_id(const ScoreConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", cfg.cosine_threshold);
  return std::string("parsumist-t") + buf;
}

Summary summarize_parsumist(const Item& item, const LsaModel& model,
                            const Vocabulary& vocab, StopwordPolicy lsa_policy,
                            const Quartiles& quartiles,
                            const Lexicons& lexicons, const ScoreConfig& cfg) {
  VectorConfig vc;
  vc.space = VectorSpace::kLsa;
  vc.policy = lsa_policy;
  auto vectors = make_sentence_vectors(item, vocab, vc, nullptr, &model);

  auto title_words = title_word_set(item.title, lexicons);
  std::vector<ScoredCandidate> cands;
  cands.reserve(item.sentences.size());
  for (int i = 0; i < item.size(); ++i) {
    ScoredCandidate c;
    c.position = i;
    c.score = score_sentence(extract_features(*item.sentences[i], title_words),
                             cfg);
    c.length = item.sentences[i]->length();
    c.vec = &vectors[i];
    cands.push_back(c);
  }
  auto positions = select_sentences(cands, quartiles, cfg);

  Summary summary;
  summary.system_id = parsumist_system_id(cfg);
  summary.item_id = item.id;
  for (int pos : positions) {
    summary.refs.push_back(item.refs[pos]);
    summary.lines.push_back(item.sentences[pos]->text);
  }
  summary.realized_ratio =
      item.size() == 0 ? 0.0
                       : static_cast<double>(positions.size()) / item.size();
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", cfg.cosine_threshold);
  summary.params["threshold"] = buf;
  summary.params["max_sentences"] = std::to_string(cfg.max_sentences);
  summary.params["stopword_policy"] = to_string(lsa_policy);
  return summary;
}

}  // namespace extsum
