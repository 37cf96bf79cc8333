#include "extsum/rouge.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace extsum {

namespace {
constexpr char kJoiner = '\x1f';
}

NgramProfile ngram_profile(const std::vector<std::string>& tokens, int n) {
  if (n < 1) throw RougeError("n-gram order must be positive");
  NgramProfile prof;
  prof.n = n;
  const int count = static_cast<int>(tokens.size()) - n + 1;
  for (int i = 0; i < count; ++i) {
    std::string key = tokens[i];
    for (int j = 1; j < n; ++j) {
      key.push_back(kJoiner);
      key += tokens[i + j];
    }
    ++prof.counts[key];
    ++prof.total;
  }
  return prof;
}

std::vector<std::string> scoring_tokens(const std::string& text) {
  std::string norm = normalize_text(text);
  Lexicons none;
  std::vector<std::string> out;
  for (const auto& sentence : split_sentences(norm)) {
    for (const auto& tok : tokenize(sentence, none)) {
      if (tok.is_word) out.push_back(tok.surface);
    }
  }
  return out;
}

RougeScore rouge_n(const std::vector<std::string>& peer_tokens,
                   const std::vector<std::vector<std::string>>& model_tokens,
                   int n) {
  if (model_tokens.empty()) throw RougeError("no reference summaries");
  RougeScore score;
  score.n = n;
  NgramProfile peer = ngram_profile(peer_tokens, n);
  for (const auto& tokens : model_tokens) {
    NgramProfile model = ngram_profile(tokens, n);
    score.model_total += model.total;
    for (const auto& [gram, mcount] : model.counts) {
      auto it = peer.counts.find(gram);
      if (it != peer.counts.end()) {
        score.matched += std::min(it->second, mcount);
      }
    }
  }
  score.peer_total =
      peer.total * static_cast<long long>(model_tokens.size());
  if (score.model_total == 0 || score.peer_total == 0) {
    score.degenerate = true;
    return score;
  }
  score.recall = static_cast<double>(score.matched) / score.model_total;
  score.precision = static_cast<double>(score.matched) / score.peer_total;
  if (score.recall + score.precision > 0.0) {
    score.f = 2.0 * score.recall * score.precision /
              (score.recall + score.precision);
  }
  return score;
}

RougeScore rouge_n_text(const std::string& peer_text,
                        const std::vector<std::string>& model_texts, int n) {
  std::vector<std::vector<std::string>> models;
  models.reserve(model_texts.size());
  for (const auto& t : model_texts) models.push_back(scoring_tokens(t));
  return rouge_n(scoring_tokens(peer_text), models, n);
}

// ---------------------------------------------------------------------------

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RougeError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

RougeReport evaluate_run(const std::vector<PeerSummary>& peers,
                         const std::filesystem::path& gold_root,
                         const std::vector<int>& orders) {
  namespace fs = std::filesystem;
  RougeReport report;
  if (peers.empty()) throw RougeError("nothing to evaluate");
  if (orders.empty()) throw RougeError("no n-gram orders requested");

  // Reference token cache per item.
  std::map<std::string, std::vector<std::vector<std::string>>> gold;
  std::set<std::string> missing;
  auto references = [&](const std::string& item_id)
      -> const std::vector<std::vector<std::string>>* {
    if (missing.count(item_id)) return nullptr;
    auto it = gold.find(item_id);
    if (it != gold.end()) return &it->second;
    fs::path dir = gold_root / item_id;
    std::vector<fs::path> files;
    if (fs::is_directory(dir)) {
      for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") {
          files.push_back(e.path());
        }
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      missing.insert(item_id);
      report.warnings.push_back("no references for item " + item_id +
                                "; skipped");
      return nullptr;
    }
    std::vector<std::vector<std::string>> refs;
    refs.reserve(files.size());
    for (const auto& f : files) refs.push_back(scoring_tokens(read_file(f)));
    return &gold.emplace(item_id, std::move(refs)).first->second;
  };

  // (system, n) -> per-item scores for aggregation.
  std::map<std::pair<std::string, int>, std::vector<RougeScore>> by_system;
  int scored = 0;
  for (const auto& peer : peers) {
    const auto* refs = references(peer.item_id);
    if (refs == nullptr) continue;
    auto peer_tokens = scoring_tokens(peer.text);
    for (int n : orders) {
      RougeScore s = rouge_n(peer_tokens, *refs, n);
      report.rows.push_back({peer.system_id, peer.item_id, s});
      by_system[{peer.system_id, n}].push_back(s);
    }
    ++scored;
  }
  if (scored == 0) throw RougeError("no peer summary had references to score");

  for (const auto& [key, scores] : by_system) {
    RougeScore agg;
    agg.n = key.second;
    for (const auto& s : scores) {
      agg.recall += s.recall;
      agg.precision += s.precision;
      agg.f += s.f;
      agg.matched += s.matched;
      agg.peer_total += s.peer_total;
      agg.model_total += s.model_total;
    }
    const double m = static_cast<double>(scores.size());
    agg.recall /= m;
    agg.precision /= m;
    agg.f /= m;
    report.rows.push_back({key.first, "ALL", agg});
  }

  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const RougeReportRow& a, const RougeReportRow& b) {
                     if (a.system != b.system) return a.system < b.system;
                     if (a.item != b.item) return a.item < b.item;
                     return a.score.n < b.score.n;
                   });
  return report;
}

std::string format_report_tsv(const RougeReport& report) {
  std::string out =
      "system\titem\tn\trecall\tprecision\tf\tmatched\tpeer_total\tmodel_"
      "total\n";
  char buf[128];
  for (const auto& row : report.rows) {
    out += row.system;
    out.push_back('\t');
    out += row.item;
    std::snprintf(buf, sizeof(buf), "\t%d\t%.6f\t%.6f\t%.6f\t%lld\t%lld\t%lld\n",
                  row.score.n, row.score.recall, row.score.precision,
                  row.score.f, row.score.matched, row.score.peer_total,
                  row.score.model_total);
    out += buf;
  }
  return out;
}

}  // namespace extsum
