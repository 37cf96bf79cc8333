#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "extsum/parsumist.hpp"
#include "extsum/vectorize.hpp"

namespace extsum {

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Complete undirected sentence-similarity graph. Weights are cosines in
// [0, 1]; the diagonal is zero. A zero weight means "no edge" wherever edge
// existence matters (paths, clustering).
struct SentenceGraph {
  int n = 0;
  std::vector<double> w;  // n*n, symmetric
  VectorConfig config;
  bool invert_distances = false;  // path lengths use 1 - w instead of w

  SentenceGraph() = default;
  explicit SentenceGraph(int nodes, VectorConfig cfg = {})
      : n(nodes), w(static_cast<std::size_t>(nodes) * nodes, 0.0), config(cfg) {}

  double weight(int i, int j) const {
    return w[static_cast<std::size_t>(i) * n + j];
  }
  void set_weight(int i, int j, double v) {
    w[static_cast<std::size_t>(i) * n + j] = v;
    w[static_cast<std::size_t>(j) * n + i] = v;
  }
};

SentenceGraph build_sentence_graph(const std::vector<SentenceVector>& vectors,
                                   const VectorConfig& config,
                                   bool invert_distances = false);

// ---------------------------------------------------------------------------
// Centrality measures

enum class Measure { kStr, kClu, kDiv, kPag, kBet, kClo, kEig };

const char* to_string(Measure m);
Measure measure_from_string(const std::string& s);
const std::vector<Measure>& all_measures();

struct CentralityScores {
  Measure measure = Measure::kStr;
  std::vector<double> scores;
  // True when smaller values mean more central (diversity ranks ascending).
  bool ascending = false;
};

struct CentralityOptions {
  double damping = 0.85;        // random-surfer restart weight
  double power_tol = 1e-12;     // fixed-point residual for Pag/Eig
  int max_iter = 100000;
  double path_eps = 1e-12;      // tie tolerance for equal-length paths
};

CentralityScores centrality(const SentenceGraph& g, Measure m,
                            const CentralityOptions& opt = {});

// Node order by descending centrality (ascending for diversity); ties break
// to the earlier (temporal) index. Stable and deterministic.
std::vector<int> rank_nodes(const CentralityScores& scores);

// ---------------------------------------------------------------------------
// Summarizers on top of the rankings

// Number of sentences at a compression ratio: round half away from zero,
// never less than 1.
int k_from_ratio(double ratio, int n);

struct CentralityConfig {
  Measure measure = Measure::kStr;
  VectorConfig vectors;
  double ratio = 0.25;
  std::optional<int> fixed_k;  // override: take min(fixed_k, n) sentences
  bool invert_distances = false;
  CentralityOptions options;
};

std::string centrality_system_id(Measure m, const VectorConfig& vc);

Summary summarize_centrality(const Item& item,
                             const std::vector<SentenceVector>& vectors,
                             const CentralityConfig& cfg);

// ---------------------------------------------------------------------------
// Baselines

enum class BaselineKind { kFirst, kLast, kRandom };

const char* to_string(BaselineKind k);
BaselineKind baseline_from_string(const std::string& s);

// First/last take a temporal prefix/suffix. Random draws a uniform k-subset
// as a prefix of a seeded per-item permutation, so the subsets are nested
// across ratios for a fixed seed.
Summary baseline_summary(const Item& item, BaselineKind kind, double ratio,
                         uint64_t seed);

// Stable per-item stream id: FNV-1a of the item id mixed into the run seed.
uint64_t item_seed(uint64_t run_seed, const std::string& item_id);

}  // namespace extsum
