#include "extsum/graphrank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <queue>
#include <random>

#include "extsum/hash.hpp"

namespace extsum {

SentenceGraph build_sentence_graph(const std::vector<SentenceVector>& vectors,
                                   const VectorConfig& config,
                                   bool invert_distances) {
  const int n = static_cast<int>(vectors.size());
  SentenceGraph g(n, config);
  g.invert_distances = invert_distances;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // Latent-space cosines can dip below zero; negative similarity is
      // treated as no tie at all.
      double c = std::max(0.0, cosine(vectors[i], vectors[j]));
      g.set_weight(i, j, c);
    }
  }
  return g;
}

const char* to_string(Measure m) {
  switch (m) {
    case Measure::kStr: return "Str";
    case Measure::kClu: return "Clu";
    case Measure::kDiv: return "Div";
    case Measure::kPag: return "Pag";
    case Measure::kBet: return "Bet";
    case Measure::kClo: return "Clo";
    case Measure::kEig: return "Eig";
  }
  return "?";
}

Measure measure_from_string(const std::string& s) {
  for (Measure m : all_measures()) {
    if (s == to_string(m)) return m;
  }
  throw GraphError("unknown centrality measure: " + s);
}

const std::vector<Measure>& all_measures() {
  static const std::vector<Measure> kAll = {
      Measure::kStr, Measure::kClu, Measure::kDiv, Measure::kPag,
      Measure::kBet, Measure::kClo, Measure::kEig};
  return kAll;
}

// ---------------------------------------------------------------------------
// Individual measures

namespace {

std::vector<double> strengths(const SentenceGraph& g) {
  std::vector<double> s(g.n, 0.0);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      if (j != i) s[i] += g.weight(i, j);
    }
  }
  return s;
}

std::vector<double> clustering_scores(const SentenceGraph& g) {
  std::vector<double> out(g.n, 0.0);
  auto s = strengths(g);
  for (int i = 0; i < g.n; ++i) {
    std::vector<int> nbrs;
    for (int j = 0; j < g.n; ++j) {
      if (j != i && g.weight(i, j) > 0.0) nbrs.push_back(j);
    }
    const int k = static_cast<int>(nbrs.size());
    if (k < 2) continue;
    double acc = 0.0;
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        if (g.weight(nbrs[a], nbrs[b]) > 0.0) {
          acc += g.weight(i, nbrs[a]) + g.weight(i, nbrs[b]);
        }
      }
    }
    out[i] = acc / (s[i] * (k - 1));
  }
  return out;
}

std::vector<double> diversity_scores(const SentenceGraph& g) {
  std::vector<double> out(g.n, 0.0);
  auto s = strengths(g);
  for (int i = 0; i < g.n; ++i) {
    int k = 0;
    double h = 0.0;
    for (int j = 0; j < g.n; ++j) {
      double w = j == i ? 0.0 : g.weight(i, j);
      if (w <= 0.0) continue;
      ++k;
      double p = w / s[i];
      h -= p * std::log(p);
    }
    out[i] = k > 1 ? h / std::log(static_cast<double>(k)) : 0.0;
  }
  return out;
}

std::vector<double> pagerank_scores(const SentenceGraph& g,
                                    const CentralityOptions& opt) {
  const int n = g.n;
  if (n == 1) return {1.0};
  auto s = strengths(g);
  std::vector<double> p(n, 1.0 / n), next(n);
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    double dangling = 0.0;
    for (int i = 0; i < n; ++i) {
      if (s[i] <= 0.0) dangling += p[i];
    }
    double base = (1.0 - opt.damping) / n + opt.damping * dangling / n;
    std::fill(next.begin(), next.end(), base);
    for (int j = 0; j < n; ++j) {
      if (s[j] <= 0.0) continue;
      double share = opt.damping * p[j] / s[j];
      for (int i = 0; i < n; ++i) {
        if (i != j && g.weight(j, i) > 0.0) next[i] += share * g.weight(j, i);
      }
    }
    double resid = 0.0;
    for (int i = 0; i < n; ++i) resid += std::abs(next[i] - p[i]);
    p.swap(next);
    if (resid < opt.power_tol) break;
  }
  return p;
}

std::vector<double> eigenvector_scores(const SentenceGraph& g,
                                       const CentralityOptions& opt) {
  const int n = g.n;
  if (std::none_of(g.w.begin(), g.w.end(), [](double w) { return w > 0.0; })) {
    return std::vector<double>(n, 0.0);  // edgeless graph
  }
  // Iterate with W + I instead of W: same eigenvectors, but the Perron root
  // strictly dominates in magnitude even on bipartite graphs, where the
  // unshifted iteration oscillates between the +lambda/-lambda pair.
  std::vector<double> x(n, 1.0 / n), y(n);
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    for (int i = 0; i < n; ++i) {
      double acc = x[i];
      for (int j = 0; j < n; ++j) {
        if (j != i) acc += g.weight(i, j) * x[j];
      }
      y[i] = acc;
    }
    double m = 0.0;
    for (double v : y) m = std::max(m, std::abs(v));
    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
      y[i] /= m;
      resid = std::max(resid, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    if (resid < opt.power_tol) break;
  }
  return x;
}

double edge_distance(const SentenceGraph& g, int i, int j) {
  double w = g.weight(i, j);
  return g.invert_distances ? 1.0 - w : w;
}

struct ShortestPaths {
  std::vector<double> dist;       // INF when unreachable
  std::vector<double> sigma;      // number of shortest paths
  std::vector<std::vector<int>> pred;
  std::vector<int> settle_order;  // nodes in non-decreasing distance
};

ShortestPaths dijkstra_counted(const SentenceGraph& g, int src, double eps) {
  const int n = g.n;
  const double inf = std::numeric_limits<double>::infinity();
  ShortestPaths sp;
  sp.dist.assign(n, inf);
  sp.sigma.assign(n, 0.0);
  sp.pred.assign(n, {});
  sp.dist[src] = 0.0;
  sp.sigma[src] = 1.0;
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  heap.push({0.0, src});
  std::vector<char> settled(n, 0);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    sp.settle_order.push_back(u);
    for (int v = 0; v < n; ++v) {
      if (v == u || g.weight(u, v) <= 0.0) continue;
      double cand = sp.dist[u] + edge_distance(g, u, v);
      if (cand < sp.dist[v] - eps) {
        sp.dist[v] = cand;
        sp.sigma[v] = sp.sigma[u];
        sp.pred[v].assign(1, u);
        heap.push({cand, v});
      } else if (std::abs(cand - sp.dist[v]) <= eps && !settled[v]) {
        sp.sigma[v] += sp.sigma[u];
        sp.pred[v].push_back(u);
      }
    }
  }
  return sp;
}

std::vector<double> betweenness_scores(const SentenceGraph& g,
                                       const CentralityOptions& opt) {
  const int n = g.n;
  std::vector<double> bc(n, 0.0);
  for (int s = 0; s < n; ++s) {
    auto sp = dijkstra_counted(g, s, opt.path_eps);
    std::vector<double> delta(n, 0.0);
    for (auto it = sp.settle_order.rbegin(); it != sp.settle_order.rend();
         ++it) {
      int w = *it;
      for (int v : sp.pred[w]) {
        delta[v] += sp.sigma[v] / sp.sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) bc[w] += delta[w];
    }
  }
  for (double& v : bc) v /= 2.0;  // undirected: each pair counted twice
  return bc;
}

std::vector<double> closeness_scores(const SentenceGraph& g,
                                     const CentralityOptions& opt) {
  const int n = g.n;
  std::vector<double> out(n, 0.0);
  if (n == 1) return out;
  double max_edge = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (g.weight(i, j) > 0.0) {
        max_edge = std::max(max_edge, edge_distance(g, i, j));
      }
    }
  }
  const double surrogate = n * max_edge;  // stand-in for unreachable pairs
  for (int i = 0; i < n; ++i) {
    auto sp = dijkstra_counted(g, i, opt.path_eps);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      sum += std::isinf(sp.dist[j]) ? surrogate : sp.dist[j];
    }
    out[i] = sum > 0.0 ? 1.0 / sum : 0.0;
  }
  return out;
}

}  // namespace

CentralityScores centrality(const SentenceGraph& g, Measure m,
                            const CentralityOptions& opt) {
  if (g.n <= 0) throw GraphError("centrality of an empty graph");
  CentralityScores cs;
  cs.measure = m;
  cs.ascending = m == Measure::kDiv;
  if (g.n == 1) {
    cs.scores = {m == Measure::kPag ? 1.0 : 0.0};
    return cs;
  }
  switch (m) {
    case Measure::kStr: cs.scores = strengths(g); break;
    case Measure::kClu: cs.scores = clustering_scores(g); break;
    case Measure::kDiv: cs.scores = diversity_scores(g); break;
    case Measure::kPag: cs.scores = pagerank_scores(g, opt); break;
    case Measure::kBet: cs.scores = betweenness_scores(g, opt); break;
    case Measure::kClo: cs.scores = closeness_scores(g, opt); break;
    case Measure::kEig: cs.scores = eigenvector_scores(g, opt); break;
  }
  return cs;
}

std::vector<int> rank_nodes(const CentralityScores& scores) {
  std::vector<int> order(scores.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    double sa = scores.scores[a], sb = scores.scores[b];
    if (sa != sb) return scores.ascending ? sa < sb : sa > sb;
    return a < b;
  });
  return order;
}

// ---------------------------------------------------------------------------

int k_from_ratio(double ratio, int n) {
  if (n <= 0) return 0;
  long k = std::lround(ratio * n);  // rounds half away from zero
  if (k < 1) k = 1;
  if (k > n) k = n;
  return static_cast<int>(k);
}

std::string centrality_system_id(Measure m, const VectorConfig& vc) {
  std::string scheme = vc.space == VectorSpace::kLsa
                           ? "lsa"
                           : std::string(to_string(vc.scheme));
  return "centrality-" + std::string(to_string(m)) + "-" + scheme + "-" +
         to_string(vc.policy);
}

Summary summarize_centrality(const Item& item,
                             const std::vector<SentenceVector>& vectors,
                             const CentralityConfig& cfg) {
  if (static_cast<int>(vectors.size()) != item.size()) {
    throw GraphError("vector count does not match item sentence count");
  }
  if (item.size() == 0) throw GraphError("cannot summarize an empty item");
  auto graph = build_sentence_graph(vectors, cfg.vectors, cfg.invert_distances);
  auto scores = centrality(graph, cfg.measure, cfg.options);
  auto order = rank_nodes(scores);

  int k = cfg.fixed_k ? std::min(*cfg.fixed_k, item.size())
                      : k_from_ratio(cfg.ratio, item.size());
  std::vector<int> positions(order.begin(), order.begin() + k);
  std::sort(positions.begin(), positions.end());

  Summary summary;
  summary.system_id = centrality_system_id(cfg.measure, cfg.vectors);
  summary.item_id = item.id;
  for (int pos : positions) {
    summary.refs.push_back(item.refs[pos]);
    summary.lines.push_back(item.sentences[pos]->text);
  }
  summary.realized_ratio = static_cast<double>(k) / item.size();
  summary.params["measure"] = to_string(cfg.measure);
  summary.params["space"] =
      cfg.vectors.space == VectorSpace::kLsa ? "lsa" : "term";
  summary.params["scheme"] = to_string(cfg.vectors.scheme);
  summary.params["stopword_policy"] = to_string(cfg.vectors.policy);
  if (cfg.fixed_k) {
    summary.params["k"] = std::to_string(*cfg.fixed_k);
  } else {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", cfg.ratio);
    summary.params["ratio"] = buf;
  }
  if (cfg.invert_distances) summary.params["invert_distances"] = "true";
  return summary;
}

// ---------------------------------------------------------------------------
// Baselines

const char* to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::kFirst: return "Fir";
    case BaselineKind::kLast: return "Las";
    case BaselineKind::kRandom: return "Ran";
  }
  return "?";
}

BaselineKind baseline_from_string(const std::string& s) {
  if (s == "Fir") return BaselineKind::kFirst;
  if (s == "Las") return BaselineKind::kLast;
  if (s == "Ran") return BaselineKind::kRandom;
  throw GraphError("unknown baseline: " + s);
}

uint64_t item_seed(uint64_t run_seed, const std::string& item_id) {
  return mix64(run_seed ^ fnv1a64(item_id));
}

namespace {

// Uniform draw from [0, bound) by rejection; avoids the library distribution
// types, whose outputs differ across standard library implementations.
uint64_t bounded_rand(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace

Summary baseline_summary(const Item& item, BaselineKind kind, double ratio,
                         uint64_t seed) {
  if (item.size() == 0) throw GraphError("cannot summarize an empty item");
  const int n = item.size();
  const int k = k_from_ratio(ratio, n);
  std::vector<int> positions;
  switch (kind) {
    case BaselineKind::kFirst:
      for (int i = 0; i < k; ++i) positions.push_back(i);
      break;
    case BaselineKind::kLast:
      for (int i = n - k; i < n; ++i) positions.push_back(i);
      break;
    case BaselineKind::kRandom: {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::mt19937_64 rng(item_seed(seed, item.id));
      for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(bounded_rand(rng, i + 1));
        std::swap(perm[i], perm[j]);
      }
      positions.assign(perm.begin(), perm.begin() + k);
      std::sort(positions.begin(), positions.end());
      break;
    }
  }
  Summary summary;
  summary.system_id = std::string("baseline-") + to_string(kind);
  summary.item_id = item.id;
  for (int pos : positions) {
    summary.refs.push_back(item.refs[pos]);
    summary.lines.push_back(item.sentences[pos]->text);
  }
  summary.realized_ratio = static_cast<double>(k) / n;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", ratio);
  summary.params["ratio"] = buf;
  if (kind == BaselineKind::kRandom) {
    summary.params["seed"] = std::to_string(seed);
  }
  return summary;
}

}  // namespace extsum
