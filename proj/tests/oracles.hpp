#pragma once

// Reference implementations used to cross-check the fast library code.
// Everything here favors being obviously correct over being efficient:
// exhaustive path enumeration, dense linear solves, O(n^2) rank logic.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "extsum/graphrank.hpp"

namespace oracles {

inline double edge_dist(const extsum::SentenceGraph& g, int i, int j) {
  double w = g.weight(i, j);
  return g.invert_distances ? 1.0 - w : w;
}

// All simple paths between s and t, tracking the shortest distance, how many
// shortest paths exist, and how often each interior node lies on one.
struct PairPaths {
  double best = std::numeric_limits<double>::infinity();
  double count = 0.0;
  std::vector<double> through;  // per node
};

inline void enumerate_paths(const extsum::SentenceGraph& g, int s, int t,
                            PairPaths& out, double eps) {
  const int n = g.n;
  out.through.assign(n, 0.0);
  std::vector<char> visited(n, 0);
  std::vector<int> stack;
  std::function<void(int, double)> dfs = [&](int u, double dist) {
    if (dist > out.best + eps) return;  // cannot improve
    if (u == t) {
      if (dist < out.best - eps) {
        out.best = dist;
        out.count = 0.0;
        std::fill(out.through.begin(), out.through.end(), 0.0);
      }
      if (std::abs(dist - out.best) <= eps) {
        out.count += 1.0;
        for (int v : stack) {
          if (v != s && v != t) out.through[v] += 1.0;
        }
      }
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (visited[v] || v == u || g.weight(u, v) <= 0.0) continue;
      visited[v] = 1;
      stack.push_back(v);
      dfs(v, dist + edge_dist(g, u, v));
      stack.pop_back();
      visited[v] = 0;
    }
  };
  visited[s] = 1;
  stack.push_back(s);
  dfs(s, 0.0);
}

inline std::vector<double> brute_betweenness(const extsum::SentenceGraph& g,
                                             double eps = 1e-12) {
  const int n = g.n;
  std::vector<double> bc(n, 0.0);
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      PairPaths pp;
      enumerate_paths(g, s, t, pp, eps);
      if (!std::isfinite(pp.best) || pp.count == 0.0) continue;
      for (int v = 0; v < n; ++v) {
        if (pp.through[v] > 0.0) bc[v] += pp.through[v] / pp.count;
      }
    }
  }
  return bc;
}

inline std::vector<double> brute_closeness(const extsum::SentenceGraph& g,
                                           double eps = 1e-12) {
  const int n = g.n;
  std::vector<double> out(n, 0.0);
  if (n == 1) return out;
  double max_edge = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (g.weight(i, j) > 0.0) max_edge = std::max(max_edge, edge_dist(g, i, j));
    }
  }
  for (int s = 0; s < n; ++s) {
    double sum = 0.0;
    for (int t = 0; t < n; ++t) {
      if (t == s) continue;
      PairPaths pp;
      enumerate_paths(g, s, t, pp, eps);
      sum += std::isfinite(pp.best) ? pp.best : n * max_edge;
    }
    out[s] = sum > 0.0 ? 1.0 / sum : 0.0;
  }
  return out;
}

// Stationary distribution of the damped random walk, from a dense linear
// solve of (I - d M) p = (1 - d)/n with dangling mass spread uniformly.
inline std::vector<double> dense_pagerank(const extsum::SentenceGraph& g,
                                          double damping = 0.85) {
  const int n = g.n;
  if (n == 1) return {1.0};
  std::vector<double> strength(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j != i) strength[i] += g.weight(i, j);
    }
  }
  // a[i][j] = delta_ij - d * M_ij, M_ij = w_ji / s_j (or 1/n for dangling j)
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double mij;
      if (strength[j] <= 0.0) {
        mij = 1.0 / n;
      } else {
        mij = (i == j ? 0.0 : g.weight(j, i)) / strength[j];
      }
      a[i][j] = (i == j ? 1.0 : 0.0) - damping * mij;
    }
    a[i][n] = (1.0 - damping) / n;
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      double f = a[r][col] / a[col][col];
      for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) p[i] = a[i][n] / a[i][i];
  return p;
}

inline std::vector<double> direct_strength(const extsum::SentenceGraph& g) {
  std::vector<double> s(g.n, 0.0);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      if (j != i) s[i] += g.weight(i, j);
    }
  }
  return s;
}

inline std::vector<double> direct_diversity(const extsum::SentenceGraph& g) {
  std::vector<double> out(g.n, 0.0);
  auto s = direct_strength(g);
  for (int i = 0; i < g.n; ++i) {
    std::vector<double> ws;
    for (int j = 0; j < g.n; ++j) {
      if (j != i && g.weight(i, j) > 0.0) ws.push_back(g.weight(i, j));
    }
    if (ws.size() < 2) continue;
    double h = 0.0;
    for (double w : ws) {
      double p = w / s[i];
      h -= p * std::log(p);
    }
    out[i] = h / std::log(static_cast<double>(ws.size()));
  }
  return out;
}

// Random test graphs: sometimes complete (the shape real sentence graphs
// take), sometimes sparse, occasionally disconnected.
inline extsum::SentenceGraph random_graph(std::mt19937_64& rng, int max_n = 8,
                                          bool allow_invert = false) {
  auto unit = [&] { return (rng() >> 11) * 0x1.0p-53; };
  int n = 2 + static_cast<int>(rng() % (max_n - 1));
  extsum::SentenceGraph g(n);
  double edge_prob = 0.3 + 0.7 * unit();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (unit() < edge_prob) {
        g.set_weight(i, j, 0.05 + 0.9 * unit());
      }
    }
  }
  if (allow_invert && unit() < 0.3) g.invert_distances = true;
  return g;
}

// ---------------------------------------------------------------------------
// N-gram overlap counted the slow way: materialize every gram as a token
// slice, sort, and intersect sorted multisets per reference. No joining,
// no hashing — structurally unrelated to the fast path.

inline std::vector<std::vector<std::string>> slice_grams(
    const std::vector<std::string>& tokens, int n) {
  std::vector<std::vector<std::string>> out;
  for (int i = 0; i + n <= static_cast<int>(tokens.size()); ++i) {
    out.emplace_back(tokens.begin() + i, tokens.begin() + i + n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct RougeCounts {
  long long matched = 0;
  long long peer_total = 0;
  long long model_total = 0;
};

inline RougeCounts brute_rouge_counts(
    const std::vector<std::string>& peer,
    const std::vector<std::vector<std::string>>& models, int n) {
  RougeCounts rc;
  auto pg = slice_grams(peer, n);
  rc.peer_total = static_cast<long long>(pg.size()) *
                  static_cast<long long>(models.size());
  for (const auto& model : models) {
    auto mg = slice_grams(model, n);
    rc.model_total += static_cast<long long>(mg.size());
    std::vector<std::vector<std::string>> common;
    std::set_intersection(pg.begin(), pg.end(), mg.begin(), mg.end(),
                          std::back_inserter(common));
    rc.matched += static_cast<long long>(common.size());
  }
  return rc;
}

// ---------------------------------------------------------------------------
// Correlation coefficients straight from their textbook definitions.

inline double brute_pearson(const std::vector<double>& x,
                            const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
  }
  return (n * sxy - sx * sy) /
         std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// Midranks by counting: rank_i = |{x_j < x_i}| + (|{x_j == x_i}| + 1) / 2.
inline std::vector<double> brute_midranks(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    int less = 0, equal = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] < x[i]) ++less;
      if (x[j] == x[i]) ++equal;
    }
    r[i] = less + (equal + 1) / 2.0;
  }
  return r;
}

inline double brute_spearman(const std::vector<double>& x,
                             const std::vector<double>& y) {
  return brute_pearson(brute_midranks(x), brute_midranks(y));
}

inline double brute_kendall_taub(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const std::size_t n = x.size();
  double concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++ties_x;
      } else if (dy == 0) {
        ++ties_y;
      } else if (dx * dy > 0) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  // Denominator: geometric mean of the pair counts untied in each vector
  // (pairs tied in both vectors drop out of either count).
  double nx = concordant + discordant + ties_y;
  double ny = concordant + discordant + ties_x;
  return (concordant - discordant) / std::sqrt(nx * ny);
}

}  // namespace oracles
