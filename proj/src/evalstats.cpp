#include "extsum/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "extsum/statfun.hpp"

namespace extsum {

// ---------------------------------------------------------------------------
// Rating matrix

RatingMatrix RatingMatrix::load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StatsError("cannot open ratings " + path.string());
  return parse_tsv(in, path.string());
}

RatingMatrix RatingMatrix::parse_tsv(std::istream& in,
                                     const std::string& origin) {
  struct Row {
    std::string judge, topic, system;
    double rating;
  };
  std::vector<Row> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    Row row;
    if (!(ss >> row.judge >> row.topic >> row.system >> row.rating)) {
      throw StatsError(origin + ":" + std::to_string(lineno) +
                       ": expected judge topic system rating");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw StatsError(origin + ": no ratings");

  std::set<std::string> judge_set;
  std::set<std::pair<std::string, std::string>> column_set;
  for (const auto& r : rows) {
    judge_set.insert(r.judge);
    column_set.insert({r.topic, r.system});
  }
  RatingMatrix m;
  m.judges.assign(judge_set.begin(), judge_set.end());
  m.columns.assign(column_set.begin(), column_set.end());
  std::map<std::string, int> jindex;
  std::map<std::pair<std::string, std::string>, int> cindex;
  for (int i = 0; i < static_cast<int>(m.judges.size()); ++i) {
    jindex[m.judges[i]] = i;
  }
  for (int i = 0; i < static_cast<int>(m.columns.size()); ++i) {
    cindex[m.columns[i]] = i;
  }
  m.ratings = Mat(static_cast<int>(m.judges.size()),
                  static_cast<int>(m.columns.size()));
  Mat seen(m.ratings.rows, m.ratings.cols);
  for (const auto& r : rows) {
    int j = jindex[r.judge];
    int c = cindex[{r.topic, r.system}];
    if (seen(j, c) != 0.0) {
      throw StatsError(origin + ": duplicate rating for judge " + r.judge +
                       ", topic " + r.topic + ", system " + r.system);
    }
    seen(j, c) = 1.0;
    m.ratings(j, c) = r.rating;
  }
  for (int j = 0; j < m.ratings.rows; ++j) {
    for (int c = 0; c < m.ratings.cols; ++c) {
      if (seen(j, c) == 0.0) {
        throw StatsError(origin + ": missing rating for judge " + m.judges[j] +
                         ", topic " + m.columns[c].first + ", system " +
                         m.columns[c].second);
      }
    }
  }
  return m;
}

std::pair<Mat, JudgeScale> zscore_standardize(const RatingMatrix& ratings) {
  const int nj = ratings.ratings.rows;
  const int nc = ratings.ratings.cols;
  if (nc < 2) throw StatsError("standardization needs at least two columns");
  JudgeScale scale;
  scale.mean.resize(nj);
  scale.sd.resize(nj);
  Mat z(nj, nc);
  for (int j = 0; j < nj; ++j) {
    double mean = 0.0;
    for (int c = 0; c < nc; ++c) mean += ratings.ratings(j, c);
    mean /= nc;
    double ss = 0.0;
    for (int c = 0; c < nc; ++c) {
      double d = ratings.ratings(j, c) - mean;
      ss += d * d;
    }
    double sd = std::sqrt(ss / (nc - 1));
    if (sd == 0.0) {
      throw StatsError("judge " + ratings.judges[j] +
                       " gave a constant rating; cannot standardize");
    }
    scale.mean[j] = mean;
    scale.sd[j] = sd;
    for (int c = 0; c < nc; ++c) {
      z(j, c) = (ratings.ratings(j, c) - mean) / sd;
    }
  }
  return {std::move(z), std::move(scale)};
}

// ---------------------------------------------------------------------------
// Agreement

const char* to_string(Agreement a) {
  switch (a) {
    case Agreement::kCosine: return "cosine";
    case Agreement::kPearson: return "pearson";
    case Agreement::kSpearman: return "spearman";
    case Agreement::kKendall: return "kendall";
  }
  return "?";
}

namespace {

double pearson_r(std::span<const double> u, std::span<const double> v) {
  const std::size_t n = u.size();
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= n;
  mv /= n;
  double suv = 0.0, suu = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double du = u[i] - mu, dv = v[i] - mv;
    suv += du * dv;
    suu += du * du;
    svv += dv * dv;
  }
  if (suu == 0.0 || svv == 0.0) {
    throw StatsError("correlation of a constant vector is undefined");
  }
  return suv / std::sqrt(suu * svv);
}

// Average ranks (ties share the mean of the positions they occupy).
std::vector<double> midranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    double rank = 0.5 * (i + j) + 1.0;  // 1-based average rank
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

// tau-b with the ties-corrected normal approximation for the p-value.
StatResult kendall_tau_b(std::span<const double> u, std::span<const double> v) {
  const std::size_t n = u.size();
  long long concordant = 0, discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double a = (u[i] - u[j]) * (v[i] - v[j]);
      if (a > 0) ++concordant;
      else if (a < 0) ++discordant;
    }
  }
  auto tie_stats = [&](std::span<const double> x, double& t1, double& t2,
                       double& t3) {
    std::map<double, long long> groups;
    for (double value : x) ++groups[value];
    t1 = t2 = t3 = 0.0;
    for (const auto& [_, t] : groups) {
      t1 += static_cast<double>(t) * (t - 1) / 2.0;
      t2 += static_cast<double>(t) * (t - 1) * (2 * t + 5);
      t3 += static_cast<double>(t) * (t - 1) * (t - 2);
    }
  };
  double tu1, tu2, tu3, tv1, tv2, tv3;
  tie_stats(u, tu1, tu2, tu3);
  tie_stats(v, tv1, tv2, tv3);
  const double n0 = static_cast<double>(n) * (n - 1) / 2.0;
  const double denom = std::sqrt((n0 - tu1) * (n0 - tv1));
  if (denom == 0.0) {
    throw StatsError("rank correlation of a constant vector is undefined");
  }
  StatResult res;
  res.test = "kendall";
  res.statistic = (concordant - discordant) / denom;

  const double nn = static_cast<double>(n);
  double var = (nn * (nn - 1) * (2 * nn + 5) - tu2 - tv2) / 18.0 +
               tu3 * tv3 / (9.0 * nn * (nn - 1) * (nn - 2)) +
               2.0 * tu1 * tv1 / (nn * (nn - 1));
  double s = static_cast<double>(concordant - discordant);
  double p = 1.0;
  if (var > 0.0) {
    double z = s / std::sqrt(var);
    p = 2.0 * (1.0 - normal_cdf(std::abs(z)));
  }
  res.p_value = std::min(1.0, p);
  res.tails = 2;
  res.significant_at_95 = *res.p_value < 0.05;
  return res;
}

}  // namespace

StatResult agreement(std::span<const double> u, std::span<const double> v,
                     Agreement kind) {
  if (u.size() != v.size()) throw StatsError("agreement: length mismatch");
  if (u.size() < 2) throw StatsError("agreement needs at least two scores");
  StatResult res;
  res.test = to_string(kind);
  switch (kind) {
    case Agreement::kCosine: {
      double dot = 0.0, nu = 0.0, nv = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
      }
      if (nu == 0.0 || nv == 0.0) {
        throw StatsError("cosine of a zero vector is undefined");
      }
      res.statistic = dot / std::sqrt(nu * nv);
      return res;  // no sampling distribution attached
    }
    case Agreement::kPearson:
    case Agreement::kSpearman: {
      std::vector<double> ru, rv;
      std::span<const double> a = u, b = v;
      if (kind == Agreement::kSpearman) {
        ru = midranks(u);
        rv = midranks(v);
        a = ru;
        b = rv;
      }
      double r = pearson_r(a, b);
      res.statistic = r;
      const double n = static_cast<double>(u.size());
      if (n > 2) {
        if (std::abs(r) >= 1.0) {
          res.p_value = 0.0;
          res.exact_separation = true;
        } else {
          double t = r * std::sqrt((n - 2.0) / (1.0 - r * r));
          res.p_value = t_pvalue(t, n - 2.0, 2);
        }
        res.df1 = n - 2.0;
        res.significant_at_95 = *res.p_value < 0.05;
      }
      return res;
    }
    case Agreement::kKendall:
      return kendall_tau_b(u, v);
  }
  throw StatsError("unreachable agreement kind");
}

// ---------------------------------------------------------------------------
// Repeated measures

StatResult rm_anova(const Mat& data) {
  const int k = data.rows;  // conditions
  const int n = data.cols;  // subjects
  if (k < 2 || n < 2) {
    throw StatsError("rm_anova needs at least 2 conditions and 2 subjects");
  }
  double grand = 0.0;
  for (double v : data.a) grand += v;
  grand /= k * n;

  std::vector<double> cond_mean(k, 0.0), subj_mean(n, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < n; ++j) {
      cond_mean[i] += data(i, j);
      subj_mean[j] += data(i, j);
    }
  }
  for (double& v : cond_mean) v /= n;
  for (double& v : subj_mean) v /= k;

  double ss_cond = 0.0, ss_subj = 0.0, ss_total = 0.0;
  for (int i = 0; i < k; ++i) {
    double d = cond_mean[i] - grand;
    ss_cond += n * d * d;
  }
  for (int j = 0; j < n; ++j) {
    double d = subj_mean[j] - grand;
    ss_subj += k * d * d;
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < n; ++j) {
      double d = data(i, j) - grand;
      ss_total += d * d;
    }
  }
  double ss_err = ss_total - ss_cond - ss_subj;
  const double df_cond = k - 1.0;
  const double df_err = (k - 1.0) * (n - 1.0);

  StatResult res;
  res.test = "rm_anova";
  res.df1 = df_cond;
  res.df2 = df_err;
  const double scale = std::max(ss_total, 1.0);
  if (ss_cond <= scale * 1e-12) {  // conditions indistinguishable
    res.statistic = 0.0;
    res.p_value = 1.0;
    return res;
  }
  if (ss_err <= scale * 1e-12) {  // perfect separation
    res.statistic = std::numeric_limits<double>::infinity();
    res.p_value = 0.0;
    res.exact_separation = true;
    res.significant_at_95 = true;
    return res;
  }
  res.statistic = (ss_cond / df_cond) / (ss_err / df_err);
  res.p_value = f_sf(res.statistic, df_cond, df_err);
  res.significant_at_95 = *res.p_value < 0.05;
  return res;
}

StatResult paired_ttest(std::span<const double> x, std::span<const double> y,
                        int tails, int family_size) {
  if (x.size() != y.size()) throw StatsError("paired_ttest: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw StatsError("paired_ttest needs at least two pairs");
  if (family_size < 1) throw StatsError("paired_ttest: bad family size");
  std::vector<double> d(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = x[i] - y[i];
    mean += d[i];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / (static_cast<double>(n) - 1.0));

  StatResult res;
  res.test = "paired_t";
  res.tails = tails;
  res.df1 = static_cast<double>(n) - 1.0;
  if (sd == 0.0) {
    if (mean == 0.0) {  // identical samples
      res.statistic = 0.0;
      res.p_value = 1.0;
      return res;
    }
    res.statistic = mean > 0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
    res.p_value = 0.0;
    res.exact_separation = true;
  } else {
    res.statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
    res.p_value = t_pvalue(res.statistic, *res.df1, tails);
  }
  res.significant_at_95 = *res.p_value < 0.05 / family_size;
  return res;
}

// ---------------------------------------------------------------------------
// Summarizability

ZTensor ZTensor::build(const RatingMatrix& ratings, const Mat& zscores) {
  if (zscores.rows != static_cast<int>(ratings.judges.size()) ||
      zscores.cols != static_cast<int>(ratings.columns.size())) {
    throw StatsError("z-score matrix does not match the rating matrix");
  }
  ZTensor t;
  t.judges = ratings.judges;
  std::set<std::string> topic_set, system_set;
  for (const auto& [topic, system] : ratings.columns) {
    topic_set.insert(topic);
    system_set.insert(system);
  }
  t.topics.assign(topic_set.begin(), topic_set.end());
  t.systems.assign(system_set.begin(), system_set.end());
  if (t.topics.size() * t.systems.size() != ratings.columns.size()) {
    throw StatsError("ratings do not cover the full topic x system grid");
  }
  t.z.assign(t.topics.size() * t.systems.size() * t.judges.size(), 0.0);
  std::map<std::string, int> tindex, sindex;
  for (int i = 0; i < static_cast<int>(t.topics.size()); ++i) {
    tindex[t.topics[i]] = i;
  }
  for (int i = 0; i < static_cast<int>(t.systems.size()); ++i) {
    sindex[t.systems[i]] = i;
  }
  for (int c = 0; c < static_cast<int>(ratings.columns.size()); ++c) {
    int ti = tindex[ratings.columns[c].first];
    int si = sindex[ratings.columns[c].second];
    for (int j = 0; j < zscores.rows; ++j) {
      t.z[(static_cast<std::size_t>(ti) * t.systems.size() + si) *
              t.judges.size() +
          j] = zscores(j, c);
    }
  }
  return t;
}

SummarizabilityResult summarizability(const ZTensor& tensor) {
  const int nt = static_cast<int>(tensor.topics.size());
  const int ns = static_cast<int>(tensor.systems.size());
  const int nj = static_cast<int>(tensor.judges.size());
  if (nt == 0 || ns == 0 || nj == 0) throw StatsError("empty rating tensor");

  SummarizabilityResult res;
  res.systems = tensor.systems;
  res.system_means.assign(ns, 0.0);
  res.system_topic_means.assign(ns, std::vector<double>(nt, 0.0));
  std::vector<double> topic_scores(nt, 0.0);
  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      double m = 0.0;
      for (int j = 0; j < nj; ++j) m += tensor.at(t, s, j);
      m /= nj;
      res.system_topic_means[s][t] = m;
      res.system_means[s] += m;
      topic_scores[t] += m;
    }
  }
  for (double& v : res.system_means) v /= nt;
  for (double& v : topic_scores) v /= ns;

  std::vector<int> order(nt);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (topic_scores[a] != topic_scores[b]) {
      return topic_scores[a] > topic_scores[b];
    }
    return tensor.topics[a] < tensor.topics[b];
  });
  for (int idx : order) {
    res.topics.push_back(tensor.topics[idx]);
    res.topic_scores.push_back(topic_scores[idx]);
  }

  res.system_cosines = Mat(ns, ns);
  for (int a = 0; a < ns; ++a) {
    for (int b = 0; b < ns; ++b) {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (int t = 0; t < nt; ++t) {
        dot += res.system_topic_means[a][t] * res.system_topic_means[b][t];
        na += res.system_topic_means[a][t] * res.system_topic_means[a][t];
        nb += res.system_topic_means[b][t] * res.system_topic_means[b][t];
      }
      res.system_cosines(a, b) =
          (na == 0.0 || nb == 0.0) ? 0.0 : dot / std::sqrt(na * nb);
    }
  }
  return res;
}

}  // namespace extsum
