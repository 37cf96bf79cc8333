#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extsum/linalg.hpp"

namespace extsum {

struct StatsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Human ratings

// TSV rows "judge<TAB>topic<TAB>system<TAB>rating". The (topic, system)
// pairs form the columns; every judge must rate every column exactly once.
struct RatingMatrix {
  std::vector<std::string> judges;  // sorted
  std::vector<std::pair<std::string, std::string>> columns;  // (topic, system)
  Mat ratings;  // judges x columns

  static RatingMatrix load_tsv(const std::filesystem::path& path);
  static RatingMatrix parse_tsv(std::istream& in, const std::string& origin);
};

struct JudgeScale {
  std::vector<double> mean;  // per judge
  std::vector<double> sd;    // sample standard deviation (n-1)
};

// Per-judge standardization: z = (x - mean) / sd, removing scale and
// leniency differences between judges. A judge with zero spread is an error.
std::pair<Mat, JudgeScale> zscore_standardize(const RatingMatrix& ratings);

// ---------------------------------------------------------------------------
// Test results

struct StatResult {
  std::string test;
  double statistic = 0.0;
  std::optional<double> p_value;
  int tails = 2;
  std::optional<double> df1, df2;
  bool significant_at_95 = false;
  // Set when a p-value is pinned at an exact boundary (e.g. zero residual
  // variance) rather than computed from a distribution.
  bool exact_separation = false;
};

// ---------------------------------------------------------------------------
// Agreement between two raters' score vectors

enum class Agreement { kCosine, kPearson, kSpearman, kKendall };

const char* to_string(Agreement a);

// Cosine carries no p-value. Pearson/Spearman p-values come from the exact
// t transform; Kendall's tau-b uses the ties-adjusted normal approximation.
StatResult agreement(std::span<const double> u, std::span<const double> v,
                     Agreement kind);

// ---------------------------------------------------------------------------
// Repeated-measures comparisons

// One-way repeated-measures analysis of variance. data is conditions x
// subjects (every subject measured under every condition).
StatResult rm_anova(const Mat& data);

// Paired one- or two-tailed t test; the one-tailed direction follows the
// sign of the mean difference. family_size > 1 applies a Bonferroni cut to
// the significance call (p < 0.05 / family_size), not to the p-value itself.
StatResult paired_ttest(std::span<const double> x, std::span<const double> y,
                        int tails, int family_size = 1);

// ---------------------------------------------------------------------------
// Standardized rating tensor and summarizability

struct ZTensor {
  std::vector<std::string> topics;   // sorted
  std::vector<std::string> systems;  // sorted
  std::vector<std::string> judges;   // sorted
  std::vector<double> z;             // topic-major, then system, then judge

  double at(int t, int s, int j) const {
    return z[(static_cast<std::size_t>(t) * systems.size() + s) *
                 judges.size() +
             j];
  }
  static ZTensor build(const RatingMatrix& ratings, const Mat& zscores);
};

struct SummarizabilityResult {
  // Topics by descending mean standardized rating over systems and judges.
  std::vector<std::string> topics;
  std::vector<double> topic_scores;
  std::vector<std::string> systems;
  std::vector<double> system_means;               // mean z per system
  std::vector<std::vector<double>> system_topic_means;  // per system, by topic
  Mat system_cosines;  // pairwise cosine of the topic-mean vectors
};

SummarizabilityResult summarizability(const ZTensor& tensor);

}  // namespace extsum
