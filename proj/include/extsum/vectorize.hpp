#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "extsum/corpus.hpp"
#include "extsum/linalg.hpp"

namespace extsum {

struct VectorizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Scheme { kTf, kTfidf, kBinary };
enum class StopwordPolicy { kKeep, kRemove };

const char* to_string(Scheme s);
const char* to_string(StopwordPolicy p);
Scheme scheme_from_string(const std::string& s);
StopwordPolicy policy_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Vocabulary and document frequencies

struct Vocabulary {
  std::vector<std::string> terms;  // lexicographically sorted, unique
  std::unordered_map<std::string, int> index;

  int size() const { return static_cast<int>(terms.size()); }
  std::optional<int> lookup(const std::string& term) const;

  // Terms are the surfaces of word tokens across the corpus; the remove
  // policy drops stopword-flagged tokens before collecting.
  static Vocabulary build(const Corpus& corpus, StopwordPolicy policy);
};

struct IdfTable {
  int doc_count = 0;  // 0 when unknown (external table without a header)
  std::unordered_map<std::string, double> idf;
  double fallback = 0.0;  // value for out-of-vocabulary terms

  double lookup(const std::string& term) const {
    auto it = idf.find(term);
    return it == idf.end() ? fallback : it->second;
  }

  // idf(t) = ln(N / df(t)) over the corpus documents; fallback = ln(N).
  static IdfTable compute(const Corpus& corpus, StopwordPolicy policy);
  // TSV "term<TAB>idf". A "# documents<TAB>N" comment line, when present,
  // fixes the out-of-vocabulary fallback at ln(N); otherwise the largest
  // idf in the table is used and a warning is recorded.
  static IdfTable load_tsv(const std::filesystem::path& path,
                           std::vector<std::string>* warnings);
  void save_tsv(const std::filesystem::path& path) const;
};

// ---------------------------------------------------------------------------
// Term-document matrix (sparse columns, one per document)

struct TermDocMatrix {
  int term_count = 0;
  int doc_count = 0;
  Scheme scheme = Scheme::kTf;
  StopwordPolicy policy = StopwordPolicy::kKeep;
  std::shared_ptr<const Vocabulary> vocab;  // may be empty for raw matrices
  // Per document: (term index, weight), sorted by term index.
  std::vector<std::vector<std::pair<int, double>>> cols;

  static TermDocMatrix from_dense(int rows, int cols,
                                  const std::vector<double>& row_major);
  std::vector<double> to_dense() const;  // row-major, rows = terms
};

// Documents appear in corpus order (topics sorted, documents sorted within).
// For the tfidf scheme an external idf table may replace the corpus one.
TermDocMatrix build_term_doc_matrix(const Corpus& corpus, Scheme scheme,
                                    StopwordPolicy policy,
                                    const IdfTable* idf = nullptr);

// ---------------------------------------------------------------------------
// Sentence vectors

enum class VectorSpace { kTerm, kLsa };

struct SentenceVector {
  VectorSpace space = VectorSpace::kTerm;
  int dim = 0;
  std::vector<std::pair<int, double>> terms;  // term space, sorted by index
  std::vector<double> dense;                  // latent space

  double norm() const;
};

SentenceVector sentence_term_vector(const Sentence& sentence,
                                    const Vocabulary& vocab, Scheme scheme,
                                    StopwordPolicy policy,
                                    const IdfTable* idf = nullptr);

// Zero inputs give cosine 0; spaces and dimensions must agree.
double cosine(const SentenceVector& a, const SentenceVector& b);

// ---------------------------------------------------------------------------
// Truncated SVD / latent semantic analysis

struct LsaModel {
  int term_count = 0;
  int k = 0;                  // effective rank kept
  Mat u;                      // term_count x k
  std::vector<double> sigma;  // k singular values, descending, > 0
  Mat v;                      // doc_count x k
  std::shared_ptr<const Vocabulary> vocab;
};

struct SvdOptions {
  enum class Method { kAuto, kGram, kSubspace };
  Method method = Method::kAuto;
  // kAuto switches from the exact Gram eigendecomposition to seeded block
  // subspace iteration above this size of the smaller matrix side.
  int gram_limit = 512;
  int max_iter = 2000;
  double tol = 1e-10;
  int oversample = 8;
};

// Rank-k factorization X ~= U S V^T. Requested k is clamped to the effective
// numerical rank (a warning is recorded when clamped). Deterministic for a
// fixed seed. The sign of each singular triplet is chosen so the
// largest-magnitude entry of the U column is positive.
LsaModel truncated_svd(const TermDocMatrix& x, int k, uint64_t seed,
                       std::vector<std::string>* warnings = nullptr,
                       const SvdOptions& opt = {});

// Folds a term-space vector into the latent space: s_k = S^-1 U^T s.
SentenceVector project_sentence(const LsaModel& model,
                                const SentenceVector& term_vector);

// Reconstruction U S V^T (dense), for error measurements.
Mat lsa_reconstruction(const LsaModel& model);

// ---------------------------------------------------------------------------
// Per-item sentence vector assembly

struct VectorConfig {
  VectorSpace space = VectorSpace::kTerm;
  Scheme scheme = Scheme::kTf;
  StopwordPolicy policy = StopwordPolicy::kRemove;
};

// Builds one vector per item sentence. Latent-space configs project tf
// vectors through the model (scheme is ignored for the projection input).
std::vector<SentenceVector> make_sentence_vectors(const Item& item,
                                                  const Vocabulary& vocab,
                                                  const VectorConfig& config,
                                                  const IdfTable* idf,
                                                  const LsaModel* model);

}  // namespace extsum
