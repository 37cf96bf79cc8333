#include "extsum/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace extsum {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::kTf: return "tf";
    case Scheme::kTfidf: return "tfidf";
    case Scheme::kBinary: return "binary";
  }
  return "?";
}

const char* to_string(StopwordPolicy p) {
  return p == StopwordPolicy::kKeep ? "keep" : "remove";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "tf") return Scheme::kTf;
  if (s == "tfidf") return Scheme::kTfidf;
  if (s == "binary") return Scheme::kBinary;
  throw VectorizeError("unknown weighting scheme: " + s);
}

StopwordPolicy policy_from_string(const std::string& s) {
  if (s == "keep") return StopwordPolicy::kKeep;
  if (s == "remove") return StopwordPolicy::kRemove;
  throw VectorizeError("unknown stopword policy: " + s);
}

// ---------------------------------------------------------------------------
// Vocabulary / idf

std::optional<int> Vocabulary::lookup(const std::string& term) const {
  auto it = index.find(term);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

namespace {

bool counted_token(const Token& t, StopwordPolicy policy) {
  if (!t.is_word) return false;
  return policy == StopwordPolicy::kKeep || !t.is_stopword;
}

template <typename Fn>
void for_each_document(const Corpus& corpus, Fn&& fn) {
  for (const auto& topic : corpus.topics) {
    for (const auto& doc : topic.documents) fn(doc);
  }
}

}  // namespace

Vocabulary Vocabulary::build(const Corpus& corpus, StopwordPolicy policy) {
  std::set<std::string> terms;
  for_each_document(corpus, [&](const Document& doc) {
    for (const auto& s : doc.sentences) {
      for (const auto& t : s.tokens) {
        if (counted_token(t, policy)) terms.insert(t.surface);
      }
    }
  });
  Vocabulary vocab;
  vocab.terms.assign(terms.begin(), terms.end());
  for (int i = 0; i < static_cast<int>(vocab.terms.size()); ++i) {
    vocab.index.emplace(vocab.terms[i], i);
  }
  return vocab;
}

IdfTable IdfTable::compute(const Corpus& corpus, StopwordPolicy policy) {
  IdfTable table;
  std::unordered_map<std::string, int> df;
  int n = 0;
  for_each_document(corpus, [&](const Document& doc) {
    ++n;
    std::set<std::string> seen;
    for (const auto& s : doc.sentences) {
      for (const auto& t : s.tokens) {
        if (counted_token(t, policy)) seen.insert(t.surface);
      }
    }
    for (const auto& term : seen) ++df[term];
  });
  if (n == 0) throw VectorizeError("cannot compute idf over an empty corpus");
  table.doc_count = n;
  table.fallback = std::log(static_cast<double>(n));
  for (const auto& [term, count] : df) {
    table.idf[term] = std::log(static_cast<double>(n) / count);
  }
  return table;
}

IdfTable IdfTable::load_tsv(const std::filesystem::path& path,
                            std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw VectorizeError("cannot open idf table " + path.string());
  IdfTable table;
  std::string line;
  int lineno = 0;
  double max_idf = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string word;
      long n;
      if (ss >> word >> n && word == "documents" && n > 0) {
        table.doc_count = static_cast<int>(n);
      }
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw VectorizeError(path.string() + ":" + std::to_string(lineno) +
                           ": expected term<TAB>idf");
    }
    double v = std::stod(line.substr(tab + 1));
    table.idf[line.substr(0, tab)] = v;
    max_idf = std::max(max_idf, v);
  }
  if (table.doc_count > 0) {
    table.fallback = std::log(static_cast<double>(table.doc_count));
  } else {
    table.fallback = max_idf;
    if (warnings) {
      warnings->push_back("idf table " + path.string() +
                          " has no '# documents' header; using max idf for "
                          "unknown terms");
    }
  }
  return table;
}

void IdfTable::save_tsv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw VectorizeError("cannot write idf table " + path.string());
  if (doc_count > 0) out << "# documents\t" << doc_count << "\n";
  std::vector<std::string> terms;
  terms.reserve(idf.size());
  for (const auto& [term, _] : idf) terms.push_back(term);
  std::sort(terms.begin(), terms.end());
  char buf[64];
  for (const auto& term : terms) {
    std::snprintf(buf, sizeof(buf), "%.12g", idf.at(term));
    out << term << '\t' << buf << '\n';
  }
}

// ---------------------------------------------------------------------------
// Term-document matrix

TermDocMatrix TermDocMatrix::from_dense(int rows, int cols,
                                        const std::vector<double>& row_major) {
  if (static_cast<std::size_t>(rows) * cols != row_major.size()) {
    throw VectorizeError("from_dense: size mismatch");
  }
  TermDocMatrix x;
  x.term_count = rows;
  x.doc_count = cols;
  x.cols.resize(cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      double v = row_major[static_cast<std::size_t>(i) * cols + j];
      if (v != 0.0) x.cols[j].emplace_back(i, v);
    }
  }
  return x;
}

std::vector<double> TermDocMatrix::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(term_count) * doc_count, 0.0);
  for (int j = 0; j < doc_count; ++j) {
    for (const auto& [i, v] : cols[j]) {
      d[static_cast<std::size_t>(i) * doc_count + j] = v;
    }
  }
  return d;
}

TermDocMatrix build_term_doc_matrix(const Corpus& corpus, Scheme scheme,
                                    StopwordPolicy policy,
                                    const IdfTable* idf) {
  auto vocab = std::make_shared<Vocabulary>(Vocabulary::build(corpus, policy));
  if (vocab->size() == 0) {
    throw VectorizeError("corpus yields an empty vocabulary");
  }
  IdfTable computed;
  if (scheme == Scheme::kTfidf && idf == nullptr) {
    computed = IdfTable::compute(corpus, policy);
    idf = &computed;
  }
  TermDocMatrix x;
  x.term_count = vocab->size();
  x.scheme = scheme;
  x.policy = policy;
  x.vocab = vocab;
  for_each_document(corpus, [&](const Document& doc) {
    std::map<int, double> counts;
    for (const auto& s : doc.sentences) {
      for (const auto& t : s.tokens) {
        if (!counted_token(t, policy)) continue;
        if (auto idx = vocab->lookup(t.surface)) counts[*idx] += 1.0;
      }
    }
    std::vector<std::pair<int, double>> col;
    col.reserve(counts.size());
    for (const auto& [i, count] : counts) {
      double v = count;
      if (scheme == Scheme::kBinary) {
        v = 1.0;
      } else if (scheme == Scheme::kTfidf) {
        v = count * idf->lookup(vocab->terms[i]);
      }
      if (v != 0.0) col.emplace_back(i, v);
    }
    x.cols.push_back(std::move(col));
  });
  x.doc_count = static_cast<int>(x.cols.size());
  if (x.doc_count == 0) throw VectorizeError("corpus has no documents");
  return x;
}

// ---------------------------------------------------------------------------
// Sentence vectors

double SentenceVector::norm() const {
  double s = 0.0;
  if (space == VectorSpace::kTerm) {
    for (const auto& [_, v] : terms) s += v * v;
  } else {
    for (double v : dense) s += v * v;
  }
  return std::sqrt(s);
}

SentenceVector sentence_term_vector(const Sentence& sentence,
                                    const Vocabulary& vocab, Scheme scheme,
                                    StopwordPolicy policy,
                                    const IdfTable* idf) {
  if (scheme == Scheme::kTfidf && idf == nullptr) {
    throw VectorizeError("tfidf sentence vectors need an idf table");
  }
  std::map<int, double> counts;
  for (const auto& t : sentence.tokens) {
    if (!counted_token(t, policy)) continue;
    if (auto idx = vocab.lookup(t.surface)) counts[*idx] += 1.0;
  }
  SentenceVector vec;
  vec.space = VectorSpace::kTerm;
  vec.dim = vocab.size();
  vec.terms.reserve(counts.size());
  for (const auto& [i, count] : counts) {
    double v = count;
    if (scheme == Scheme::kBinary) {
      v = 1.0;
    } else if (scheme == Scheme::kTfidf) {
      v = count * idf->lookup(vocab.terms[i]);
    }
    if (v != 0.0) vec.terms.emplace_back(i, v);
  }
  return vec;
}

double cosine(const SentenceVector& a, const SentenceVector& b) {
  if (a.space != b.space || a.dim != b.dim) {
    throw VectorizeError("cosine: mismatched vector spaces");
  }
  double dot = 0.0;
  if (a.space == VectorSpace::kTerm) {
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() && j < b.terms.size()) {
      if (a.terms[i].first < b.terms[j].first) {
        ++i;
      } else if (a.terms[i].first > b.terms[j].first) {
        ++j;
      } else {
        dot += a.terms[i].second * b.terms[j].second;
        ++i;
        ++j;
      }
    }
  } else {
    for (int i = 0; i < a.dim; ++i) dot += a.dense[i] * b.dense[i];
  }
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (na * nb);
}

// ---------------------------------------------------------------------------
// Truncated SVD

namespace {

// y = G q where G is the Gram matrix of the smaller side of X.
// doc_side: G = X^T X (N x N); otherwise G = X X^T (M x M).
void apply_gram(const TermDocMatrix& x, bool doc_side,
                const std::vector<double>& q, std::vector<double>& y,
                std::vector<double>& scratch) {
  const int m = x.term_count, n = x.doc_count;
  if (doc_side) {
    scratch.assign(m, 0.0);
    for (int d = 0; d < n; ++d) {
      double qd = q[d];
      if (qd == 0.0) continue;
      for (const auto& [t, v] : x.cols[d]) scratch[t] += qd * v;
    }
    y.assign(n, 0.0);
    for (int d = 0; d < n; ++d) {
      double s = 0.0;
      for (const auto& [t, v] : x.cols[d]) s += v * scratch[t];
      y[d] = s;
    }
  } else {
    scratch.assign(n, 0.0);
    for (int d = 0; d < n; ++d) {
      double s = 0.0;
      for (const auto& [t, v] : x.cols[d]) s += v * q[t];
      scratch[d] = s;
    }
    y.assign(m, 0.0);
    for (int d = 0; d < n; ++d) {
      double w = scratch[d];
      if (w == 0.0) continue;
      for (const auto& [t, v] : x.cols[d]) y[t] += w * v;
    }
  }
}

Mat dense_gram(const TermDocMatrix& x, bool doc_side) {
  const int m = x.term_count, n = x.doc_count;
  if (doc_side) {
    Mat g(n, n);
    for (int d1 = 0; d1 < n; ++d1) {
      for (int d2 = d1; d2 < n; ++d2) {
        const auto& a = x.cols[d1];
        const auto& b = x.cols[d2];
        double s = 0.0;
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
          if (a[i].first < b[j].first) {
            ++i;
          } else if (a[i].first > b[j].first) {
            ++j;
          } else {
            s += a[i].second * b[j].second;
            ++i;
            ++j;
          }
        }
        g(d1, d2) = g(d2, d1) = s;
      }
    }
    return g;
  }
  Mat g(m, m);
  for (int d = 0; d < n; ++d) {
    const auto& col = x.cols[d];
    for (std::size_t i = 0; i < col.size(); ++i) {
      for (std::size_t j = i; j < col.size(); ++j) {
        g(col[i].first, col[j].first) += col[i].second * col[j].second;
      }
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < i; ++j) g(i, j) = g(j, i);
  }
  return g;
}

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

// Block subspace iteration with Rayleigh-Ritz extraction on the implicit
// Gram operator. Returns the leading eigenpairs (descending).
void subspace_eigh(const TermDocMatrix& x, bool doc_side, int k, uint64_t seed,
                   const SvdOptions& opt, std::vector<double>& lam, Mat& w) {
  const int n = doc_side ? x.doc_count : x.term_count;
  const int block = std::min(n, k + opt.oversample);
  std::mt19937_64 rng(seed);
  Mat q(n, block);
  for (double& v : q.a) v = 2.0 * unit_double(rng) - 1.0;
  orthonormalize_columns(q);

  std::vector<double> qcol(n), ycol, scratch;
  std::vector<double> prev(k, std::numeric_limits<double>::infinity());
  Mat y(n, block), h, s;
  std::vector<double> theta;
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    for (int j = 0; j < block; ++j) {
      for (int i = 0; i < n; ++i) qcol[i] = q(i, j);
      apply_gram(x, doc_side, qcol, ycol, scratch);
      for (int i = 0; i < n; ++i) y(i, j) = ycol[i];
    }
    h = matmul(transpose(q), y);
    for (int i = 0; i < block; ++i) {  // symmetrize drift
      for (int j = i + 1; j < block; ++j) {
        double v = 0.5 * (h(i, j) + h(j, i));
        h(i, j) = h(j, i) = v;
      }
    }
    jacobi_eigh(h, theta, s);
    bool converged = true;
    for (int i = 0; i < k; ++i) {
      double sv = std::sqrt(std::max(theta[i], 0.0));
      double ref = std::max(std::sqrt(std::max(theta[0], 0.0)), 1e-300);
      if (std::abs(sv - prev[i]) > opt.tol * ref) converged = false;
      prev[i] = sv;
    }
    if (converged && iter > 0) break;
    q = y;
    orthonormalize_columns(q);
  }
  // Ritz vectors from the last subspace.
  Mat ritz = matmul(q, s);
  lam.assign(theta.begin(), theta.begin() + k);
  w = Mat(n, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < n; ++i) w(i, j) = ritz(i, j);
  }
}

}  // namespace

LsaModel truncated_svd(const TermDocMatrix& x, int k, uint64_t seed,
                       std::vector<std::string>* warnings,
                       const SvdOptions& opt) {
  const int m = x.term_count, n = x.doc_count;
  if (m <= 0 || n <= 0) throw VectorizeError("svd: empty matrix");
  if (k < 1) throw VectorizeError("svd: rank must be at least 1");
  double fro2 = 0.0;
  for (const auto& col : x.cols) {
    for (const auto& [_, v] : col) fro2 += v * v;
  }
  if (fro2 == 0.0) throw VectorizeError("svd: matrix is all zeros");

  const int small = std::min(m, n);
  if (k > small) {
    if (warnings) {
      warnings->push_back("svd rank reduced from " + std::to_string(k) +
                          " to " + std::to_string(small));
    }
    k = small;
  }
  const bool doc_side = n <= m;
  auto method = opt.method;
  if (method == SvdOptions::Method::kAuto) {
    method = small <= opt.gram_limit ? SvdOptions::Method::kGram
                                     : SvdOptions::Method::kSubspace;
  }

  std::vector<double> lam;
  Mat w;
  if (method == SvdOptions::Method::kGram) {
    Mat g = dense_gram(x, doc_side);
    std::vector<double> lam_all;
    Mat v_all;
    jacobi_eigh(g, lam_all, v_all);
    lam.assign(lam_all.begin(), lam_all.begin() + k);
    w = Mat(small, k);
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < small; ++i) w(i, j) = v_all(i, j);
    }
  } else {
    subspace_eigh(x, doc_side, k, seed, opt, lam, w);
  }

  // Drop directions below the numerical-rank floor.
  std::vector<double> sigma(k);
  for (int i = 0; i < k; ++i) sigma[i] = std::sqrt(std::max(lam[i], 0.0));
  const double floor =
      sigma.empty() ? 0.0
                    : sigma[0] * std::max(m, n) *
                          std::sqrt(std::numeric_limits<double>::epsilon());
  int keep = 0;
  while (keep < k && sigma[keep] > floor) ++keep;
  if (keep == 0) throw VectorizeError("svd: matrix is numerically rank zero");
  if (keep < k && warnings) {
    warnings->push_back("svd rank reduced from " + std::to_string(k) + " to " +
                        std::to_string(keep) + " (numerical rank)");
  }
  k = keep;
  sigma.resize(k);

  LsaModel model;
  model.term_count = m;
  model.k = k;
  model.sigma = sigma;
  model.vocab = x.vocab;
  if (doc_side) {
    model.v = Mat(n, k);
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < n; ++i) model.v(i, j) = w(i, j);
    }
    model.u = Mat(m, k);  // U = X V S^-1
    for (int d = 0; d < n; ++d) {
      for (const auto& [t, val] : x.cols[d]) {
        for (int j = 0; j < k; ++j) model.u(t, j) += val * model.v(d, j);
      }
    }
    for (int j = 0; j < k; ++j) {
      for (int t = 0; t < m; ++t) model.u(t, j) /= sigma[j];
    }
  } else {
    model.u = Mat(m, k);
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < m; ++i) model.u(i, j) = w(i, j);
    }
    model.v = Mat(n, k);  // V = X^T U S^-1
    for (int d = 0; d < n; ++d) {
      for (int j = 0; j < k; ++j) {
        double s = 0.0;
        for (const auto& [t, val] : x.cols[d]) s += val * model.u(t, j);
        model.v(d, j) = s / sigma[j];
      }
    }
  }

  // Sign convention: largest-magnitude entry of each U column is positive.
  for (int j = 0; j < k; ++j) {
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < m; ++i) {
      double mag = std::abs(model.u(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (model.u(arg, j) < 0.0) {
      for (int i = 0; i < m; ++i) model.u(i, j) = -model.u(i, j);
      for (int i = 0; i < n; ++i) model.v(i, j) = -model.v(i, j);
    }
  }
  return model;
}

SentenceVector project_sentence(const LsaModel& model,
                                const SentenceVector& term_vector) {
  if (term_vector.space != VectorSpace::kTerm) {
    throw VectorizeError("project_sentence: input must be in term space");
  }
  if (term_vector.dim != model.term_count) {
    throw VectorizeError("project_sentence: dimension mismatch");
  }
  SentenceVector out;
  out.space = VectorSpace::kLsa;
  out.dim = model.k;
  out.dense.assign(model.k, 0.0);
  for (const auto& [t, v] : term_vector.terms) {
    for (int j = 0; j < model.k; ++j) out.dense[j] += model.u(t, j) * v;
  }
  for (int j = 0; j < model.k; ++j) out.dense[j] /= model.sigma[j];
  return out;
}

Mat lsa_reconstruction(const LsaModel& model) {
  Mat us = model.u;
  for (int j = 0; j < model.k; ++j) {
    for (int i = 0; i < us.rows; ++i) us(i, j) *= model.sigma[j];
  }
  return matmul(us, transpose(model.v));
}

// ---------------------------------------------------------------------------

std::vector<SentenceVector> make_sentence_vectors(const Item& item,
                                                  const Vocabulary& vocab,
                                                  const VectorConfig& config,
                                                  const IdfTable* idf,
                                                  const LsaModel* model) {
  if (config.space == VectorSpace::kLsa && model == nullptr) {
    throw VectorizeError("latent-space vectors need a trained model");
  }
  std::vector<SentenceVector> out;
  out.reserve(item.sentences.size());
  for (const Sentence* s : item.sentences) {
    if (config.space == VectorSpace::kTerm) {
      out.push_back(
          sentence_term_vector(*s, vocab, config.scheme, config.policy, idf));
    } else {
      auto tf = sentence_term_vector(*s, vocab, Scheme::kTf, config.policy);
      out.push_back(project_sentence(*model, tf));
    }
  }
  return out;
}

}  // namespace extsum
