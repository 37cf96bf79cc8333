#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <random>

#include "extsum/vectorize.hpp"
#include "testutil.hpp"

using namespace extsum;
using testutil::TempDir;
using testutil::write_file;

namespace {

Corpus tiny_corpus() {
  TempDir tmp;  // local tree, discarded after load
  write_file(tmp.path() / "c/T1/a.txt", "عنوان\nگربه سیاه. گربه از سگ ترسید.");
  write_file(tmp.path() / "c/T1/b.txt", "عنوان\nسگ سفید از گربه دور شد.");
  write_file(tmp.path() / "c/T2/c.txt", "عنوان\nماه روشن است. ماه و ستاره.");
  write_file(tmp.path() / "stop.txt", "از\nو\nاست\n");
  LoadOptions opt;
  opt.stopword_path = tmp.path() / "stop.txt";
  return load_corpus(tmp.path() / "c", opt);
}

Eigen::MatrixXd to_eigen(const TermDocMatrix& x) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(x.term_count, x.doc_count);
  auto dense = x.to_dense();
  for (int i = 0; i < x.term_count; ++i) {
    for (int j = 0; j < x.doc_count; ++j) {
      m(i, j) = dense[static_cast<std::size_t>(i) * x.doc_count + j];
    }
  }
  return m;
}

TermDocMatrix random_matrix(int rows, int cols, std::mt19937_64& rng,
                            double density = 0.7) {
  std::vector<double> dense(static_cast<std::size_t>(rows) * cols, 0.0);
  auto unit = [&] { return (rng() >> 11) * 0x1.0p-53; };
  for (auto& v : dense) {
    if (unit() < density) v = unit() * 4.0 - 2.0;
  }
  return TermDocMatrix::from_dense(rows, cols, dense);
}

}  // namespace

TEST_CASE("vocabulary is sorted and policy-aware") {
  Corpus corpus = tiny_corpus();
  auto keep = Vocabulary::build(corpus, StopwordPolicy::kKeep);
  auto remove = Vocabulary::build(corpus, StopwordPolicy::kRemove);
  CHECK(std::is_sorted(keep.terms.begin(), keep.terms.end()));
  CHECK(keep.lookup("از").has_value());
  CHECK_FALSE(remove.lookup("از").has_value());
  CHECK(remove.lookup("گربه").has_value());
  CHECK(remove.size() < keep.size());
  for (int i = 0; i < keep.size(); ++i) {
    CHECK(*keep.lookup(keep.terms[i]) == i);
  }
}

TEST_CASE("idf values and fallback") {
  Corpus corpus = tiny_corpus();
  IdfTable idf = IdfTable::compute(corpus, StopwordPolicy::kKeep);
  const double n = 3.0;
  // "گربه" appears in documents a and b, "ماه" only in c.
  CHECK(idf.lookup("گربه") == doctest::Approx(std::log(n / 2)).epsilon(1e-12));
  CHECK(idf.lookup("ماه") == doctest::Approx(std::log(n / 1)).epsilon(1e-12));
  CHECK(idf.lookup("ناشناخته") == doctest::Approx(std::log(n)).epsilon(1e-12));

  SUBCASE("tsv round trip keeps values and document count") {
    TempDir tmp;
    idf.save_tsv(tmp.path() / "idf.tsv");
    std::vector<std::string> warnings;
    IdfTable loaded = IdfTable::load_tsv(tmp.path() / "idf.tsv", &warnings);
    CHECK(warnings.empty());
    CHECK(loaded.doc_count == 3);
    CHECK(loaded.lookup("گربه") == doctest::Approx(idf.lookup("گربه")));
    CHECK(loaded.lookup("هیچ") == doctest::Approx(std::log(n)));
  }
  SUBCASE("headerless tables warn and fall back to the max idf") {
    TempDir tmp;
    write_file(tmp.path() / "idf.tsv", "alpha\t0.5\nbeta\t1.25\n");
    std::vector<std::string> warnings;
    IdfTable loaded = IdfTable::load_tsv(tmp.path() / "idf.tsv", &warnings);
    CHECK(warnings.size() == 1);
    CHECK(loaded.lookup("gamma") == doctest::Approx(1.25));
  }
}

TEST_CASE("term-document matrix construction") {
  Corpus corpus = tiny_corpus();
  SUBCASE("tf counts tokens") {
    auto x = build_term_doc_matrix(corpus, Scheme::kTf, StopwordPolicy::kKeep);
    CHECK(x.doc_count == 3);
    CHECK(x.term_count == x.vocab->size());
    int cat = *x.vocab->lookup("گربه");
    auto dense = x.to_dense();
    CHECK(dense[static_cast<std::size_t>(cat) * 3 + 0] == 2.0);  // doc a
    CHECK(dense[static_cast<std::size_t>(cat) * 3 + 1] == 1.0);  // doc b
    CHECK(dense[static_cast<std::size_t>(cat) * 3 + 2] == 0.0);  // doc c
  }
  SUBCASE("binary flattens counts") {
    auto x =
        build_term_doc_matrix(corpus, Scheme::kBinary, StopwordPolicy::kKeep);
    for (const auto& col : x.cols) {
      for (const auto& [_, v] : col) CHECK(v == 1.0);
    }
  }
  SUBCASE("tfidf multiplies counts by idf") {
    auto idf = IdfTable::compute(corpus, StopwordPolicy::kKeep);
    auto x =
        build_term_doc_matrix(corpus, Scheme::kTfidf, StopwordPolicy::kKeep);
    int cat = *x.vocab->lookup("گربه");
    auto dense = x.to_dense();
    CHECK(dense[static_cast<std::size_t>(cat) * 3] ==
          doctest::Approx(2.0 * idf.lookup("گربه")));
  }
  SUBCASE("dense round trip") {
    std::vector<double> d = {1, 0, 2, 0, 0, 3};
    auto x = TermDocMatrix::from_dense(2, 3, d);
    CHECK(x.to_dense() == d);
  }
}

TEST_CASE("sentence vectors and cosine") {
  Corpus corpus = tiny_corpus();
  auto vocab = Vocabulary::build(corpus, StopwordPolicy::kKeep);
  const Sentence& s0 = corpus.topics[0].documents[0].sentences[0];
  const Sentence& s1 = corpus.topics[0].documents[0].sentences[1];

  auto v0 = sentence_term_vector(s0, vocab, Scheme::kTf, StopwordPolicy::kKeep);
  CHECK(v0.space == VectorSpace::kTerm);
  CHECK(v0.dim == vocab.size());
  CHECK(std::is_sorted(v0.terms.begin(), v0.terms.end()));
  CHECK(cosine(v0, v0) == doctest::Approx(1.0).epsilon(1e-12));

  auto v1 = sentence_term_vector(s1, vocab, Scheme::kTf, StopwordPolicy::kKeep);
  double c = cosine(v0, v1);
  CHECK(c > 0.0);  // shares "گربه"
  CHECK(c < 1.0);

  SUBCASE("zero vectors give zero cosine") {
    SentenceVector zero;
    zero.dim = vocab.size();
    CHECK(cosine(v0, zero) == 0.0);
  }
  SUBCASE("mismatched spaces are an error") {
    SentenceVector latent;
    latent.space = VectorSpace::kLsa;
    latent.dim = v0.dim;
    latent.dense.assign(v0.dim, 0.0);
    CHECK_THROWS_AS(cosine(v0, latent), VectorizeError);
  }
  SUBCASE("tfidf without a table is an error") {
    CHECK_THROWS_AS(
        sentence_term_vector(s0, vocab, Scheme::kTfidf, StopwordPolicy::kKeep),
        VectorizeError);
  }
  SUBCASE("known cosine") {
    auto a = TermDocMatrix::from_dense(3, 1, {1, 1, 0});
    auto b = TermDocMatrix::from_dense(3, 1, {1, 0, 1});
    SentenceVector va, vb;
    va.dim = vb.dim = 3;
    va.terms = a.cols[0];
    vb.terms = b.cols[0];
    CHECK(cosine(va, vb) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("svd matches a dense oracle on small matrices") {
  std::mt19937_64 rng(20250819);
  for (int trial = 0; trial < 25; ++trial) {
    int m = 2 + static_cast<int>(rng() % 9);
    int n = 2 + static_cast<int>(rng() % 9);
    auto x = random_matrix(m, n, rng);
    Eigen::MatrixXd a = to_eigen(x);
    if (a.norm() == 0.0) continue;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    int k = 1 + static_cast<int>(rng() % std::min(m, n));

    LsaModel model = truncated_svd(x, k, 7);
    REQUIRE(model.k <= k);
    for (int i = 0; i < model.k; ++i) {
      CHECK(model.sigma[i] ==
            doctest::Approx(svd.singularValues()(i)).epsilon(1e-9));
      if (i > 0) CHECK(model.sigma[i] <= model.sigma[i - 1] + 1e-12);
    }
    // Orthonormal factors.
    for (int i = 0; i < model.k; ++i) {
      for (int j = 0; j < model.k; ++j) {
        double uu = 0.0, vv = 0.0;
        for (int r = 0; r < m; ++r) uu += model.u(r, i) * model.u(r, j);
        for (int r = 0; r < n; ++r) vv += model.v(r, i) * model.v(r, j);
        double want = i == j ? 1.0 : 0.0;
        CHECK(uu == doctest::Approx(want).epsilon(1e-8));
        CHECK(vv == doctest::Approx(want).epsilon(1e-8));
      }
    }
    // Reconstruction is as good as the oracle's rank-k truncation.
    Mat recon = lsa_reconstruction(model);
    double err = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        double d = recon(i, j) - a(i, j);
        err += d * d;
      }
    }
    double oracle_err = 0.0;
    for (int i = model.k; i < svd.singularValues().size(); ++i) {
      oracle_err += svd.singularValues()(i) * svd.singularValues()(i);
    }
    CHECK(std::sqrt(err) <= std::sqrt(oracle_err) + 1e-7);
  }
}

TEST_CASE("svd sign convention and determinism") {
  std::mt19937_64 rng(99);
  auto x = random_matrix(12, 7, rng);
  LsaModel a = truncated_svd(x, 5, 123);
  LsaModel b = truncated_svd(x, 5, 123);
  CHECK(a.u.a == b.u.a);
  CHECK(a.v.a == b.v.a);
  CHECK(a.sigma == b.sigma);
  for (int j = 0; j < a.k; ++j) {
    double best = 0.0;
    for (int i = 0; i < a.u.rows; ++i) {
      if (std::abs(a.u(i, j)) > std::abs(best)) best = a.u(i, j);
    }
    CHECK(best > 0.0);  // largest-magnitude entry is positive
  }
}

TEST_CASE("svd subspace iteration agrees with the direct path") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 5; ++trial) {
    auto x = random_matrix(20, 14, rng, 0.5);
    SvdOptions gram;
    gram.method = SvdOptions::Method::kGram;
    SvdOptions sub;
    sub.method = SvdOptions::Method::kSubspace;
    LsaModel mg = truncated_svd(x, 4, 7, nullptr, gram);
    LsaModel ms = truncated_svd(x, 4, 7, nullptr, sub);
    REQUIRE(mg.k == ms.k);
    for (int i = 0; i < mg.k; ++i) {
      CHECK(mg.sigma[i] == doctest::Approx(ms.sigma[i]).epsilon(1e-8));
    }
    for (int j = 0; j < mg.k; ++j) {
      double dot = 0.0;
      for (int i = 0; i < mg.u.rows; ++i) dot += mg.u(i, j) * ms.u(i, j);
      CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("svd edge cases") {
  SUBCASE("rank-deficient input clamps with a warning") {
    auto x = TermDocMatrix::from_dense(2, 2, {1, 1, 1, 1});
    std::vector<std::string> warnings;
    LsaModel model = truncated_svd(x, 2, 7, &warnings);
    CHECK(model.k == 1);
    CHECK(model.sigma[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(warnings.size() == 1);
  }
  SUBCASE("k beyond the small side clamps with a warning") {
    auto x = TermDocMatrix::from_dense(3, 2, {1, 0, 0, 1, 0, 0});
    std::vector<std::string> warnings;
    LsaModel model = truncated_svd(x, 10, 7, &warnings);
    CHECK(model.k == 2);
    CHECK(!warnings.empty());
  }
  SUBCASE("zero matrices are rejected") {
    auto x = TermDocMatrix::from_dense(2, 2, {0, 0, 0, 0});
    CHECK_THROWS_AS(truncated_svd(x, 1, 7), VectorizeError);
  }
  SUBCASE("non-positive rank is rejected") {
    auto x = TermDocMatrix::from_dense(2, 2, {1, 0, 0, 1});
    CHECK_THROWS_AS(truncated_svd(x, 0, 7), VectorizeError);
  }
}

TEST_CASE("projection recovers document coordinates") {
  std::mt19937_64 rng(31337);
  auto x = random_matrix(10, 6, rng, 0.8);
  int k = std::min(10, 6);
  LsaModel model = truncated_svd(x, k, 7);
  // With the full rank kept, projecting column d of X yields row d of V.
  for (int d = 0; d < x.doc_count; ++d) {
    SentenceVector col;
    col.space = VectorSpace::kTerm;
    col.dim = x.term_count;
    col.terms = x.cols[d];
    SentenceVector proj = project_sentence(model, col);
    REQUIRE(proj.dim == model.k);
    for (int j = 0; j < model.k; ++j) {
      CHECK(proj.dense[j] == doctest::Approx(model.v(d, j)).epsilon(1e-8));
    }
  }
  SUBCASE("latent input is rejected") {
    SentenceVector latent;
    latent.space = VectorSpace::kLsa;
    latent.dim = model.k;
    latent.dense.assign(model.k, 0.0);
    CHECK_THROWS_AS(project_sentence(model, latent), VectorizeError);
  }
  SUBCASE("dimension mismatch is rejected") {
    SentenceVector bad;
    bad.dim = x.term_count + 1;
    CHECK_THROWS_AS(project_sentence(model, bad), VectorizeError);
  }
}

TEST_CASE("reconstruction error shrinks as rank grows") {
  std::mt19937_64 rng(5150);
  auto x = random_matrix(9, 9, rng, 0.9);
  Eigen::MatrixXd a = to_eigen(x);
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 6; ++k) {
    LsaModel model = truncated_svd(x, k, 7);
    Mat recon = lsa_reconstruction(model);
    double err = 0.0;
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) {
        double d = recon(i, j) - a(i, j);
        err += d * d;
      }
    }
    CHECK(err <= prev + 1e-9);
    prev = err;
  }
}

TEST_CASE("per-item vector assembly") {
  Corpus corpus = tiny_corpus();
  auto vocab = Vocabulary::build(corpus, StopwordPolicy::kRemove);
  Item item = make_item(corpus.topics[0].documents[0]);

  VectorConfig term_cfg;
  term_cfg.space = VectorSpace::kTerm;
  term_cfg.scheme = Scheme::kBinary;
  term_cfg.policy = StopwordPolicy::kRemove;
  auto vecs = make_sentence_vectors(item, vocab, term_cfg, nullptr, nullptr);
  REQUIRE(static_cast<int>(vecs.size()) == item.size());
  for (int i = 0; i < item.size(); ++i) {
    auto direct = sentence_term_vector(*item.sentences[i], vocab,
                                       Scheme::kBinary, StopwordPolicy::kRemove);
    CHECK(vecs[i].terms == direct.terms);
  }

  SUBCASE("latent space requires a model") {
    VectorConfig lsa_cfg;
    lsa_cfg.space = VectorSpace::kLsa;
    CHECK_THROWS_AS(make_sentence_vectors(item, vocab, lsa_cfg, nullptr, nullptr),
                    VectorizeError);
  }
  SUBCASE("latent vectors have the model dimensionality") {
    auto x = build_term_doc_matrix(corpus, Scheme::kTf, StopwordPolicy::kRemove);
    LsaModel model = truncated_svd(x, 2, 7);
    VectorConfig lsa_cfg;
    lsa_cfg.space = VectorSpace::kLsa;
    lsa_cfg.policy = StopwordPolicy::kRemove;
    auto latent = make_sentence_vectors(item, vocab, lsa_cfg, nullptr, &model);
    for (const auto& v : latent) {
      CHECK(v.space == VectorSpace::kLsa);
      CHECK(v.dim == model.k);
    }
  }
}
