#include "extsum/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "extsum/corpus.hpp"
#include "extsum/evalstats.hpp"
#include "extsum/utf8.hpp"
#include "extsum/graphrank.hpp"
#include "extsum/hash.hpp"
#include "extsum/parsumist.hpp"
#include "extsum/rouge.hpp"
#include "extsum/vectorize.hpp"

namespace extsum {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string hex64(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Options shared across subcommands; values may arrive from a JSON config
// file, with command-line flags taking precedence.

struct Options {
  std::string corpus;
  std::string mode = "doc";
  std::string systems = "grid,baselines";
  std::string scheme = "tf";
  std::string stopwords, pronouns, proper_nouns, charmap;
  int lsa_k = 200;
  double ratio = 0.25;
  double threshold = 0.1;
  uint64_t seed = 42;
  bool decode_ncr = false;
  bool invert_distances = false;
  std::string idf_table;
  std::string out;
  std::string gold;
  std::string rouge_n = "1,2,3";
  std::string run;
  std::string ratings;
  std::string doc_counts;
};

void apply_config_json(const std::string& path, Options& opt) {
  json cfg;
  try {
    cfg = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    try {
      if (key == "corpus") opt.corpus = value.get<std::string>();
      else if (key == "mode") opt.mode = value.get<std::string>();
      else if (key == "systems") opt.systems = value.get<std::string>();
      else if (key == "scheme") opt.scheme = value.get<std::string>();
      else if (key == "stopwords") opt.stopwords = value.get<std::string>();
      else if (key == "pronouns") opt.pronouns = value.get<std::string>();
      else if (key == "proper-nouns") opt.proper_nouns = value.get<std::string>();
      else if (key == "charmap") opt.charmap = value.get<std::string>();
      else if (key == "lsa-k") opt.lsa_k = value.get<int>();
      else if (key == "ratio") opt.ratio = value.get<double>();
      else if (key == "threshold") opt.threshold = value.get<double>();
      else if (key == "seed") opt.seed = value.get<uint64_t>();
      else if (key == "decode-ncr") opt.decode_ncr = value.get<bool>();
      else if (key == "invert-distances") opt.invert_distances = value.get<bool>();
      else if (key == "idf-table") opt.idf_table = value.get<std::string>();
      else if (key == "out") opt.out = value.get<std::string>();
      else if (key == "gold") opt.gold = value.get<std::string>();
      else if (key == "rouge-n") opt.rouge_n = value.get<std::string>();
      else if (key == "run") opt.run = value.get<std::string>();
      else if (key == "ratings") opt.ratings = value.get<std::string>();
      else if (key == "doc-counts") opt.doc_counts = value.get<std::string>();
      else throw UsageError("config: unknown key \"" + key + "\"");
    } catch (const json::type_error&) {
      throw UsageError("config: bad value type for \"" + key + "\"");
    }
  }
}

// ---------------------------------------------------------------------------
// System specifications

struct SystemSpec {
  enum class Kind { kParsumist, kCentrality, kBaseline };
  Kind kind = Kind::kBaseline;
  std::string id;
  double threshold = 0.1;              // parsumist
  Measure measure = Measure::kStr;     // centrality
  VectorConfig vectors;                // centrality
  BaselineKind baseline = BaselineKind::kFirst;
};

SystemSpec parse_system_id(const std::string& id, const Options& opt) {
  SystemSpec spec;
  spec.id = id;
  auto parts = [&] {
    std::vector<std::string> p;
    std::string cur;
    for (char c : id) {
      if (c == '-') {
        p.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    p.push_back(cur);
    return p;
  }();
  if (parts.empty()) throw UsageError("empty system id");
  try {
    if (parts[0] == "baseline" && parts.size() == 2) {
      spec.kind = SystemSpec::Kind::kBaseline;
      spec.baseline = baseline_from_string(parts[1]);
      return spec;
    }
    if (parts[0] == "parsumist" && parts.size() == 2 && parts[1].size() > 1 &&
        parts[1][0] == 't') {
      spec.kind = SystemSpec::Kind::kParsumist;
      spec.threshold = std::stod(parts[1].substr(1));
      spec.id = "parsumist-t" + fmt_g(spec.threshold);
      return spec;
    }
    if (parts[0] == "centrality" && (parts.size() == 2 || parts.size() == 4)) {
      spec.kind = SystemSpec::Kind::kCentrality;
      spec.measure = measure_from_string(parts[1]);
      if (parts.size() == 4) {
        if (parts[2] == "lsa") {
          spec.vectors.space = VectorSpace::kLsa;
        } else {
          spec.vectors.space = VectorSpace::kTerm;
          spec.vectors.scheme = scheme_from_string(parts[2]);
        }
        spec.vectors.policy = policy_from_string(parts[3]);
      } else {
        spec.vectors.space = VectorSpace::kTerm;
        spec.vectors.scheme = scheme_from_string(opt.scheme);
        spec.vectors.policy = StopwordPolicy::kRemove;
      }
      spec.id = centrality_system_id(spec.measure, spec.vectors);
      return spec;
    }
  } catch (const std::exception&) {
    // a name inside the id failed to convert: same complaint as below
  }
  throw UsageError("unrecognized system id: " + id);
}

std::vector<SystemSpec> expand_systems(const std::string& csv,
                                       const Options& opt) {
  std::vector<SystemSpec> specs;
  std::set<std::string> seen;
  auto add = [&](SystemSpec spec) {
    if (seen.insert(spec.id).second) specs.push_back(std::move(spec));
  };
  for (const auto& token : split_csv(csv)) {
    if (token == "grid") {
      for (Measure m : all_measures()) {
        for (Scheme s : {Scheme::kTf, Scheme::kTfidf, Scheme::kBinary}) {
          for (StopwordPolicy p :
               {StopwordPolicy::kKeep, StopwordPolicy::kRemove}) {
            SystemSpec spec;
            spec.kind = SystemSpec::Kind::kCentrality;
            spec.measure = m;
            spec.vectors.space = VectorSpace::kTerm;
            spec.vectors.scheme = s;
            spec.vectors.policy = p;
            spec.id = centrality_system_id(m, spec.vectors);
            add(std::move(spec));
          }
        }
      }
    } else if (token == "grid-lsa") {
      for (Measure m : all_measures()) {
        for (StopwordPolicy p :
             {StopwordPolicy::kKeep, StopwordPolicy::kRemove}) {
          SystemSpec spec;
          spec.kind = SystemSpec::Kind::kCentrality;
          spec.measure = m;
          spec.vectors.space = VectorSpace::kLsa;
          spec.vectors.policy = p;
          spec.id = centrality_system_id(m, spec.vectors);
          add(std::move(spec));
        }
      }
    } else if (token == "baselines") {
      for (BaselineKind k : {BaselineKind::kFirst, BaselineKind::kLast,
                             BaselineKind::kRandom}) {
        SystemSpec spec;
        spec.kind = SystemSpec::Kind::kBaseline;
        spec.baseline = k;
        spec.id = std::string("baseline-") + to_string(k);
        add(std::move(spec));
      }
    } else {
      add(parse_system_id(token, opt));
    }
  }
  if (specs.empty()) throw UsageError("no systems selected");
  return specs;
}

// ---------------------------------------------------------------------------
// summarize

struct RunContext {
  const Corpus* corpus = nullptr;
  const Options* opt = nullptr;
  std::vector<std::string> warnings;

  std::map<int, std::shared_ptr<Vocabulary>> vocabs;  // by policy
  std::map<int, IdfTable> idf_tables;                 // by policy
  std::map<int, LsaModel> lsa_models;                 // by policy
  std::optional<Quartiles> quartiles;
  std::optional<IdfTable> external_idf;

  const Vocabulary& vocab(StopwordPolicy p) {
    int key = static_cast<int>(p);
    auto it = vocabs.find(key);
    if (it == vocabs.end()) {
      it = vocabs
               .emplace(key, std::make_shared<Vocabulary>(
                                 Vocabulary::build(*corpus, p)))
               .first;
    }
    return *it->second;
  }

  const IdfTable& idf(StopwordPolicy p) {
    if (external_idf) return *external_idf;
    int key = static_cast<int>(p);
    auto it = idf_tables.find(key);
    if (it == idf_tables.end()) {
      it = idf_tables.emplace(key, IdfTable::compute(*corpus, p)).first;
    }
    return it->second;
  }

  const LsaModel& lsa(StopwordPolicy p) {
    int key = static_cast<int>(p);
    auto it = lsa_models.find(key);
    if (it == lsa_models.end()) {
      auto x = build_term_doc_matrix(*corpus, Scheme::kTf, p);
      auto model = truncated_svd(x, opt->lsa_k, opt->seed, &warnings);
      it = lsa_models.emplace(key, std::move(model)).first;
    }
    return it->second;
  }

  const Quartiles& length_quartiles() {
    if (!quartiles) quartiles = corpus_length_quartiles(*corpus);
    return *quartiles;
  }
};

struct VectorKey {
  int space, scheme, policy;
  bool operator<(const VectorKey& o) const {
    return std::tie(space, scheme, policy) <
           std::tie(o.space, o.scheme, o.policy);
  }
};

Summary run_system(const SystemSpec& spec, const Item& item, RunContext& ctx,
                   std::map<VectorKey, std::vector<SentenceVector>>& cache) {
  const Options& opt = *ctx.opt;
  switch (spec.kind) {
    case SystemSpec::Kind::kBaseline:
      return baseline_summary(item, spec.baseline, opt.ratio, opt.seed);
    case SystemSpec::Kind::kParsumist: {
      ScoreConfig cfg;
      cfg.cosine_threshold = spec.threshold;
      const StopwordPolicy policy = StopwordPolicy::kRemove;
      return summarize_parsumist(item, ctx.lsa(policy), ctx.vocab(policy),
                                 policy, ctx.length_quartiles(),
                                 ctx.corpus->lexicons, cfg);
    }
    case SystemSpec::Kind::kCentrality: {
      VectorKey key{static_cast<int>(spec.vectors.space),
                    static_cast<int>(spec.vectors.scheme),
                    static_cast<int>(spec.vectors.policy)};
      if (spec.vectors.space == VectorSpace::kLsa) key.scheme = -1;
      auto it = cache.find(key);
      if (it == cache.end()) {
        const Vocabulary& vocab = ctx.vocab(spec.vectors.policy);
        const IdfTable* idf = spec.vectors.scheme == Scheme::kTfidf &&
                                      spec.vectors.space == VectorSpace::kTerm
                                  ? &ctx.idf(spec.vectors.policy)
                                  : nullptr;
        const LsaModel* model = spec.vectors.space == VectorSpace::kLsa
                                    ? &ctx.lsa(spec.vectors.policy)
                                    : nullptr;
        it = cache
                 .emplace(key, make_sentence_vectors(item, vocab, spec.vectors,
                                                     idf, model))
                 .first;
      }
      CentralityConfig cfg;
      cfg.measure = spec.measure;
      cfg.vectors = spec.vectors;
      cfg.ratio = opt.ratio;
      cfg.invert_distances = opt.invert_distances;
      return summarize_centrality(item, it->second, cfg);
    }
  }
  throw std::logic_error("unreachable system kind");
}

uint64_t corpus_checksum(const Corpus& corpus) {
  uint64_t h = fnv1a64("");
  for (const auto& topic : corpus.topics) {
    for (const auto& doc : topic.documents) {
      h = fnv1a64(doc.id, h);
      h = fnv1a64(std::string(1, '\0'), h);
      h = fnv1a64(doc.title, h);
      for (const auto& s : doc.sentences) {
        h = fnv1a64(std::string(1, '\0'), h);
        h = fnv1a64(s.text, h);
      }
      h = fnv1a64(std::string(1, '\1'), h);
    }
  }
  return h;
}

uint64_t config_hash(const Options& opt, const std::vector<SystemSpec>& specs) {
  json j;
  j["mode"] = opt.mode;
  j["scheme"] = opt.scheme;
  j["lsa_k"] = opt.lsa_k;
  j["ratio"] = opt.ratio;
  j["threshold"] = opt.threshold;
  j["seed"] = opt.seed;
  j["decode_ncr"] = opt.decode_ncr;
  j["invert_distances"] = opt.invert_distances;
  json ids = json::array();
  for (const auto& s : specs) ids.push_back(s.id);
  j["systems"] = ids;
  auto file_hash = [&](const std::string& path) -> std::string {
    return path.empty() ? "" : hex64(fnv1a64(read_text_file(path)));
  };
  j["stopwords"] = file_hash(opt.stopwords);
  j["pronouns"] = file_hash(opt.pronouns);
  j["proper_nouns"] = file_hash(opt.proper_nouns);
  j["charmap"] = file_hash(opt.charmap);
  j["idf_table"] = file_hash(opt.idf_table);
  return fnv1a64(j.dump());
}

int cmd_summarize(const Options& opt) {
  if (opt.corpus.empty()) throw UsageError("summarize needs --corpus");
  if (opt.out.empty()) throw UsageError("summarize needs --out");
  if (opt.mode != "doc" && opt.mode != "topic") {
    throw UsageError("--mode must be doc or topic");
  }
  if (opt.ratio <= 0.0 || opt.ratio > 1.0) {
    throw UsageError("--ratio must lie in (0, 1]");
  }
  auto specs = expand_systems(opt.systems, opt);

  LoadOptions load;
  load.decode_ncr = opt.decode_ncr;
  if (!opt.stopwords.empty()) load.stopword_path = opt.stopwords;
  if (!opt.pronouns.empty()) load.pronoun_path = opt.pronouns;
  if (!opt.proper_nouns.empty()) load.proper_noun_path = opt.proper_nouns;
  if (!opt.charmap.empty()) load.charmap_path = opt.charmap;
  Corpus corpus = load_corpus(opt.corpus, load);
  for (const auto& w : corpus.warnings) std::cerr << "warning: " << w << "\n";

  RunContext ctx;
  ctx.corpus = &corpus;
  ctx.opt = &opt;
  if (!opt.idf_table.empty()) {
    ctx.external_idf = IdfTable::load_tsv(opt.idf_table, &ctx.warnings);
  }

  std::vector<Item> items;
  if (opt.mode == "doc") {
    for (const auto& topic : corpus.topics) {
      for (const auto& doc : topic.documents) items.push_back(make_item(doc));
    }
  } else {
    for (const auto& topic : corpus.topics) items.push_back(make_item(topic));
  }

  json manifest;
  manifest["tool"] = std::string("extsum ") + kVersion;
  manifest["mode"] = opt.mode;
  manifest["seed"] = opt.seed;
  manifest["ratio"] = opt.ratio;
  manifest["config_hash"] = hex64(config_hash(opt, specs));
  manifest["corpus_checksum"] = hex64(corpus_checksum(corpus));
  json files = json::object();
  json system_ids = json::array();
  for (const auto& s : specs) system_ids.push_back(s.id);
  manifest["systems"] = system_ids;
  json item_ids = json::array();
  for (const auto& item : items) item_ids.push_back(item.id);
  manifest["items"] = item_ids;

  const fs::path out_root = opt.out;
  for (const auto& item : items) {
    std::map<VectorKey, std::vector<SentenceVector>> cache;
    for (const auto& spec : specs) {
      Summary s = run_system(spec, item, ctx, cache);
      std::string rel = spec.id + "/" + item.id + ".txt";
      std::string body = s.text();
      if (!body.empty()) body.push_back('\n');
      write_text_file(out_root / rel, body);
      files[rel] = hex64(fnv1a64(body));

      json side;
      side["system"] = s.system_id;
      side["item"] = s.item_id;
      side["realized_ratio"] = s.realized_ratio;
      json refs = json::array();
      for (const auto& r : s.refs) {
        refs.push_back({{"doc", r.doc_id}, {"position", r.position}});
      }
      side["sentences"] = refs;
      json params = json::object();
      for (const auto& [k, v] : s.params) params[k] = v;
      side["params"] = params;
      write_text_file(out_root / (spec.id + "/" + item.id + ".json"),
                      side.dump(2) + "\n");
    }
  }
  manifest["files"] = files;
  for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << "\n";
  write_text_file(out_root / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << files.size() << " summaries for " << items.size()
            << " items under " << out_root.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

int cmd_evaluate(const Options& opt) {
  if (opt.run.empty()) throw UsageError("evaluate needs --run");
  if (opt.gold.empty()) throw UsageError("evaluate needs --gold");
  std::vector<int> orders;
  for (const auto& tok : split_csv(opt.rouge_n)) {
    int n = std::stoi(tok);
    if (n < 1) throw UsageError("--rouge-n orders must be positive");
    orders.push_back(n);
  }
  if (orders.empty()) throw UsageError("--rouge-n lists no orders");

  const fs::path run_root = opt.run;
  std::vector<PeerSummary> peers;
  const fs::path manifest_path = run_root / "manifest.json";
  if (fs::exists(manifest_path)) {
    json manifest = json::parse(read_text_file(manifest_path));
    for (const auto& [rel, _] : manifest.at("files").items()) {
      auto slash = rel.find('/');
      if (slash == std::string::npos || rel.size() < slash + 5) continue;
      PeerSummary p;
      p.system_id = rel.substr(0, slash);
      p.item_id = rel.substr(slash + 1, rel.size() - slash - 5);  // drop .txt
      p.text = read_text_file(run_root / rel);
      peers.push_back(std::move(p));
    }
  } else {
    for (const auto& entry : fs::recursive_directory_iterator(run_root)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".txt") {
        continue;
      }
      fs::path rel = fs::relative(entry.path(), run_root);
      auto it = rel.begin();
      if (it == rel.end()) continue;
      PeerSummary p;
      p.system_id = it->string();
      fs::path rest;
      for (++it; it != rel.end(); ++it) rest /= *it;
      if (rest.empty()) continue;
      rest.replace_extension();
      p.item_id = rest.generic_string();
      p.text = read_text_file(entry.path());
      peers.push_back(std::move(p));
    }
    std::sort(peers.begin(), peers.end(),
              [](const PeerSummary& a, const PeerSummary& b) {
                return std::tie(a.system_id, a.item_id) <
                       std::tie(b.system_id, b.item_id);
              });
  }
  if (peers.empty()) {
    throw std::runtime_error("no peer summaries found under " +
                             run_root.string());
  }

  RougeReport report = evaluate_run(peers, opt.gold, orders);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  std::string tsv = format_report_tsv(report);
  if (opt.out.empty()) {
    std::cout << tsv;
  } else {
    write_text_file(opt.out, tsv);
    std::cout << "wrote " << report.rows.size() << " rows to " << opt.out
              << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// stats

void print_stat_line(std::ostream& os, const StatResult& r) {
  os << r.test << '\t';
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", r.statistic);
  os << buf;
  if (r.p_value) {
    std::snprintf(buf, sizeof(buf), "%.6g", *r.p_value);
    os << "\tp=" << buf;
  }
  if (r.df1 && r.df2) {
    os << "\tdf=" << *r.df1 << "," << *r.df2;
  } else if (r.df1) {
    os << "\tdf=" << *r.df1;
  }
  if (r.p_value) os << (r.significant_at_95 ? "\tsig" : "\tns");
  if (r.exact_separation) os << "\texact";
  os << '\n';
}

int cmd_stats(const Options& opt) {
  if (opt.ratings.empty()) throw UsageError("stats needs --ratings");
  RatingMatrix ratings = RatingMatrix::load_tsv(opt.ratings);
  auto [z, scale] = zscore_standardize(ratings);

  std::ostringstream os;
  os << "# judges\n";
  os << "judge\tmean\tsd\n";
  char buf[64];
  for (std::size_t j = 0; j < ratings.judges.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.6f\t%.6f", scale.mean[j], scale.sd[j]);
    os << ratings.judges[j] << '\t' << buf << '\n';
  }

  const int nj = static_cast<int>(ratings.judges.size());
  for (Agreement kind : {Agreement::kCosine, Agreement::kPearson,
                         Agreement::kSpearman, Agreement::kKendall}) {
    os << "\n# agreement " << to_string(kind) << "\n";
    os << "judge_a\tjudge_b\tstatistic\tp_value\n";
    for (int a = 0; a < nj; ++a) {
      for (int b = a + 1; b < nj; ++b) {
        std::vector<double> u(ratings.ratings.cols), v(ratings.ratings.cols);
        for (int c = 0; c < ratings.ratings.cols; ++c) {
          u[c] = z(a, c);
          v[c] = z(b, c);
        }
        StatResult r = agreement(u, v, kind);
        std::snprintf(buf, sizeof(buf), "%.6f", r.statistic);
        os << ratings.judges[a] << '\t' << ratings.judges[b] << '\t' << buf;
        if (r.p_value) {
          std::snprintf(buf, sizeof(buf), "%.6g", *r.p_value);
          os << '\t' << buf;
        } else {
          os << "\t-";
        }
        os << '\n';
      }
    }
  }

  ZTensor tensor = ZTensor::build(ratings, z);
  const int ns = static_cast<int>(tensor.systems.size());
  const int nt = static_cast<int>(tensor.topics.size());
  const int njz = static_cast<int>(tensor.judges.size());

  // Condition = system; subject = (topic, judge) cell.
  Mat anova_data(ns, nt * njz);
  for (int s = 0; s < ns; ++s) {
    for (int t = 0; t < nt; ++t) {
      for (int j = 0; j < njz; ++j) {
        anova_data(s, t * njz + j) = tensor.at(t, s, j);
      }
    }
  }
  os << "\n# anova systems\n";
  os << "test\tF\tp\tdf\tcall\n";
  if (ns >= 2) {
    print_stat_line(os, rm_anova(anova_data));
  } else {
    os << "rm_anova\t-\t(needs at least two systems)\n";
  }

  os << "\n# pairwise system_a system_b (one-tailed, Bonferroni family)\n";
  os << "system_a\tsystem_b\tt\tp_value\tsignificant\n";
  const int family = ns >= 2 ? ns * (ns - 1) / 2 : 1;
  for (int a = 0; a < ns; ++a) {
    for (int b = a + 1; b < ns; ++b) {
      std::vector<double> x(nt * njz), y(nt * njz);
      for (int t = 0; t < nt; ++t) {
        for (int j = 0; j < njz; ++j) {
          x[t * njz + j] = tensor.at(t, a, j);
          y[t * njz + j] = tensor.at(t, b, j);
        }
      }
      StatResult r = paired_ttest(x, y, 1, family);
      std::snprintf(buf, sizeof(buf), "%.6f", r.statistic);
      os << tensor.systems[a] << '\t' << tensor.systems[b] << '\t' << buf;
      std::snprintf(buf, sizeof(buf), "%.6g", *r.p_value);
      os << '\t' << buf << '\t' << (r.significant_at_95 ? "yes" : "no")
         << '\n';
    }
  }

  SummarizabilityResult sres = summarizability(tensor);
  os << "\n# system means (standardized)\n";
  os << "system\tmean_z\n";
  for (int s = 0; s < ns; ++s) {
    std::snprintf(buf, sizeof(buf), "%.6f", sres.system_means[s]);
    os << sres.systems[s] << '\t' << buf << '\n';
  }

  os << "\n# system cosine similarity\n";
  os << "system";
  for (int s = 0; s < ns; ++s) os << '\t' << sres.systems[s];
  os << '\n';
  for (int a = 0; a < ns; ++a) {
    os << sres.systems[a];
    for (int b = 0; b < ns; ++b) {
      std::snprintf(buf, sizeof(buf), "%.6f", sres.system_cosines(a, b));
      os << '\t' << buf;
    }
    os << '\n';
  }

  os << "\n# summarizability (descending)\n";
  os << "topic\tmean_z\n";
  for (std::size_t t = 0; t < sres.topics.size(); ++t) {
    std::snprintf(buf, sizeof(buf), "%.6f", sres.topic_scores[t]);
    os << sres.topics[t] << '\t' << buf << '\n';
  }

  if (!opt.doc_counts.empty()) {
    std::ifstream in(opt.doc_counts);
    if (!in) {
      throw std::runtime_error("cannot open doc counts " + opt.doc_counts);
    }
    std::map<std::string, double> counts;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      counts[line.substr(0, tab)] = std::stod(line.substr(tab + 1));
    }
    std::vector<double> scores, sizes;
    for (std::size_t t = 0; t < sres.topics.size(); ++t) {
      auto it = counts.find(sres.topics[t]);
      if (it != counts.end()) {
        scores.push_back(sres.topic_scores[t]);
        sizes.push_back(it->second);
      }
    }
    os << "\n# summarizability vs document count\n";
    if (scores.size() >= 3) {
      StatResult r = agreement(scores, sizes, Agreement::kPearson);
      os << "pearson\t";
      std::snprintf(buf, sizeof(buf), "%.6f", r.statistic);
      os << buf;
      if (r.p_value) {
        std::snprintf(buf, sizeof(buf), "%.6g", *r.p_value);
        os << "\tp=" << buf;
      }
      os << '\n';
    } else {
      os << "(needs at least three matched topics)\n";
    }
  }

  if (opt.out.empty()) {
    std::cout << os.str();
  } else {
    write_text_file(opt.out, os.str());
    std::cout << "wrote statistics to " << opt.out << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// inspect

int cmd_inspect(const Options& opt) {
  if (opt.corpus.empty()) throw UsageError("inspect needs --corpus");
  LoadOptions load;
  load.decode_ncr = opt.decode_ncr;
  if (!opt.stopwords.empty()) load.stopword_path = opt.stopwords;
  if (!opt.pronouns.empty()) load.pronoun_path = opt.pronouns;
  if (!opt.proper_nouns.empty()) load.proper_noun_path = opt.proper_nouns;
  if (!opt.charmap.empty()) load.charmap_path = opt.charmap;
  Corpus corpus = load_corpus(opt.corpus, load);

  int sentences = 0, tokens = 0;
  for (const auto& t : corpus.topics) {
    for (const auto& d : t.documents) {
      sentences += static_cast<int>(d.sentences.size());
      for (const auto& s : d.sentences) tokens += s.length();
    }
  }
  std::cout << "topics\t" << corpus.topics.size() << "\n";
  std::cout << "documents\t" << corpus.document_count() << "\n";
  std::cout << "sentences\t" << sentences << "\n";
  std::cout << "tokens\t" << tokens << "\n";
  auto vocab_keep = Vocabulary::build(corpus, StopwordPolicy::kKeep);
  auto vocab_rm = Vocabulary::build(corpus, StopwordPolicy::kRemove);
  std::cout << "vocabulary\t" << vocab_keep.size() << "\n";
  std::cout << "vocabulary_no_stopwords\t" << vocab_rm.size() << "\n";
  if (sentences > 0) {
    Quartiles q = corpus_length_quartiles(corpus);
    std::cout << "length_q1\t" << q.q1 << "\n";
    std::cout << "length_q3\t" << q.q3 << "\n";
  }
  std::cout << "corpus_checksum\t" << hex64(corpus_checksum(corpus)) << "\n";
  for (const auto& t : corpus.topics) {
    for (const auto& d : t.documents) {
      std::cout << "document\t" << d.id << "\t" << d.sentences.size() << "\n";
    }
  }
  for (const auto& w : corpus.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

}  // namespace

// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args) {
  Options opt;
  std::string config_path;
  // The config file has to be applied before flag parsing so that flags win.
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }

  CLI::App app{"Persian extractive summarization toolkit"};
  app.set_version_flag("--version", std::string("extsum ") + kVersion);
  app.require_subcommand(1);
  std::string config_dummy;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_dummy, "JSON config file");
  };
  auto add_corpus_flags = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", opt.corpus, "corpus root directory");
    cmd->add_flag("--decode-ncr", opt.decode_ncr,
                  "decode numeric character references while loading");
    cmd->add_option("--stopwords", opt.stopwords, "stopword lexicon");
    cmd->add_option("--pronouns", opt.pronouns, "pronoun lexicon");
    cmd->add_option("--proper-nouns", opt.proper_nouns, "proper-noun lexicon");
    cmd->add_option("--charmap", opt.charmap, "character map override");
  };

  auto* sum = app.add_subcommand("summarize", "produce summaries");
  add_common(sum);
  add_corpus_flags(sum);
  sum->add_option("--mode", opt.mode, "item granularity: doc or topic");
  sum->add_option("--systems", opt.systems,
                  "comma list of system ids, 'grid', 'grid-lsa', 'baselines'");
  sum->add_option("--scheme", opt.scheme,
                  "term weighting for shorthand system ids");
  sum->add_option("--lsa-k", opt.lsa_k, "latent dimensionality");
  sum->add_option("--ratio", opt.ratio, "compression ratio in (0, 1]");
  sum->add_option("--threshold", opt.threshold,
                  "redundancy cosine threshold (parsumist shorthand)");
  sum->add_option("--seed", opt.seed, "random seed");
  sum->add_option("--idf-table", opt.idf_table, "external idf TSV");
  sum->add_option("--out", opt.out, "output directory");
  sum->add_flag("--invert-distances", opt.invert_distances,
                "path lengths use 1 - w instead of w");

  auto* eval = app.add_subcommand("evaluate", "score a run against gold");
  add_common(eval);
  eval->add_option("--run", opt.run, "summarize output directory");
  eval->add_option("--gold", opt.gold, "reference summaries root");
  eval->add_option("--rouge-n", opt.rouge_n, "comma list of n-gram orders");
  eval->add_option("--out", opt.out, "report TSV path (stdout when absent)");

  auto* stats = app.add_subcommand("stats", "human-rating statistics");
  add_common(stats);
  stats->add_option("--ratings", opt.ratings,
                    "TSV: judge topic system rating");
  stats->add_option("--doc-counts", opt.doc_counts,
                    "TSV topic<TAB>count for the size correlation");
  stats->add_option("--out", opt.out, "report path (stdout when absent)");

  auto* inspect = app.add_subcommand("inspect", "describe a corpus");
  add_common(inspect);
  add_corpus_flags(inspect);

  try {
    if (!config_path.empty()) apply_config_json(config_path, opt);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::vector<const char*> argv;
  argv.push_back("extsum");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sum->parsed()) return cmd_summarize(opt);
    if (eval->parsed()) return cmd_evaluate(opt);
    if (stats->parsed()) return cmd_stats(opt);
    if (inspect->parsed()) return cmd_inspect(opt);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CorpusError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const VectorizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const GraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const RougeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const StatsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Utf8Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace extsum
