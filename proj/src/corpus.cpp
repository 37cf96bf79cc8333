#include "extsum/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "extsum/utf8.hpp"

namespace extsum {

namespace {

struct CharMapEntry {
  uint32_t from, to;
};
struct ComposeEntry {
  uint32_t a, b, composed;
};

#include "charmap_tables.inc"

const std::unordered_map<uint64_t, char32_t>& compose_index() {
  static const auto* index = [] {
    auto* m = new std::unordered_map<uint64_t, char32_t>();
    for (const auto& e : kComposeTable) {
      (*m)[(uint64_t(e.a) << 32) | e.b] = static_cast<char32_t>(e.composed);
    }
    return m;
  }();
  return *index;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw CorpusError("read error on " + path.string());
  return ss.str();
}

std::string trim_ws(const std::string& s) {
  auto cps = decode_utf8(s);
  std::size_t b = 0, e = cps.size();
  while (b < e && is_space_cp(cps[b].cp)) ++b;
  while (e > b && is_space_cp(cps[e - 1].cp)) --e;
  if (b == e) return {};
  std::size_t from = cps[b].offset;
  std::size_t to = cps[e - 1].offset + cps[e - 1].width;
  return s.substr(from, to - from);
}

bool is_terminator(char32_t cp) {
  return cp == '.' || cp == '!' || cp == '?' || cp == 0x061F || cp == 0x061B;
}

bool in_set(char32_t cp, const char32_t* begin, const char32_t* end) {
  return std::find(begin, end, cp) != end;
}

const char32_t kQuoteChars[] = {0x22,   0x27,   0xAB,   0xBB,   0x2018, 0x2019,
                                0x201A, 0x201C, 0x201D, 0x2039, 0x203A};
const char32_t kPercentChars[] = {0x25, 0x066A};
const char32_t kParenChars[] = {0x28, 0x29};

}  // namespace

// ---------------------------------------------------------------------------
// Lexicons

Lexicon load_lexicon(const std::filesystem::path& path, LexiconKind kind) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open lexicon " + path.string());
  Lexicon lex;
  lex.kind = kind;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim_ws(normalize_text(line));
    if (!line.empty()) lex.entries.insert(line);
  }
  return lex;
}

// ---------------------------------------------------------------------------
// Numeric character references

NcrResult decode_ncr(const std::string& text) {
  NcrResult res;
  res.text.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&' || i + 1 >= text.size() || text[i + 1] != '#') {
      res.text.push_back(text[i]);
      ++i;
      continue;
    }
    std::size_t j = i + 2;
    bool hex = false;
    if (j < text.size() && (text[j] == 'x' || text[j] == 'X')) {
      hex = true;
      ++j;
    }
    uint64_t value = 0;
    std::size_t digits = 0;
    while (j < text.size()) {
      char c = text[j];
      int d;
      if (c >= '0' && c <= '9') {
        d = c - '0';
      } else if (hex && c >= 'a' && c <= 'f') {
        d = c - 'a' + 10;
      } else if (hex && c >= 'A' && c <= 'F') {
        d = c - 'A' + 10;
      } else {
        break;
      }
      value = value * (hex ? 16 : 10) + d;
      if (value > 0x7FFFFFFF) value = 0x7FFFFFFF;  // saturate, stays invalid
      ++digits;
      ++j;
    }
    bool closed = j < text.size() && text[j] == ';';
    if (digits == 0 || !closed) {
      res.warnings.push_back("malformed numeric character reference at byte " +
                             std::to_string(i));
      res.text.push_back(text[i]);
      ++i;
      continue;
    }
    if (value > 0x10FFFF || (value >= 0xD800 && value <= 0xDFFF)) {
      res.warnings.push_back(
          "numeric character reference to invalid scalar at byte " +
          std::to_string(i));
      res.text.append(text, i, j + 1 - i);
      i = j + 1;
      continue;
    }
    append_utf8(res.text, static_cast<char32_t>(value));
    i = j + 1;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Character map and normalization

const CharMap& CharMap::defaults() {
  static const CharMap* instance = [] {
    auto* m = new CharMap();
    for (const auto& e : kDefaultCharMap) {
      m->map[static_cast<char32_t>(e.from)] = static_cast<char32_t>(e.to);
    }
    return m;
  }();
  return *instance;
}

CharMap CharMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open character map " + path.string());
  CharMap cmap;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string from, to;
    if (!(ss >> from)) continue;
    if (!(ss >> to)) {
      throw CorpusError(path.string() + ":" + std::to_string(lineno) +
                        ": expected two hex code points");
    }
    cmap.map[static_cast<char32_t>(std::stoul(from, nullptr, 16))] =
        static_cast<char32_t>(std::stoul(to, nullptr, 16));
  }
  return cmap;
}

std::string normalize_text(const std::string& text, const CharMap& cmap) {
  auto cps = decode_utf8(text);
  std::vector<char32_t> out;
  out.reserve(cps.size());
  const auto& compose = compose_index();
  for (std::size_t i = 0; i < cps.size(); ++i) {
    char32_t cp = cps[i].cp;
    if (cp == '\r') {  // CRLF and bare CR both become LF
      if (i + 1 < cps.size() && cps[i + 1].cp == '\n') continue;
      cp = '\n';
    }
    if (!out.empty()) {
      auto it = compose.find((uint64_t(out.back()) << 32) | cp);
      if (it != compose.end()) {
        out.back() = it->second;
        continue;
      }
    }
    out.push_back(cp);
  }
  for (auto& cp : out) {
    auto it = cmap.map.find(cp);
    if (it != cmap.map.end()) cp = it->second;
  }
  return encode_utf8(out);
}

// ---------------------------------------------------------------------------
// Tokenization

std::vector<Token> tokenize(const std::string& sentence_text,
                            const Lexicons& lexicons) {
  auto cps = decode_utf8(sentence_text);
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    char32_t cp = cps[i].cp;
    if (is_space_cp(cp)) {
      ++i;
      continue;
    }
    Token tok;
    if (is_word_cp(cp)) {
      std::size_t j = i;
      bool has_letter = false;
      bool all_latin = true;
      while (j < cps.size() && is_word_cp(cps[j].cp)) {
        if (is_letter_cp(cps[j].cp)) {
          has_letter = true;
          if (!is_basic_latin_letter_cp(cps[j].cp)) all_latin = false;
        }
        ++j;
      }
      tok.begin = cps[i].offset;
      tok.end = cps[j - 1].offset + cps[j - 1].width;
      tok.surface = sentence_text.substr(tok.begin, tok.end - tok.begin);
      tok.is_word = true;
      tok.has_letter = has_letter;
      tok.is_latin_script = all_latin;  // vacuously true without letters
      tok.is_stopword = lexicons.stopwords.contains(tok.surface);
      tok.is_pronoun = lexicons.pronouns.contains(tok.surface);
      tok.is_proper_noun = lexicons.proper_nouns.contains(tok.surface);
      i = j;
    } else {
      tok.begin = cps[i].offset;
      tok.end = cps[i].offset + cps[i].width;
      tok.surface = sentence_text.substr(tok.begin, tok.end - tok.begin);
      tok.is_latin_script = true;  // no letters
      tok.is_quote_mark = in_set(cp, std::begin(kQuoteChars), std::end(kQuoteChars));
      tok.is_percent_sign =
          in_set(cp, std::begin(kPercentChars), std::end(kPercentChars));
      tok.is_parenthesis =
          in_set(cp, std::begin(kParenChars), std::end(kParenChars));
      ++i;
    }
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Sentence splitting

std::vector<std::string> split_sentences(const std::string& text) {
  auto cps = decode_utf8(text);
  std::vector<std::string> segments;
  auto emit = [&](std::size_t from, std::size_t to) {
    if (from >= to) return;
    std::string seg = trim_ws(text.substr(from, to - from));
    if (!seg.empty()) segments.push_back(std::move(seg));
  };
  std::size_t seg_begin = 0;
  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    if (is_terminator(cps[i].cp)) {
      std::size_t j = i;
      while (j + 1 < n && is_terminator(cps[j + 1].cp)) ++j;
      std::size_t end_byte = cps[j].offset + cps[j].width;
      emit(seg_begin, end_byte);
      seg_begin = end_byte;
      i = j + 1;
      continue;
    }
    if (cps[i].cp == '\n') {
      std::size_t k = i + 1;
      while (k < n && is_space_cp(cps[k].cp) && cps[k].cp != '\n') ++k;
      if (k < n && cps[k].cp == '\n') {  // blank line
        emit(seg_begin, cps[i].offset);
        std::size_t m = i;
        while (m < n && is_space_cp(cps[m].cp)) ++m;
        seg_begin = m < n ? cps[m].offset : text.size();
        i = m;
        continue;
      }
    }
    ++i;
  }
  emit(seg_begin, text.size());
  return segments;
}

// ---------------------------------------------------------------------------
// Corpus loading

int Corpus::document_count() const {
  int n = 0;
  for (const auto& t : topics) n += static_cast<int>(t.documents.size());
  return n;
}

const Document* Corpus::find_document(const std::string& id) const {
  for (const auto& t : topics) {
    for (const auto& d : t.documents) {
      if (d.id == id) return &d;
    }
  }
  return nullptr;
}

Document process_document(const std::string& raw, const std::string& id,
                          const std::string& topic_id, const LoadOptions& opt,
                          const Lexicons& lexicons, const CharMap& cmap,
                          std::vector<std::string>* warnings) {
  std::string text = raw;
  if (opt.decode_ncr) {
    NcrResult r = decode_ncr(raw);
    if (!r.warnings.empty()) {
      throw CorpusError(id + ": " + r.warnings.front());
    }
    text = std::move(r.text);
  }
  std::string norm;
  try {
    norm = normalize_text(text, cmap);
  } catch (const Utf8Error& e) {
    throw CorpusError(id + ": " + e.what());
  }

  Document doc;
  doc.id = id;
  doc.topic_id = topic_id;
  std::string body;
  auto nl = norm.find('\n');
  if (nl == std::string::npos) {
    doc.title = trim_ws(norm);
  } else {
    doc.title = trim_ws(norm.substr(0, nl));
    body = norm.substr(nl + 1);
  }
  auto segments = split_sentences(body);
  doc.sentences.reserve(segments.size());
  for (std::size_t k = 0; k < segments.size(); ++k) {
    Sentence s;
    s.text = std::move(segments[k]);
    s.tokens = tokenize(s.text, lexicons);
    s.doc_position = static_cast<int>(k);
    doc.sentences.push_back(std::move(s));
  }
  if (doc.sentences.empty() && warnings) {
    warnings->push_back("document " + id + " has no sentences");
  }
  return doc;
}

Corpus load_corpus(const std::filesystem::path& root, const LoadOptions& opt) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) {
    throw CorpusError("corpus root is not a directory: " + root.string());
  }
  Corpus corpus;
  if (opt.stopword_path) {
    corpus.lexicons.stopwords =
        load_lexicon(*opt.stopword_path, LexiconKind::kStopword);
  }
  if (opt.pronoun_path) {
    corpus.lexicons.pronouns =
        load_lexicon(*opt.pronoun_path, LexiconKind::kPronoun);
  }
  if (opt.proper_noun_path) {
    corpus.lexicons.proper_nouns =
        load_lexicon(*opt.proper_noun_path, LexiconKind::kProperNoun);
  }
  CharMap cmap =
      opt.charmap_path ? CharMap::load(*opt.charmap_path) : CharMap::defaults();

  std::vector<fs::path> topic_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    if (entry.path().filename() == "gold") continue;
    topic_dirs.push_back(entry.path());
  }
  std::sort(topic_dirs.begin(), topic_dirs.end());

  for (const auto& dir : topic_dirs) {
    Topic topic;
    topic.id = dir.filename().string();
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::string id = topic.id + "/" + f.stem().string();
      Document doc = process_document(read_file(f), id, topic.id, opt,
                                      corpus.lexicons, cmap, &corpus.warnings);
      if (doc.sentences.empty()) continue;  // warned inside
      topic.documents.push_back(std::move(doc));
    }
    if (topic.documents.empty()) {
      corpus.warnings.push_back("topic " + topic.id + " has no documents");
      continue;
    }
    corpus.topics.push_back(std::move(topic));
  }
  if (corpus.topics.empty()) {
    throw CorpusError("corpus at " + root.string() + " has no topics");
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Items

Item make_item(const Document& doc) {
  Item item;
  item.id = doc.id;
  item.title = doc.title;
  item.sentences.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences) {
    item.sentences.push_back(&s);
    item.refs.push_back({doc.id, s.doc_position});
  }
  return item;
}

Item make_item(const Topic& topic) {
  Item item;
  item.id = topic.id;
  if (!topic.documents.empty()) item.title = topic.documents.front().title;
  for (const auto& d : topic.documents) {
    for (const auto& s : d.sentences) {
      item.sentences.push_back(&s);
      item.refs.push_back({d.id, s.doc_position});
    }
  }
  return item;
}

Document concat_topic(const Topic& topic) {
  Document doc;
  doc.id = topic.id;
  doc.topic_id = topic.id;
  if (!topic.documents.empty()) doc.title = topic.documents.front().title;
  int pos = 0;
  for (const auto& d : topic.documents) {
    for (const auto& s : d.sentences) {
      Sentence copy = s;
      copy.doc_position = pos++;
      doc.sentences.push_back(std::move(copy));
    }
  }
  return doc;
}

}  // namespace extsum
