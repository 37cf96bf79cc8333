#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace extsum {

struct CorpusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Lexicons

enum class LexiconKind { kStopword, kPronoun, kProperNoun, kTaboo };

struct Lexicon {
  LexiconKind kind = LexiconKind::kStopword;
  std::unordered_set<std::string> entries;  // normalized surface forms

  bool contains(const std::string& surface) const {
    return entries.count(surface) != 0;
  }
  std::size_t size() const { return entries.size(); }
};

// One entry per line; '#' starts a comment; blank lines ignored; entries are
// run through text normalization on load.
Lexicon load_lexicon(const std::filesystem::path& path, LexiconKind kind);

struct Lexicons {
  Lexicon stopwords{LexiconKind::kStopword, {}};
  Lexicon pronouns{LexiconKind::kPronoun, {}};
  Lexicon proper_nouns{LexiconKind::kProperNoun, {}};
};

// ---------------------------------------------------------------------------
// Character-level preparation

// Numeric character references ("&#1740;", "&#x6CC;") decoded to the
// characters they name. Anything malformed is left verbatim and reported.
struct NcrResult {
  std::string text;
  std::vector<std::string> warnings;
};
NcrResult decode_ncr(const std::string& text);

// Pairwise character replacements applied during normalization, e.g. mapping
// Arabic presentation forms onto Persian base letters.
struct CharMap {
  std::unordered_map<char32_t, char32_t> map;

  static const CharMap& defaults();
  // File format: one mapping per line, "<hex> <hex>"; '#' comments.
  static CharMap load(const std::filesystem::path& path);
};

// Line-ending unification, canonical composition of split base+mark pairs,
// and the character map. ZWNJ is preserved.
std::string normalize_text(const std::string& text, const CharMap& cmap);
inline std::string normalize_text(const std::string& text) {
  return normalize_text(text, CharMap::defaults());
}

// ---------------------------------------------------------------------------
// Tokens and sentences

struct Token {
  std::string surface;
  std::size_t begin = 0;  // byte offsets into the sentence text
  std::size_t end = 0;
  bool is_stopword = false;
  bool is_pronoun = false;
  bool is_proper_noun = false;
  bool is_latin_script = false;  // every letter is ASCII/Latin-1
  bool is_quote_mark = false;
  bool is_percent_sign = false;
  bool is_parenthesis = false;

  // Word tokens (vs. single-character punctuation/symbol tokens).
  bool is_word = false;
  bool has_letter = false;
};

struct Sentence {
  std::string text;
  std::vector<Token> tokens;
  int doc_position = 0;  // 0-based order within the source document

  int length() const { return static_cast<int>(tokens.size()); }
};

std::vector<Token> tokenize(const std::string& sentence_text,
                            const Lexicons& lexicons);

// Splits normalized text into sentence strings on terminator punctuation
// (. ! ? and the Arabic question mark/semicolon) and on blank lines.
// Runs of consecutive terminators stay with the sentence they close.
std::vector<std::string> split_sentences(const std::string& normalized_text);

// ---------------------------------------------------------------------------
// Documents, topics, corpus

struct Document {
  std::string id;       // "<topic-id>/<file-stem>"
  std::string topic_id;
  std::string title;    // first line of the file
  std::vector<Sentence> sentences;
};

struct Topic {
  std::string id;
  std::vector<Document> documents;  // sorted by id
};

struct Corpus {
  std::vector<Topic> topics;  // sorted by id
  Lexicons lexicons;
  std::vector<std::string> warnings;

  int document_count() const;
  const Document* find_document(const std::string& id) const;
};

struct LoadOptions {
  bool decode_ncr = false;  // makes NCR warnings fatal
  std::optional<std::filesystem::path> stopword_path;
  std::optional<std::filesystem::path> pronoun_path;
  std::optional<std::filesystem::path> proper_noun_path;
  std::optional<std::filesystem::path> charmap_path;
};

// Layout: <root>/<topic-id>/<doc>.txt. A "gold" subdirectory is reserved for
// reference summaries and is not a topic.
Corpus load_corpus(const std::filesystem::path& root, const LoadOptions& opt);

// Fully processes one raw document body (NCR decoding optional, then
// normalization, sentence splitting, tokenization). Exposed for tests and
// for processing texts that do not live in a corpus tree.
Document process_document(const std::string& raw, const std::string& id,
                          const std::string& topic_id, const LoadOptions& opt,
                          const Lexicons& lexicons, const CharMap& cmap,
                          std::vector<std::string>* warnings);

// ---------------------------------------------------------------------------
// Summarization items: a single document, or a topic's documents
// concatenated in document-id order.

struct SentenceRef {
  std::string doc_id;
  int position = 0;  // doc_position in the source document

  bool operator==(const SentenceRef&) const = default;
};

struct Item {
  std::string id;
  std::string title;
  std::vector<const Sentence*> sentences;  // temporal order
  std::vector<SentenceRef> refs;           // parallel to sentences

  int size() const { return static_cast<int>(sentences.size()); }
};

Item make_item(const Document& doc);
Item make_item(const Topic& topic);

// The topic's documents stitched into one synthetic document ("approach 1":
// treat the concatenation as the input text).
Document concat_topic(const Topic& topic);

}  // namespace extsum
