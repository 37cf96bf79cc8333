#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "extsum/corpus.hpp"
#include "extsum/utf8.hpp"
#include "testutil.hpp"

using namespace extsum;
using testutil::TempDir;
using testutil::write_file;

TEST_CASE("utf8 round trip and rejection") {
  std::string s = "پایتخت ایران تهران است.";
  auto cps = decode_utf8(s);
  std::vector<char32_t> flat;
  for (const auto& c : cps) flat.push_back(c.cp);
  CHECK(encode_utf8(flat) == s);

  CHECK_THROWS_AS(decode_utf8("\xC0\xAF"), Utf8Error);        // overlong
  CHECK_THROWS_AS(decode_utf8("\xED\xA0\x80"), Utf8Error);    // surrogate
  CHECK_THROWS_AS(decode_utf8("\xF5\x80\x80\x80"), Utf8Error);  // > U+10FFFF
  CHECK_THROWS_AS(decode_utf8("\x80"), Utf8Error);            // stray cont.
  CHECK_THROWS_AS(decode_utf8("\xD9"), Utf8Error);            // truncated
}

TEST_CASE("numeric character references") {
  auto r = decode_ncr("&#1740; &#x6CC;");
  CHECK(r.text == "ی ی");
  CHECK(r.warnings.empty());

  r = decode_ncr("x&#65;y");
  CHECK(r.text == "xAy");

  SUBCASE("malformed forms survive verbatim") {
    r = decode_ncr("a &#; b &#12 c &ref; d");
    CHECK(r.text == "a &#; b &#12 c &ref; d");
    CHECK(r.warnings.size() == 2);  // "&ref;" is not numeric, no warning
  }
  SUBCASE("invalid scalars survive verbatim") {
    r = decode_ncr("&#xD800; and &#1114112;");
    CHECK(r.text == "&#xD800; and &#1114112;");
    CHECK(r.warnings.size() == 2);
  }
}

TEST_CASE("normalization maps presentation forms and composes marks") {
  // Arabic kaf and yeh become their Persian counterparts.
  CHECK(normalize_text("ك") == "ک");
  CHECK(normalize_text("ي") == "ی");
  // Presentation forms collapse to base letters.
  CHECK(normalize_text("ﻫ") == "ه");   // heh, initial form
  CHECK(normalize_text("ﮎ") == "ک");   // keheh, isolated form
  // Split alef + madda composes to the precomposed letter.
  CHECK(normalize_text("آ") == "آ");
  // Yeh + hamza composes, then the map keeps it (already Persian-safe).
  CHECK(normalize_text("ئ") == "ئ");
  // Latin composition subset.
  CHECK(normalize_text("é") == "é");
  // ZWNJ is untouched.
  std::string zwnj_word = "می‌رود";
  CHECK(normalize_text(zwnj_word) == zwnj_word);
  // Line endings.
  CHECK(normalize_text("a\r\nb\rc\nd") == "a\nb\nc\nd");
}

TEST_CASE("custom character map file") {
  TempDir tmp;
  write_file(tmp.path() / "map.txt", "# test map\n0041 0042\n06CC 064A\n");
  CharMap cmap = CharMap::load(tmp.path() / "map.txt");
  CHECK(normalize_text("Aی", cmap) == "Bي");
}

TEST_CASE("sentence splitting") {
  auto segs = split_sentences("الف. ب! پ؟ ت؛ ث");
  REQUIRE(segs.size() == 5);
  CHECK(segs[0] == "الف.");
  CHECK(segs[1] == "ب!");
  CHECK(segs[2] == "پ؟");
  CHECK(segs[3] == "ت؛");
  CHECK(segs[4] == "ث");

  SUBCASE("consecutive terminators bind to the left") {
    segs = split_sentences("صبر کن... باشد؟!");
    REQUIRE(segs.size() == 2);
    CHECK(segs[0] == "صبر کن...");
    CHECK(segs[1] == "باشد؟!");
  }
  SUBCASE("blank lines split, single newlines do not") {
    segs = split_sentences("سطر اول\nادامه همان جمله\n\nجمله دوم");
    REQUIRE(segs.size() == 2);
    CHECK(segs[0] == "سطر اول\nادامه همان جمله");
    CHECK(segs[1] == "جمله دوم");
  }
  SUBCASE("whitespace-only input yields nothing") {
    CHECK(split_sentences("  \n \n\t ").empty());
    CHECK(split_sentences("").empty());
  }
  SUBCASE("terminator-adjacent segments reconstruct the input") {
    std::string text = "یک. دو!\nسه\n\nچهار؟ پنج";
    auto parts = split_sentences(text);
    // Greedy re-match: consume optional whitespace, then each sentence.
    std::size_t pos = 0;
    for (const auto& s : parts) {
      pos = text.find(s, pos);
      REQUIRE(pos != std::string::npos);
      pos += s.size();
    }
    // Nothing but whitespace may remain.
    for (std::size_t i = pos; i < text.size(); ++i) {
      CHECK(std::isspace(static_cast<unsigned char>(text[i])));
    }
  }
}

TEST_CASE("tokenization") {
  Lexicons lex;
  lex.stopwords.entries = {"از", "و"};
  lex.pronouns.entries = {"او"};
  lex.proper_nouns.entries = {"تهران"};

  SUBCASE("flags and punctuation singletons") {
    auto toks = tokenize("«تهران» ۵۰٪ (او و API).", lex);
    std::vector<std::string> surfaces;
    for (const auto& t : toks) surfaces.push_back(t.surface);
    REQUIRE(surfaces == std::vector<std::string>{"«", "تهران", "»", "۵۰", "٪",
                                                 "(", "او", "و", "API", ")",
                                                 "."});
    CHECK(toks[0].is_quote_mark);
    CHECK(toks[2].is_quote_mark);
    CHECK(toks[1].is_proper_noun);
    CHECK_FALSE(toks[1].is_latin_script);
    CHECK(toks[3].is_word);
    CHECK_FALSE(toks[3].has_letter);
    CHECK(toks[3].is_latin_script);  // vacuous: no letters at all
    CHECK(toks[4].is_percent_sign);
    CHECK(toks[5].is_parenthesis);
    CHECK(toks[6].is_pronoun);
    CHECK(toks[7].is_stopword);
    CHECK(toks[8].is_latin_script);
    CHECK(toks[8].has_letter);
    CHECK(toks[9].is_parenthesis);
    CHECK_FALSE(toks[10].is_word);
  }
  SUBCASE("ZWNJ stays word-internal") {
    auto toks = tokenize("می‌رود", lex);
    REQUIRE(toks.size() == 1);
    CHECK(toks[0].surface == "می‌رود");
  }
  SUBCASE("ascii percent and straight quotes") {
    auto toks = tokenize("\"50%\"", lex);
    REQUIRE(toks.size() == 4);
    CHECK(toks[0].is_quote_mark);
    CHECK(toks[1].surface == "50");
    CHECK(toks[2].is_percent_sign);
    CHECK(toks[3].is_quote_mark);
  }
  SUBCASE("byte spans tile the non-space text in order") {
    std::string text = "او گفت: «سلام دنیا» و رفت.";
    auto toks = tokenize(text, lex);
    std::size_t prev_end = 0;
    for (const auto& t : toks) {
      CHECK(t.begin >= prev_end);
      CHECK(t.end > t.begin);
      CHECK(text.substr(t.begin, t.end - t.begin) == t.surface);
      prev_end = t.end;
    }
  }
}

TEST_CASE("lexicon loading normalizes entries") {
  TempDir tmp;
  // Arabic yeh in the file; tokens are produced from normalized text, so the
  // stored entry must match the Persian form.
  write_file(tmp.path() / "stop.txt",
             "# comment line\nكه\n\nاز  # trailing comment\n");
  Lexicon lex = load_lexicon(tmp.path() / "stop.txt", LexiconKind::kStopword);
  CHECK(lex.size() == 2);
  CHECK(lex.contains("که"));
  CHECK(lex.contains("از"));
}

static void write_demo_corpus(const TempDir& tmp) {
  write_file(tmp.path() / "corpus/T1/a.txt",
             "عنوان نخست\nجمله اول است. جمله دوم است!\n\nجمله سوم؟");
  write_file(tmp.path() / "corpus/T1/b.txt", "عنوان دوم\nتنها جمله سند دوم.");
  write_file(tmp.path() / "corpus/T2/c.txt",
             "عنوان سوم\nیک جمله. دو جمله. سه جمله.");
  // The gold directory must not become a topic.
  write_file(tmp.path() / "corpus/gold/T1/j1.txt", "جمله اول است.");
}

TEST_CASE("corpus loading") {
  TempDir tmp;
  write_demo_corpus(tmp);
  LoadOptions opt;
  Corpus corpus = load_corpus(tmp.path() / "corpus", opt);
  REQUIRE(corpus.topics.size() == 2);
  CHECK(corpus.topics[0].id == "T1");
  CHECK(corpus.topics[1].id == "T2");
  REQUIRE(corpus.topics[0].documents.size() == 2);
  const Document& a = corpus.topics[0].documents[0];
  CHECK(a.id == "T1/a");
  CHECK(a.title == "عنوان نخست");
  REQUIRE(a.sentences.size() == 3);
  CHECK(a.sentences[0].text == "جمله اول است.");
  CHECK(a.sentences[2].text == "جمله سوم؟");
  for (int i = 0; i < 3; ++i) CHECK(a.sentences[i].doc_position == i);
  CHECK(corpus.document_count() == 3);
  CHECK(corpus.find_document("T2/c") != nullptr);
  CHECK(corpus.find_document("T2/x") == nullptr);

  SUBCASE("sentences never come out empty") {
    for (const auto& t : corpus.topics) {
      for (const auto& d : t.documents) {
        for (const auto& s : d.sentences) CHECK(s.length() >= 1);
      }
    }
  }
}

TEST_CASE("corpus loading edge cases") {
  TempDir tmp;
  SUBCASE("documents without sentences are skipped with a warning") {
    write_file(tmp.path() / "corpus/T1/empty.txt", "فقط عنوان\n   \n");
    write_file(tmp.path() / "corpus/T1/full.txt", "عنوان\nمتن جمله.");
    Corpus corpus = load_corpus(tmp.path() / "corpus", {});
    REQUIRE(corpus.topics.size() == 1);
    CHECK(corpus.topics[0].documents.size() == 1);
    CHECK(corpus.topics[0].documents[0].id == "T1/full");
    REQUIRE(corpus.warnings.size() == 1);
    CHECK(corpus.warnings[0].find("T1/empty") != std::string::npos);
  }
  SUBCASE("a corpus with no topics is an error") {
    std::filesystem::create_directories(tmp.path() / "corpus");
    CHECK_THROWS_AS(load_corpus(tmp.path() / "corpus", {}), CorpusError);
  }
  SUBCASE("a missing root is an error") {
    CHECK_THROWS_AS(load_corpus(tmp.path() / "nope", {}), CorpusError);
  }
  SUBCASE("NCR decoding failures name the document") {
    write_file(tmp.path() / "corpus/T1/bad.txt", "عنوان\nمتن &#xD800; جمله.");
    LoadOptions opt;
    opt.decode_ncr = true;
    try {
      load_corpus(tmp.path() / "corpus", opt);
      FAIL("expected CorpusError");
    } catch (const CorpusError& e) {
      CHECK(std::string(e.what()).find("T1/bad") != std::string::npos);
    }
  }
  SUBCASE("NCR decoding applies when enabled, not otherwise") {
    write_file(tmp.path() / "corpus/T1/ncr.txt", "عنوان\nواژه&#1740; ماند.");
    Corpus plain = load_corpus(tmp.path() / "corpus", {});
    CHECK(plain.topics[0].documents[0].sentences[0].text.find("&#1740;") !=
          std::string::npos);
    LoadOptions opt;
    opt.decode_ncr = true;
    Corpus decoded = load_corpus(tmp.path() / "corpus", opt);
    CHECK(decoded.topics[0].documents[0].sentences[0].text ==
          "واژهی ماند.");
  }
  SUBCASE("lexicon flags are applied at load time") {
    write_file(tmp.path() / "corpus/T1/d.txt", "عنوان\nاو از تهران آمد.");
    write_file(tmp.path() / "stop.txt", "از\n");
    write_file(tmp.path() / "pron.txt", "او\n");
    LoadOptions opt;
    opt.stopword_path = tmp.path() / "stop.txt";
    opt.pronoun_path = tmp.path() / "pron.txt";
    Corpus corpus = load_corpus(tmp.path() / "corpus", opt);
    const auto& toks = corpus.topics[0].documents[0].sentences[0].tokens;
    CHECK(toks[0].is_pronoun);
    CHECK(toks[1].is_stopword);
  }
}

TEST_CASE("items and topic concatenation") {
  TempDir tmp;
  write_demo_corpus(tmp);
  Corpus corpus = load_corpus(tmp.path() / "corpus", {});
  const Topic& t1 = corpus.topics[0];

  Item doc_item = make_item(t1.documents[0]);
  CHECK(doc_item.id == "T1/a");
  CHECK(doc_item.size() == 3);
  CHECK(doc_item.refs[2] == SentenceRef{"T1/a", 2});

  Item topic_item = make_item(t1);
  CHECK(topic_item.id == "T1");
  CHECK(topic_item.title == "عنوان نخست");  // first document's title
  REQUIRE(topic_item.size() == 4);
  CHECK(topic_item.refs[0] == SentenceRef{"T1/a", 0});
  CHECK(topic_item.refs[3] == SentenceRef{"T1/b", 0});
  // Temporal order: document order, then position within each document.
  for (int i = 1; i < topic_item.size(); ++i) {
    const auto& prev = topic_item.refs[i - 1];
    const auto& cur = topic_item.refs[i];
    bool ordered = prev.doc_id < cur.doc_id ||
                   (prev.doc_id == cur.doc_id && prev.position < cur.position);
    CHECK(ordered);
  }

  Document merged = concat_topic(t1);
  CHECK(merged.id == "T1");
  REQUIRE(merged.sentences.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(merged.sentences[i].doc_position == i);
  CHECK(merged.sentences[3].text == t1.documents[1].sentences[0].text);
}
