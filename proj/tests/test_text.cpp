#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace ts = termscape;
using Strings = std::vector<std::string>;

namespace {

const ts::Lexicon& bundled() {
  static const ts::Lexicon lex = ts::Lexicon::load_file(TERMSCAPE_DEFAULT_LEXICON);
  return lex;
}

std::vector<ts::TaggedToken> tags(std::initializer_list<std::pair<const char*, ts::Tag>> list) {
  std::vector<ts::TaggedToken> out;
  for (const auto& [w, t] : list) out.push_back({w, t});
  return out;
}

}  // namespace

TEST(Tokenize, SpecExamples) {
  EXPECT_TRUE(ts::tokenize("").empty());
  EXPECT_EQ(ts::tokenize("Drug-eluting stents reduce restenosis."),
            (Strings{"drug-eluting", "stents", "reduce", "restenosis", "."}));
  EXPECT_EQ(ts::tokenize("atrial fibrillation (AF)"), (Strings{"atrial", "fibrillation", "af"}));
}

TEST(Tokenize, BoundariesAndPunctuation) {
  EXPECT_EQ(ts::tokenize("One; two! Three? four, five: six"),
            (Strings{"one", ".", "two", ".", "three", ".", "four", ".", "five", ".", "six"}));
  // no leading or doubled boundary
  EXPECT_EQ(ts::tokenize("... a ,, b"), (Strings{"a", ".", "b"}));
  EXPECT_EQ(ts::tokenize("dose of 2.5 mg"), (Strings{"dose", "of", "2.5", "mg"}));
  EXPECT_EQ(ts::tokenize("Crohn's disease"), (Strings{"crohn", "disease"}));
  EXPECT_EQ(ts::tokenize("Crohn\xE2\x80\x99s disease"), (Strings{"crohn", "disease"}));
  EXPECT_EQ(ts::tokenize("don't [see] -dash"), (Strings{"don't", "see", "dash"}));
}

TEST(PosTag, SpecExamples) {
  const auto lex = ts::Lexicon::from_string("the\tOTHER\n");
  EXPECT_EQ(ts::pos_tag({"the"}, lex), tags({{"the", ts::Tag::other}}));
  EXPECT_EQ(ts::pos_tag({"qwzrt"}, lex), tags({{"qwzrt", ts::Tag::noun}}));
  // -ary is not an adjective suffix, so "coronary" needs the shipped lexicon
  EXPECT_EQ(ts::tag_word("coronary", lex), ts::Tag::noun);
  EXPECT_EQ(ts::pos_tag({"coronary"}, bundled()), tags({{"coronary", ts::Tag::adj}}));
}

TEST(PosTag, SuffixRulesAndBoundaries) {
  const ts::Lexicon empty;
  EXPECT_EQ(ts::tag_word("renal", empty), ts::Tag::adj);
  EXPECT_EQ(ts::tag_word("hepatic", empty), ts::Tag::adj);
  EXPECT_EQ(ts::tag_word("infectious", empty), ts::Tag::adj);
  EXPECT_EQ(ts::tag_word("invasive", empty), ts::Tag::adj);
  EXPECT_EQ(ts::tag_word("infection", empty), ts::Tag::noun);
  EXPECT_EQ(ts::tag_word("management", empty), ts::Tag::noun);
  EXPECT_EQ(ts::tag_word("arthritis", empty), ts::Tag::noun);
  EXPECT_EQ(ts::tag_word("melanoma", empty), ts::Tag::noun);
  EXPECT_EQ(ts::tag_word("anemia", empty), ts::Tag::noun);
  EXPECT_EQ(ts::tag_word("rapidly", empty), ts::Tag::other);
  EXPECT_EQ(ts::tag_word("treated", empty), ts::Tag::other);
  EXPECT_EQ(ts::tag_word("2008", empty), ts::Tag::other);
  EXPECT_EQ(ts::tag_word(".", empty), ts::Tag::other);
  // too short a stem for the -al rule
  EXPECT_EQ(ts::tag_word("gal", empty), ts::Tag::noun);
}

TEST(PosTag, BundledLexiconEntries) {
  const auto& lex = bundled();
  EXPECT_GT(lex.size(), 3000u);
  EXPECT_EQ(ts::tag_word("trial", lex), ts::Tag::noun);
  EXPECT_EQ(ts::tag_word("hospital", lex), ts::Tag::noun);
  EXPECT_EQ(ts::tag_word("randomized", lex), ts::Tag::adj);
  EXPECT_EQ(ts::tag_word("controlled", lex), ts::Tag::adj);
  EXPECT_EQ(ts::tag_word("reduce", lex), ts::Tag::other);
  EXPECT_EQ(ts::tag_word("and", lex), ts::Tag::other);
  EXPECT_EQ(ts::tag_word("drug-eluting", lex), ts::Tag::adj);
  // hyphenated compounds fall back to the tag of their last part
  EXPECT_EQ(ts::tag_word("non-coronary", lex), ts::Tag::adj);
  EXPECT_EQ(ts::tag_word("stent-graft", lex), ts::Tag::noun);
}

TEST(Lexicon, FileErrors) {
  EXPECT_THROW(ts::Lexicon::load_file("/nonexistent/lexicon.tsv"), ts::InputError);
  EXPECT_THROW(ts::Lexicon::from_string("word NOUN\n"), ts::InputError);
  EXPECT_THROW(ts::Lexicon::from_string("word\tVERB\n"), ts::InputError);
  const auto lex = ts::Lexicon::from_string("# comment\n\nWord\tADJ\n");
  EXPECT_EQ(ts::tag_word("word", lex), ts::Tag::adj);
}

TEST(Chunk, SpecExamples) {
  using ts::Tag;
  EXPECT_EQ(ts::chunk_noun_phrases(tags({{"acute", Tag::adj}, {"myocardial", Tag::adj}, {"infarction", Tag::noun}})),
            (Strings{"acute myocardial infarction", "myocardial infarction", "infarction"}));
  EXPECT_TRUE(ts::chunk_noun_phrases(tags({{"reduce", Tag::other}})).empty());
  EXPECT_EQ(ts::chunk_noun_phrases(tags({{"stent", Tag::noun}, {"thrombosis", Tag::noun}})),
            (Strings{"stent thrombosis", "thrombosis"}));
}

TEST(Chunk, RunsBreakOnOtherAndNeedTrailingNoun) {
  using ts::Tag;
  // an adjective run that never reaches a noun yields nothing
  EXPECT_TRUE(ts::chunk_noun_phrases(tags({{"acute", Tag::adj}, {"severe", Tag::adj}})).empty());
  // ADJ after NOUN starts a new run
  EXPECT_EQ(ts::chunk_noun_phrases(
                tags({{"risk", Tag::noun}, {"high", Tag::adj}, {"dose", Tag::noun}, {"the", Tag::other},
                      {"stent", Tag::noun}})),
            (Strings{"risk", "high dose", "dose", "stent"}));
  // a trailing adjective is not part of the phrase
  EXPECT_EQ(ts::chunk_noun_phrases(tags({{"membrane", Tag::noun}, {"potential", Tag::adj}})), (Strings{"membrane"}));
}

TEST(Chunk, LongPhrasesDropped) {
  std::vector<ts::TaggedToken> run;
  for (int i = 0; i < 8; ++i) run.push_back({"w" + std::to_string(i), ts::Tag::noun});
  const auto phrases = ts::chunk_noun_phrases(run);
  ASSERT_EQ(phrases.size(), 6u);  // suffixes of 6, 5, ..., 1 words
  EXPECT_EQ(phrases.front(), "w2 w3 w4 w5 w6 w7");
  EXPECT_EQ(phrases.back(), "w7");
}

TEST(Canonicalize, SpecExamples) {
  EXPECT_EQ(ts::canonicalize_phrase("stents"), "stent");
  EXPECT_EQ(ts::canonicalize_phrase("meta-analyses"), "meta-analysis");
  EXPECT_EQ(ts::canonicalize_phrase("bypass"), "bypass");
}

TEST(Canonicalize, RuleTable) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"studies", "study"},       {"analyses", "analysis"},     {"diagnoses", "diagnosis"},
      {"boxes", "box"},           {"approaches", "approach"},   {"headaches", "headache"},
      {"brushes", "brush"},       {"glasses", "glass"},         {"heroes", "hero"},
      {"diseases", "disease"},    {"cases", "case"},            {"sizes", "size"},
      {"data", "data"},           {"criteria", "criterion"},    {"mice", "mouse"},
      {"diabetes", "diabetes"},   {"series", "series"},         {"virus", "virus"},
      {"viruses", "virus"},       {"thrombosis", "thrombosis"}, {"gas", "gas"},
      {"statistics", "statistics"}, {"doses", "dose"},          {"bacteria", "bacterium"},
  };
  for (const auto& [in, out] : cases) EXPECT_EQ(ts::singularize_word(in), out) << in;
  // only the head word changes; whitespace collapses
  EXPECT_EQ(ts::canonicalize_phrase("  Drug-Eluting   Stents "), "drug-eluting stent");
  EXPECT_EQ(ts::canonicalize_phrase("patients outcomes"), "patients outcome");
}

TEST(Canonicalize, Idempotent) {
  std::mt19937_64 rng(21);
  const std::string alphabet = "aeiouyshcxzrnt-";
  std::vector<std::string> words = {"analyses", "criterias", "theses", "buses", "churches", "aches", "quizzes",
                                    "ies", "sss", "s-s", "x-ies", "a-criteria", "oases"};
  for (int i = 0; i < 20000; ++i) {
    std::string w;
    const int len = 1 + static_cast<int>(rng() % 10);
    for (int k = 0; k < len; ++k) w += alphabet[rng() % alphabet.size()];
    words.push_back(w);
  }
  for (const auto& w : words) {
    const auto once = ts::canonicalize_phrase("first " + w);
    EXPECT_EQ(ts::canonicalize_phrase(once), once) << w;
  }
}
