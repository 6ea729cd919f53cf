#ifndef TERMSCAPE_TEXT_HPP
#define TERMSCAPE_TEXT_HPP

#include <array>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "termscape/error.hpp"
#include "termscape/strings.hpp"

namespace termscape {

// Sentence/clause boundary marker in token streams. Never produced by a word.
inline constexpr std::string_view kBoundary = ".";

enum class Tag { noun, adj, other };

inline std::string_view tag_name(Tag tag) {
  switch (tag) {
    case Tag::noun: return "NOUN";
    case Tag::adj: return "ADJ";
    default: return "OTHER";
  }
}

struct TaggedToken {
  std::string text;
  Tag tag = Tag::other;

  bool operator==(const TaggedToken&) const = default;
};

namespace detail {

inline bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

// . ! ? ; end sentences; , and : end clauses. Both stop a noun phrase.
inline bool is_boundary_char(char c) {
  return c == '.' || c == '!' || c == '?' || c == ';' || c == ',' || c == ':';
}

}  // namespace detail

// Lowercased word tokens with kBoundary markers. Internal hyphens and
// apostrophes stay inside a token, a possessive "'s" is dropped, brackets are
// removed without breaking the phrase, and a '.' between digits is a decimal
// point.
inline std::vector<std::string> tokenize(std::string_view input) {
  std::string text;
  text.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    // U+2019 right single quotation mark reads as an apostrophe
    if (input.compare(i, 3, "\xE2\x80\x99") == 0) {
      text += '\'';
      i += 2;
    } else {
      text += input[i];
    }
  }

  std::vector<std::string> tokens;
  std::string word;
  const auto flush = [&] {
    if (!word.empty()) tokens.push_back(std::move(word));
    word.clear();
  };
  const auto boundary = [&] {
    flush();
    if (!tokens.empty() && tokens.back() != kBoundary) tokens.emplace_back(kBoundary);
  };

  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    const bool next_is_word = i + 1 < n && detail::is_word_byte(static_cast<unsigned char>(text[i + 1]));
    if (detail::is_word_byte(static_cast<unsigned char>(c))) {
      word += ascii_lower(c);
    } else if ((c == '-' || c == '\'') && !word.empty() && next_is_word) {
      if (c == '\'' && (text[i + 1] == 's' || text[i + 1] == 'S') &&
          (i + 2 >= n || !detail::is_word_byte(static_cast<unsigned char>(text[i + 2])))) {
        ++i;  // possessive
        flush();
      } else {
        word += c;
      }
    } else if (c == '.' && !word.empty() && detail::is_digit(word.back()) && i + 1 < n &&
               detail::is_digit(text[i + 1])) {
      word += c;
    } else if (detail::is_boundary_char(c)) {
      boundary();
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

class Lexicon {
public:
  Lexicon() = default;

  static Lexicon load(std::istream& in, const std::string& what = "lexicon") {
    Lexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view view = trim(line);
      if (view.empty() || view.front() == '#') continue;
      const auto tab = view.find('\t');
      if (tab == std::string_view::npos) {
        throw InputError(what + ":" + std::to_string(line_no) + ": expected 'word<TAB>TAG'");
      }
      const std::string word = to_lower(trim(view.substr(0, tab)));
      const std::string_view tag = trim(view.substr(tab + 1));
      Tag parsed;
      if (tag == "NOUN") {
        parsed = Tag::noun;
      } else if (tag == "ADJ") {
        parsed = Tag::adj;
      } else if (tag == "OTHER") {
        parsed = Tag::other;
      } else {
        throw InputError(what + ":" + std::to_string(line_no) + ": unknown tag '" +
                         std::string(tag) + "'");
      }
      if (word.empty()) throw InputError(what + ":" + std::to_string(line_no) + ": empty word");
      lex.entries_[word] = parsed;
    }
    if (in.bad()) throw InputError(what + ": read failure");
    return lex;
  }

  static Lexicon load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("missing lexicon resource '" + path + "'");
    return load(in, path);
  }

  static Lexicon from_string(const std::string& text) {
    std::istringstream in(text);
    return load(in);
  }

  const Tag* find(std::string_view word) const {
    auto it = entries_.find(std::string(word));
    return it == entries_.end() ? nullptr : &it->second;
  }

  void set(std::string word, Tag tag) { entries_[std::move(word)] = tag; }
  std::size_t size() const { return entries_.size(); }

private:
  std::unordered_map<std::string, Tag> entries_;
};

namespace detail {

struct SuffixRule {
  std::string_view suffix;
  Tag tag;
};

// Checked in order; the first match wins. A rule needs at least two letters of
// stem in front of the suffix.
inline constexpr std::array<SuffixRule, 28> kSuffixRules{{
    {"tion", Tag::noun},   {"sion", Tag::noun},   {"ment", Tag::noun},  {"ness", Tag::noun},
    {"itis", Tag::noun},   {"oma", Tag::noun},    {"emia", Tag::noun},  {"aemia", Tag::noun},
    {"osis", Tag::noun},   {"ectomy", Tag::noun}, {"otomy", Tag::noun}, {"plasty", Tag::noun},
    {"graphy", Tag::noun}, {"scopy", Tag::noun},  {"logy", Tag::noun},  {"pathy", Tag::noun},
    {"ity", Tag::noun},    {"ism", Tag::noun},    {"al", Tag::adj},     {"ic", Tag::adj},
    {"ous", Tag::adj},     {"ive", Tag::adj},     {"ful", Tag::adj},    {"less", Tag::adj},
    {"able", Tag::adj},    {"ible", Tag::adj},    {"ly", Tag::other},   {"ed", Tag::other},
}};

inline bool has_letter(std::string_view word) {
  for (unsigned char c : word) {
    if ((c >= 'a' && c <= 'z') || c >= 0x80) return true;
  }
  return false;
}

}  // namespace detail

inline Tag tag_word(std::string_view word, const Lexicon& lexicon) {
  if (word == kBoundary) return Tag::other;
  if (const Tag* t = lexicon.find(word)) return *t;
  if (!detail::has_letter(word)) return Tag::other;
  // hyphenated compounds take the tag of their last part when it is known
  if (const auto dash = word.rfind('-'); dash != std::string_view::npos && dash + 1 < word.size()) {
    if (const Tag* t = lexicon.find(word.substr(dash + 1)); t && *t != Tag::other) return *t;
  }
  for (const auto& rule : detail::kSuffixRules) {
    if (word.size() >= rule.suffix.size() + 2 && ends_with(word, rule.suffix)) return rule.tag;
  }
  return Tag::noun;
}

inline std::vector<TaggedToken> pos_tag(const std::vector<std::string>& tokens,
                                        const Lexicon& lexicon) {
  std::vector<TaggedToken> tagged;
  tagged.reserve(tokens.size());
  for (const auto& tok : tokens) tagged.push_back({tok, tag_word(tok, lexicon)});
  return tagged;
}

inline constexpr std::size_t kMaxPhraseWords = 6;

// Maximal ADJ* NOUN+ runs plus every word-suffix of each run, longest first.
// Pieces longer than kMaxPhraseWords words are dropped.
inline std::vector<std::string> chunk_noun_phrases(const std::vector<TaggedToken>& tagged) {
  std::vector<std::string> phrases;
  const std::size_t n = tagged.size();
  std::size_t i = 0;
  while (i < n) {
    if (tagged[i].tag == Tag::other) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < n && tagged[i].tag == Tag::adj) ++i;
    if (i == n || tagged[i].tag != Tag::noun) continue;
    while (i < n && tagged[i].tag == Tag::noun) ++i;
    const std::size_t end = i;
    for (std::size_t s = start; s < end; ++s) {
      if (end - s > kMaxPhraseWords) continue;
      std::string phrase = tagged[s].text;
      for (std::size_t w = s + 1; w < end; ++w) {
        phrase += ' ';
        phrase += tagged[w].text;
      }
      phrases.push_back(std::move(phrase));
    }
  }
  return phrases;
}

namespace detail {

inline const std::unordered_map<std::string_view, std::string_view>& irregular_plurals() {
  static const std::unordered_map<std::string_view, std::string_view> table{
      {"criteria", "criterion"},   {"phenomena", "phenomenon"}, {"children", "child"},
      {"women", "woman"},          {"men", "man"},              {"feet", "foot"},
      {"teeth", "tooth"},          {"mice", "mouse"},           {"lice", "louse"},
      {"geese", "goose"},          {"crises", "crisis"},        {"metastases", "metastasis"},
      {"axes", "axis"},            {"indices", "index"},        {"matrices", "matrix"},
      {"vertices", "vertex"},      {"apices", "apex"},          {"cortices", "cortex"},
      {"appendices", "appendix"},  {"lives", "life"},           {"halves", "half"},
      {"leaves", "leaf"},          {"knives", "knife"},         {"wives", "wife"},
      {"calves", "calf"},          {"selves", "self"},          {"shelves", "shelf"},
      {"wolves", "wolf"},          {"thieves", "thief"},        {"viruses", "virus"},
      {"fetuses", "fetus"},        {"foetuses", "foetus"},      {"sinuses", "sinus"},
      {"plexuses", "plexus"},      {"censuses", "census"},      {"consensuses", "consensus"},
      {"bonuses", "bonus"},        {"calluses", "callus"},      {"nexuses", "nexus"},
      {"uteruses", "uterus"},      {"hiatuses", "hiatus"},      {"statuses", "status"},
      {"toes", "toe"},             {"shoes", "shoe"},           {"canoes", "canoe"},
      {"niches", "niche"},         {"doses", "dose"},           {"purposes", "purpose"},
      {"poses", "pose"},           {"noses", "nose"},           {"hoses", "hose"},
      {"roses", "rose"},           {"glucoses", "glucose"},     {"hexoses", "hexose"},
      {"pentoses", "pentose"},     {"biases", "bias"},          {"gases", "gas"},
      {"atlases", "atlas"},        {"aliases", "alias"},        {"lenses", "lens"},
      {"cheeses", "cheese"},       {"calories", "calorie"},     {"stimuli", "stimulus"},
      {"nuclei", "nucleus"},       {"emboli", "embolus"},       {"bacilli", "bacillus"},
      {"fungi", "fungus"},         {"foci", "focus"},           {"radii", "radius"},
      {"thrombi", "thrombus"},     {"loci", "locus"},           {"alumni", "alumnus"},
      {"bacteria", "bacterium"},   {"strata", "stratum"},       {"spectra", "spectrum"},
      {"septa", "septum"},         {"atria", "atrium"},         {"ova", "ovum"},
      {"sera", "serum"},           {"curricula", "curriculum"}, {"errata", "erratum"},
      {"vertebrae", "vertebra"},   {"larvae", "larva"},         {"formulae", "formula"},
      {"algae", "alga"},           {"diagnoses", "diagnosis"},  {"prognoses", "prognosis"},
  };
  return table;
}

// Words that look plural but are not, plus every singular produced above.
inline const std::unordered_set<std::string_view>& invariant_words() {
  static const std::unordered_set<std::string_view> words = [] {
    std::unordered_set<std::string_view> w{
        "data",          "series",         "species",        "diabetes",        "herpes",
        "rabies",        "scabies",        "caries",         "mumps",           "measles",
        "news",          "biceps",         "triceps",        "forceps",         "pancreas",
        "aids",          "physics",        "genetics",       "statistics",      "kinetics",
        "pharmacokinetics", "pharmacodynamics", "hemodynamics", "haemodynamics",  "dynamics",
        "mechanics",     "biomechanics",   "ethics",         "economics",       "pediatrics",
        "paediatrics",   "orthopedics",    "orthopaedics",   "obstetrics",      "geriatrics",
        "diagnostics",   "therapeutics",   "genomics",       "proteomics",      "metabolomics",
        "bioinformatics", "informatics",   "biostatistics",  "electronics",     "optics",
        "politics",      "logistics",      "athletics",      "mathematics",     "feces",
        "faeces",        "menses",         "media",          "mellitus",        "tetanus",
        "lupus",         "thesis",
    };
    for (const auto& [plural, singular] : irregular_plurals()) w.insert(singular);
    return w;
  }();
  return words;
}

}  // namespace detail

// Rule order: irregular table; invariants; words under 4 letters; -ss/-us/-is
// endings stay; -ies -> -y; -yses/-eses/-oses -> -sis forms; -sses/-xes/-zzes/
// -ches/-shes/-oes drop "es" (except -aches of "ache" words); any other -es
// or -s drops "s". Every output is a fixed point, so singularizing twice
// changes nothing.
inline std::string singularize_word(std::string_view word) {
  const auto& irregular = detail::irregular_plurals();
  if (auto it = irregular.find(word); it != irregular.end()) return std::string(it->second);
  if (detail::invariant_words().count(word) || word.size() < 4) return std::string(word);

  // compounds: singularize the part after the last hyphen ("meta-analyses")
  if (const auto dash = word.rfind('-'); dash != std::string_view::npos && dash + 1 < word.size()) {
    return std::string(word.substr(0, dash + 1)) + singularize_word(word.substr(dash + 1));
  }

  const auto chop = [&](std::size_t n, std::string_view add = {}) {
    std::string out = std::string(word.substr(0, word.size() - n)) + std::string(add);
    // "criterias" -> "criteria" would not be a fixed point
    if (auto it = irregular.find(out); it != irregular.end()) out = it->second;
    return out;
  };
  if (ends_with(word, "ss") || ends_with(word, "us") || ends_with(word, "is")) return std::string(word);
  if (!ends_with(word, "s")) return std::string(word);
  if (ends_with(word, "ies") && word.size() > 4) return chop(3, "y");
  if (ends_with(word, "yses") || ends_with(word, "eses") || ends_with(word, "oses")) return chop(2, "is");
  if (ends_with(word, "sses") || ends_with(word, "xes") || ends_with(word, "zzes") ||
      ends_with(word, "shes") || ends_with(word, "oes")) {
    return chop(2);
  }
  if (ends_with(word, "ches")) {
    const bool ache = ends_with(word, "aches") && !ends_with(word, "oaches") && !ends_with(word, "eaches");
    return ache ? chop(1) : chop(2);
  }
  return chop(1);
}

inline std::string canonicalize_phrase(std::string_view phrase) {
  auto words = split_words(to_lower(phrase));
  if (words.empty()) return {};
  words.back() = singularize_word(words.back());
  return join(words, " ");
}

}  // namespace termscape

#endif
