#ifndef TERMSCAPE_TERMS_HPP
#define TERMSCAPE_TERMS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "termscape/corpus.hpp"
#include "termscape/json_io.hpp"
#include "termscape/text.hpp"

namespace termscape {

// A noun phrase and the publications (ids, in corpus order) whose title or
// abstract contains it at least once.
struct TermCandidate {
  std::string canonical;
  std::vector<std::string> pubs;

  std::size_t occ_count() const { return pubs.size(); }
  bool operator==(const TermCandidate&) const = default;
};

struct Term {
  std::string canonical;
  std::vector<std::string> pubs;
  double relevance = 0.0;

  std::size_t occ_count() const { return pubs.size(); }
  bool operator==(const Term&) const = default;
};

struct ScoredCandidates {
  std::vector<Term> items;
  int min_occ = 1;
};

struct TermSet {
  std::vector<Term> terms;  // descending relevance, then occ_count, then canonical
  int min_occ = 1;
  int k = 0;

  bool operator==(const TermSet&) const = default;
};

// max(10, round(|corpus| / 1000))
inline int default_min_occ(std::size_t corpus_size) {
  return std::max(10, static_cast<int>(std::lround(static_cast<double>(corpus_size) / 1000.0)));
}

inline constexpr int kDefaultTermCount = 2000;

// Distinct canonical phrases of one publication (title, boundary, abstract).
inline std::set<std::string> publication_phrases(const Publication& pub, const Lexicon& lexicon) {
  auto tokens = tokenize(pub.title);
  if (pub.abstract) {
    if (!tokens.empty() && tokens.back() != kBoundary) tokens.emplace_back(kBoundary);
    auto rest = tokenize(*pub.abstract);
    tokens.insert(tokens.end(), std::make_move_iterator(rest.begin()),
                  std::make_move_iterator(rest.end()));
  }
  std::set<std::string> phrases;
  for (const auto& phrase : chunk_noun_phrases(pos_tag(tokens, lexicon))) {
    phrases.insert(canonicalize_phrase(phrase));
  }
  return phrases;
}

// Candidates sorted by canonical string. Occurrence is binary per publication.
inline std::vector<TermCandidate> extract_candidates(const Corpus& corpus, const Lexicon& lexicon) {
  std::map<std::string, std::vector<std::string>> index;
  for (const auto& pub : corpus.publications) {
    for (const auto& phrase : publication_phrases(pub, lexicon)) index[phrase].push_back(pub.id);
  }
  std::vector<TermCandidate> out;
  out.reserve(index.size());
  for (auto& [phrase, pubs] : index) out.push_back({phrase, std::move(pubs)});
  return out;
}

namespace detail {

// Publication ids -> dense indices, in first-seen order over the term list.
inline std::vector<std::vector<std::uint32_t>> pubs_as_indices(const std::vector<Term>& terms,
                                                               std::size_t& n_pubs) {
  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<std::vector<std::uint32_t>> out(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    for (const auto& id : terms[t].pubs) {
      auto [it, inserted] = ids.emplace(id, static_cast<std::uint32_t>(ids.size()));
      out[t].push_back(it->second);
    }
  }
  n_pubs = ids.size();
  return out;
}

}  // namespace detail

// Keeps candidates with occ_count >= min_occ and scores each survivor t by
// D(P_t || Q_t), where P_t is t's co-occurrence profile over the other
// survivors and Q_t their occurrence profile (both renormalized without t).
// A general term co-occurs with everything in proportion to its frequency and
// scores near 0.
inline ScoredCandidates relevance_scores(const std::vector<TermCandidate>& candidates, int min_occ) {
  if (min_occ < 1) throw ConfigError("min_occ must be >= 1");
  ScoredCandidates scored;
  scored.min_occ = min_occ;
  for (const auto& c : candidates) {
    if (c.occ_count() >= static_cast<std::size_t>(min_occ)) scored.items.push_back({c.canonical, c.pubs, 0.0});
  }
  auto& terms = scored.items;
  const std::size_t n = terms.size();
  if (n == 0) return scored;

  std::size_t n_pubs = 0;
  const auto term_pubs = detail::pubs_as_indices(terms, n_pubs);
  std::vector<std::vector<std::uint32_t>> pub_terms(n_pubs);
  double total_occ = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    for (auto p : term_pubs[t]) pub_terms[p].push_back(static_cast<std::uint32_t>(t));
    total_occ += static_cast<double>(term_pubs[t].size());
  }

  // sum in canonical order so the result does not depend on input order
  std::vector<std::uint32_t> rank(n);
  {
    std::vector<std::uint32_t> order(n);
    for (std::uint32_t t = 0; t < n; ++t) order[t] = t;
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return terms[a].canonical < terms[b].canonical; });
    for (std::uint32_t r = 0; r < n; ++r) rank[order[r]] = r;
  }
  std::vector<std::uint32_t> counts(n, 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t t = 0; t < n; ++t) {
    touched.clear();
    for (auto p : term_pubs[t]) {
      for (auto c : pub_terms[p]) {
        if (c == t) continue;
        if (counts[c]++ == 0) touched.push_back(c);
      }
    }
    std::sort(touched.begin(), touched.end(), [&](auto a, auto b) { return rank[a] < rank[b]; });
    std::uint64_t co_total = 0;
    for (auto c : touched) co_total += counts[c];
    double kl = 0.0;
    if (co_total > 0) {
      const double p_norm = static_cast<double>(co_total);
      const double q_norm = total_occ - static_cast<double>(term_pubs[t].size());
      for (auto c : touched) {
        const double p = static_cast<double>(counts[c]) / p_norm;
        const double q = static_cast<double>(term_pubs[c].size()) / q_norm;
        kl += p * std::log(p / q);
      }
    }
    for (auto c : touched) counts[c] = 0;
    terms[t].relevance = std::max(0.0, kl);
  }
  return scored;
}

inline bool term_order(const Term& a, const Term& b) {
  if (a.relevance != b.relevance) return a.relevance > b.relevance;
  if (a.occ_count() != b.occ_count()) return a.occ_count() > b.occ_count();
  return a.canonical < b.canonical;
}

// Drops any candidate whose publication set equals that of a longer candidate
// ending in it ("infarction" inside "myocardial infarction"), then keeps the
// top k in term_order.
inline TermSet select_terms(const ScoredCandidates& scored, int k) {
  if (k < 1) throw ConfigError("k must be >= 1");
  const auto& items = scored.items;
  std::unordered_map<std::string_view, std::size_t> by_name;
  for (std::size_t i = 0; i < items.size(); ++i) by_name.emplace(items[i].canonical, i);

  std::vector<bool> subsumed(items.size(), false);
  for (const auto& longer : items) {
    const std::string_view name = longer.canonical;
    for (std::size_t pos = name.find(' '); pos != std::string_view::npos; pos = name.find(' ', pos + 1)) {
      auto it = by_name.find(name.substr(pos + 1));
      if (it == by_name.end()) continue;
      // pub lists are in corpus order, so set equality is sequence equality
      if (items[it->second].pubs == longer.pubs) subsumed[it->second] = true;
    }
  }

  TermSet set;
  set.min_occ = scored.min_occ;
  set.k = k;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!subsumed[i]) set.terms.push_back(items[i]);
  }
  std::sort(set.terms.begin(), set.terms.end(), term_order);
  if (set.terms.size() > static_cast<std::size_t>(k)) set.terms.resize(static_cast<std::size_t>(k));
  return set;
}

// ---------------------------------------------------------------------------
// Interchange files

inline constexpr const char* kCandidatesSchema = "candidates/1";
inline constexpr const char* kTermsSchema = "terms/1";

inline std::string write_candidates(const std::vector<TermCandidate>& candidates, std::size_t corpus_size) {
  std::string out = canonical_json(json{{"schema", kCandidatesSchema},
                                        {"corpus_size", corpus_size},
                                        {"count", candidates.size()}}) +
                    "\n";
  for (const auto& c : candidates) {
    out += canonical_json(json{{"term", c.canonical}, {"occ_count", c.occ_count()}, {"pubs", c.pubs}});
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<json> read_jsonl_with_header(const std::string& text, const char* schema,
                                                const std::string& what, json& header) {
  std::vector<json> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error&) {
      throw InputError(what + ":" + std::to_string(line_no) + ": invalid JSON");
    }
    if (!have_header) {
      check_schema(row, schema, what);
      header = std::move(row);
      have_header = true;
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw InputError(what + ": empty file (expected a '" + std::string(schema) + "' header)");
  return rows;
}

}  // namespace detail

inline std::vector<TermCandidate> read_candidates(const std::string& text, const std::string& what,
                                                  std::size_t* corpus_size = nullptr) {
  json header;
  auto rows = detail::read_jsonl_with_header(text, kCandidatesSchema, what, header);
  std::vector<TermCandidate> out;
  try {
    if (corpus_size) *corpus_size = header.at("corpus_size").get<std::size_t>();
    for (const auto& row : rows) {
      TermCandidate c{row.at("term").get<std::string>(), row.at("pubs").get<std::vector<std::string>>()};
      if (c.pubs.empty()) throw InputError(what + ": candidate '" + c.canonical + "' has no publications");
      out.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw InputError(what + ": " + e.what());
  }
  return out;
}

inline std::string write_term_set(const TermSet& set) {
  std::string out = canonical_json(json{{"schema", kTermsSchema},
                                        {"k", set.k},
                                        {"min_occ", set.min_occ},
                                        {"count", set.terms.size()}}) +
                    "\n";
  for (const auto& t : set.terms) {
    out += canonical_json(json{{"term", t.canonical},
                               {"occ_count", t.occ_count()},
                               {"relevance", t.relevance},
                               {"pubs", t.pubs}});
    out += '\n';
  }
  return out;
}

inline TermSet read_term_set(const std::string& text, const std::string& what) {
  json header;
  auto rows = detail::read_jsonl_with_header(text, kTermsSchema, what, header);
  TermSet set;
  try {
    set.k = header.at("k").get<int>();
    set.min_occ = header.at("min_occ").get<int>();
    for (const auto& row : rows) {
      Term t{row.at("term").get<std::string>(), row.at("pubs").get<std::vector<std::string>>(),
             row.at("relevance").get<double>()};
      if (t.pubs.empty()) throw InputError(what + ": term '" + t.canonical + "' has no publications");
      set.terms.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw InputError(what + ": " + e.what());
  }
  return set;
}

// Audit listing of every scored candidate, alphabetical.
inline std::string write_term_audit(const ScoredCandidates& scored, const TermSet& selected) {
  std::set<std::string_view> chosen;
  for (const auto& t : selected.terms) chosen.insert(t.canonical);
  std::vector<const Term*> rows;
  for (const auto& t : scored.items) rows.push_back(&t);
  std::sort(rows.begin(), rows.end(), [](const Term* a, const Term* b) { return a->canonical < b->canonical; });
  std::string out;
  for (const Term* t : rows) {
    out += canonical_json(json{{"term", t->canonical},
                               {"occ_count", t->occ_count()},
                               {"relevance", t->relevance},
                               {"selected", chosen.count(t->canonical) > 0}});
    out += '\n';
  }
  return out;
}

}  // namespace termscape

#endif
