#ifndef TERMSCAPE_COOCCUR_HPP
#define TERMSCAPE_COOCCUR_HPP

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "termscape/corpus.hpp"
#include "termscape/error.hpp"
#include "termscape/terms.hpp"

namespace termscape {

struct CountEntry {
  std::uint32_t i = 0;
  std::uint32_t j = 0;  // i < j
  std::int64_t count = 0;

  bool operator==(const CountEntry&) const = default;
};

// Publication-level co-occurrence counts. Rows are the terms in alphabetical
// order; only pairs with a nonzero count are stored.
struct CooccurrenceMatrix {
  std::vector<std::string> terms;
  std::vector<std::int64_t> occ;
  std::vector<CountEntry> counts;  // sorted by (i, j)

  std::size_t n() const { return terms.size(); }

  std::int64_t at(std::size_t i, std::size_t j) const {
    if (i == j) return 0;
    if (i > j) std::swap(i, j);
    auto it = std::lower_bound(counts.begin(), counts.end(), std::pair{i, j},
                               [](const CountEntry& e, const std::pair<std::size_t, std::size_t>& key) {
                                 return std::pair<std::size_t, std::size_t>{e.i, e.j} < key;
                               });
    return (it != counts.end() && it->i == i && it->j == j) ? it->count : 0;
  }

  // Terms that co-occur with nothing.
  std::vector<bool> isolated() const {
    std::vector<bool> iso(n(), true);
    for (const auto& e : counts) iso[e.i] = iso[e.j] = false;
    return iso;
  }

  bool operator==(const CooccurrenceMatrix&) const = default;
};

struct SimilarityEntry {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double value = 0.0;
};

struct SimilarityMatrix {
  std::vector<std::string> terms;
  std::vector<SimilarityEntry> entries;  // i < j, value > 0, sorted by (i, j)

  std::size_t n() const { return terms.size(); }
};

inline CooccurrenceMatrix build_matrix(const Corpus& corpus, const TermSet& set) {
  std::unordered_map<std::string_view, std::uint32_t> pub_index;
  for (std::size_t p = 0; p < corpus.size(); ++p) {
    pub_index.emplace(corpus.publications[p].id, static_cast<std::uint32_t>(p));
  }

  std::vector<const Term*> sorted;
  for (const auto& t : set.terms) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(), [](const Term* a, const Term* b) { return a->canonical < b->canonical; });

  CooccurrenceMatrix m;
  std::vector<std::vector<std::uint32_t>> pub_terms(corpus.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i]->canonical == sorted[i - 1]->canonical) {
      throw InputError("term '" + sorted[i]->canonical + "' appears twice in the term set");
    }
    m.terms.push_back(sorted[i]->canonical);
    m.occ.push_back(static_cast<std::int64_t>(sorted[i]->occ_count()));
    for (const auto& id : sorted[i]->pubs) {
      auto it = pub_index.find(id);
      if (it == pub_index.end()) {
        throw InputError("term '" + sorted[i]->canonical + "' references publication '" + id +
                         "' which is not in the corpus");
      }
      auto& list = pub_terms[it->second];
      // a repeated id inside one term's list still counts once
      if (list.empty() || list.back() != i) list.push_back(static_cast<std::uint32_t>(i));
    }
  }

  std::unordered_map<std::uint64_t, std::int64_t> pairs;
  for (const auto& list : pub_terms) {
    for (std::size_t a = 0; a < list.size(); ++a) {
      for (std::size_t b = a + 1; b < list.size(); ++b) {
        ++pairs[(static_cast<std::uint64_t>(list[a]) << 32) | list[b]];
      }
    }
  }
  m.counts.reserve(pairs.size());
  for (const auto& [key, count] : pairs) {
    m.counts.push_back({static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key & 0xFFFFFFFFu), count});
  }
  std::sort(m.counts.begin(), m.counts.end(),
            [](const CountEntry& a, const CountEntry& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  return m;
}

// s_ij = c_ij / (n_i * n_j)
inline SimilarityMatrix association_strength(const CooccurrenceMatrix& m) {
  for (std::size_t i = 0; i < m.n(); ++i) {
    if (m.occ[i] < 1) throw StageError("term '" + m.terms[i] + "' has a zero occurrence count");
  }
  SimilarityMatrix s;
  s.terms = m.terms;
  s.entries.reserve(m.counts.size());
  for (const auto& e : m.counts) {
    s.entries.push_back({e.i, e.j,
                         static_cast<double>(e.count) /
                             (static_cast<double>(m.occ[e.i]) * static_cast<double>(m.occ[e.j]))});
  }
  return s;
}

// "n <n>" then one "i j c_ij" line per nonzero pair, i < j, sorted.
inline std::string write_matrix_dump(const CooccurrenceMatrix& m) {
  std::string out = "n " + std::to_string(m.n()) + "\n";
  for (const auto& e : m.counts) {
    out += std::to_string(e.i) + ' ' + std::to_string(e.j) + ' ' + std::to_string(e.count) + '\n';
  }
  return out;
}

// The dump holds counts only; term names and occurrence counts come from the
// term set it was built from.
inline CooccurrenceMatrix read_matrix_dump(const std::string& text, const TermSet& set,
                                           const std::string& what) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  CooccurrenceMatrix m;
  std::size_t n = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::istringstream fields(line);
    const auto fail = [&](const std::string& msg) {
      throw InputError(what + ":" + std::to_string(line_no) + ": " + msg);
    };
    if (!have_header) {
      std::string tag;
      if (!(fields >> tag >> n) || tag != "n") fail("expected header 'n <count>'");
      have_header = true;
      continue;
    }
    long long i = -1, j = -1, c = -1;
    if (!(fields >> i >> j >> c)) fail("expected 'i j count'");
    if (i < 0 || j <= i || static_cast<std::size_t>(j) >= n || c < 1) fail("invalid triplet");
    CountEntry e{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), c};
    if (!m.counts.empty() && std::pair{m.counts.back().i, m.counts.back().j} >= std::pair{e.i, e.j}) {
      fail("triplets are not strictly sorted");
    }
    m.counts.push_back(e);
  }
  if (!have_header) throw InputError(what + ": missing 'n' header");
  if (n != set.terms.size()) {
    throw InputError(what + ": matrix has " + std::to_string(n) + " rows but the term set has " +
                     std::to_string(set.terms.size()) + " terms");
  }
  std::vector<const Term*> sorted;
  for (const auto& t : set.terms) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(), [](const Term* a, const Term* b) { return a->canonical < b->canonical; });
  for (const Term* t : sorted) {
    m.terms.push_back(t->canonical);
    m.occ.push_back(static_cast<std::int64_t>(t->occ_count()));
  }
  for (const auto& e : m.counts) {
    if (e.count > std::min(m.occ[e.i], m.occ[e.j])) {
      throw InputError(what + ": count for pair (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                       ") exceeds an occurrence count");
    }
  }
  return m;
}

}  // namespace termscape

#endif
