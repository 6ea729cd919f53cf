// Shared helpers for the test suites: random inputs and brute-force oracles.
// The oracles deliberately share no code with the library beyond the plain
// data types.
#ifndef TERMSCAPE_TESTS_SUPPORT_HPP
#define TERMSCAPE_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "termscape/termscape.hpp"

namespace testing_support {

namespace ts = termscape;

inline std::string data_path(const std::string& name) { return std::string(TERMSCAPE_TEST_DATA) + "/" + name; }

// Fresh, empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::path(TERMSCAPE_SCRATCH) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct RandomInstance {
  ts::Corpus corpus;
  ts::TermSet terms;
};

// Random corpus plus a term set whose occurrence sets are random subsets of
// the publications (no text involved). Every term occurs at least once.
inline RandomInstance random_instance(std::mt19937_64& rng, int max_pubs = 50, int max_terms = 20) {
  RandomInstance inst;
  const int n_pubs = std::uniform_int_distribution<int>(1, max_pubs)(rng);
  const int n_terms = std::uniform_int_distribution<int>(1, max_terms)(rng);
  std::uniform_int_distribution<int> year(2006, 2010);
  std::uniform_int_distribution<int> cites(0, 40);
  inst.corpus.year_range = {2006, 2010};
  inst.corpus.doc_types_kept = {"article"};
  for (int p = 0; p < n_pubs; ++p) {
    ts::Publication pub;
    pub.id = "p" + std::to_string(p);
    pub.title = "title " + std::to_string(p);
    pub.year = year(rng);
    pub.citations = rng() % 5 == 0 ? 0 : cites(rng);
    pub.doc_type = "article";
    inst.corpus.publications.push_back(pub);
  }
  const double density = std::uniform_real_distribution<double>(0.05, 0.6)(rng);
  std::bernoulli_distribution member(density);
  for (int t = 0; t < n_terms; ++t) {
    ts::Term term;
    term.canonical = "term" + std::to_string(t);
    for (const auto& pub : inst.corpus.publications) {
      if (member(rng)) term.pubs.push_back(pub.id);
    }
    if (term.pubs.empty()) term.pubs.push_back(inst.corpus.publications[rng() % n_pubs].id);
    inst.terms.terms.push_back(std::move(term));
  }
  inst.terms.k = n_terms;
  inst.terms.min_occ = 1;
  return inst;
}

// ---------------------------------------------------------------------------
// Oracles

// c(a, b) by a double loop over publications and linear membership scans.
inline std::int64_t brute_cooccurrence(const ts::Corpus& corpus, const ts::Term& a, const ts::Term& b) {
  std::int64_t c = 0;
  for (const auto& pub : corpus.publications) {
    const bool in_a = std::find(a.pubs.begin(), a.pubs.end(), pub.id) != a.pubs.end();
    const bool in_b = std::find(b.pubs.begin(), b.pubs.end(), pub.id) != b.pubs.end();
    if (in_a && in_b) ++c;
  }
  return c;
}

inline std::int64_t brute_occurrence(const ts::Corpus& corpus, const ts::Term& a) {
  std::int64_t n = 0;
  for (const auto& pub : corpus.publications) {
    if (std::find(a.pubs.begin(), a.pubs.end(), pub.id) != a.pubs.end()) ++n;
  }
  return n;
}

struct YearTally {
  std::int64_t count = 0;
  std::int64_t citations = 0;
};

inline std::map<int, YearTally> brute_year_tallies(const ts::Corpus& corpus) {
  std::map<int, YearTally> out;
  for (int year = 1000; year <= 9999; ++year) {
    YearTally t;
    for (const auto& pub : corpus.publications) {
      if (pub.year == year) {
        ++t.count;
        t.citations += pub.citations;
      }
    }
    if (t.count > 0) out[year] = t;
  }
  return out;
}

// Publication score c / mean(year), straight from the definition.
inline double brute_pub_score(const ts::Corpus& corpus, const std::string& id) {
  const ts::Publication* target = nullptr;
  for (const auto& pub : corpus.publications) {
    if (pub.id == id) target = &pub;
  }
  double sum = 0.0;
  int count = 0;
  for (const auto& pub : corpus.publications) {
    if (pub.year == target->year) {
      sum += static_cast<double>(pub.citations);
      ++count;
    }
  }
  const double mean = sum / count;
  return mean == 0.0 ? 0.0 : static_cast<double>(target->citations) / mean;
}

inline double brute_term_score(const ts::Corpus& corpus, const ts::Term& term) {
  double sum = 0.0;
  for (const auto& id : term.pubs) sum += brute_pub_score(corpus, id);
  return sum / static_cast<double>(term.pubs.size());
}

// KL relevance over a set of occurrence lists, computed with maps and no
// shortcuts.
inline double brute_relevance(const std::vector<std::set<std::string>>& pubs, std::size_t t) {
  double total_occ = 0.0;
  for (std::size_t c = 0; c < pubs.size(); ++c) {
    if (c != t) total_occ += static_cast<double>(pubs[c].size());
  }
  std::vector<double> co(pubs.size(), 0.0);
  double co_total = 0.0;
  for (std::size_t c = 0; c < pubs.size(); ++c) {
    if (c == t) continue;
    for (const auto& id : pubs[c]) co[c] += pubs[t].count(id) ? 1.0 : 0.0;
    co_total += co[c];
  }
  if (co_total == 0.0) return 0.0;
  double kl = 0.0;
  for (std::size_t c = 0; c < pubs.size(); ++c) {
    if (c == t || co[c] == 0.0) continue;
    const double p = co[c] / co_total;
    const double q = static_cast<double>(pubs[c].size()) / total_occ;
    kl += p * std::log(p / q);
  }
  return kl;
}

// Dense similarity matrix from a sparse one.
inline std::vector<std::vector<double>> dense(const ts::SimilarityMatrix& s) {
  std::vector<std::vector<double>> d(s.n(), std::vector<double>(s.n(), 0.0));
  for (const auto& e : s.entries) d[e.i][e.j] = d[e.j][e.i] = e.value;
  return d;
}

inline double brute_objective(const std::vector<ts::Point>& x, const std::vector<std::vector<double>>& s) {
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (i < j) v += s[i][j] * (std::pow(x[i].x - x[j].x, 2) + std::pow(x[i].y - x[j].y, 2));
    }
  }
  return v;
}

inline double brute_mean_distance(const std::vector<ts::Point>& x) {
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      sum += std::hypot(x[i].x - x[j].x, x[i].y - x[j].y);
      ++pairs;
    }
  }
  return sum / pairs;
}

// Similarity matrix over named terms from (i, j, value) triples.
inline ts::SimilarityMatrix make_sim(std::vector<std::string> names,
                                     std::vector<std::tuple<int, int, double>> triples) {
  ts::SimilarityMatrix s;
  s.terms = std::move(names);
  for (auto [i, j, v] : triples) {
    if (i > j) std::swap(i, j);
    s.entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), v});
  }
  std::sort(s.entries.begin(), s.entries.end(),
            [](const auto& a, const auto& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  return s;
}

// Connected random similarity matrix: a spanning path plus random extra edges.
inline ts::SimilarityMatrix random_sim(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> w(0.01, 1.0);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("t" + std::to_string(1000 + rng() % 9000) + "_" + std::to_string(i));
  std::set<std::pair<int, int>> seen;
  std::vector<std::tuple<int, int, double>> triples;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int i = 0; i + 1 < n; ++i) {
    auto a = std::min(perm[i], perm[i + 1]), b = std::max(perm[i], perm[i + 1]);
    seen.insert({a, b});
    triples.emplace_back(a, b, w(rng));
  }
  const int extra = static_cast<int>(rng() % static_cast<std::uint64_t>(n * 2 + 1));
  for (int e = 0; e < extra; ++e) {
    int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) continue;
    triples.emplace_back(a, b, w(rng));
  }
  return make_sim(std::move(names), std::move(triples));
}

inline ts::LayoutParams quick_params(std::uint64_t seed = 7) {
  ts::LayoutParams p;
  p.seed = seed;
  p.restarts = 3;
  return p;
}

}  // namespace testing_support

#endif
