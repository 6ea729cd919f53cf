#ifndef TERMSCAPE_IMPACT_HPP
#define TERMSCAPE_IMPACT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "termscape/corpus.hpp"
#include "termscape/layout.hpp"
#include "termscape/terms.hpp"

namespace termscape {

// Year-normalized citation scores. Integer per-year citation sums and counts
// are kept so downstream averages can be formed from exact integer sums.
struct CitationNormalization {
  struct PubRecord {
    int year = 0;
    std::int64_t citations = 0;
  };

  std::unordered_map<std::string, PubRecord> pubs;
  std::map<int, std::int64_t> year_count;
  std::map<int, std::int64_t> year_citations;
  std::set<int> zero_mean_years;

  // c * N_y / C_y, or 0 in a year without citations
  double score(const std::string& id) const {
    auto it = pubs.find(id);
    if (it == pubs.end()) throw InputError("no citation record for publication '" + id + "'");
    return ratio(it->second.citations, it->second.year);
  }

  double ratio(std::int64_t citations, int year) const {
    const std::int64_t total = year_citations.at(year);
    if (total == 0) return 0.0;
    const __int128 numerator = static_cast<__int128>(citations) * year_count.at(year);
    return static_cast<double>(numerator) / static_cast<double>(total);
  }
};

inline CitationNormalization normalize_citations(const Corpus& corpus) {
  CitationNormalization norm;
  for (const auto& pub : corpus.publications) {
    norm.pubs[pub.id] = {pub.year, pub.citations};
    ++norm.year_count[pub.year];
    norm.year_citations[pub.year] += pub.citations;
  }
  for (const auto& [year, total] : norm.year_citations) {
    if (total == 0) norm.zero_mean_years.insert(year);
  }
  return norm;
}

// Per-publication scores keyed by id.
inline std::map<std::string, double> publication_scores(const CitationNormalization& norm) {
  std::map<std::string, double> out;
  for (const auto& [id, rec] : norm.pubs) out[id] = norm.ratio(rec.citations, rec.year);
  return out;
}

// Mean normalized score over each term's publications: citation sums are
// accumulated per year as integers, then combined in ascending year order.
inline std::map<std::string, double> term_scores(const TermSet& set, const CitationNormalization& norm) {
  std::map<std::string, double> out;
  for (const auto& term : set.terms) {
    if (term.pubs.empty()) throw StageError("term '" + term.canonical + "' has no publications");
    std::map<int, std::int64_t> per_year;
    for (const auto& id : term.pubs) {
      auto it = norm.pubs.find(id);
      if (it == norm.pubs.end()) {
        throw InputError("term '" + term.canonical + "' references unknown publication '" + id + "'");
      }
      per_year[it->second.year] += it->second.citations;
    }
    double sum = 0.0;
    for (const auto& [year, citations] : per_year) sum += norm.ratio(citations, year);
    out[term.canonical] = sum / static_cast<double>(term.pubs.size());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Color scale

struct Rgb {
  int r = 0, g = 0, b = 0;

  bool operator==(const Rgb&) const = default;
};

inline std::string to_hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", c.r, c.g, c.b);
  return buf;
}

inline Rgb parse_hex(std::string_view hex) {
  const auto digit = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ConfigError("invalid hex color digit");
  };
  if (hex.size() != 7 || hex[0] != '#') throw ConfigError("color must be '#RRGGBB'");
  return {digit(hex[1]) * 16 + digit(hex[2]), digit(hex[3]) * 16 + digit(hex[4]),
          digit(hex[5]) * 16 + digit(hex[6])};
}

struct ColorAnchor {
  double score = 0.0;
  Rgb color;
};

struct ColorScale {
  std::vector<ColorAnchor> anchors;

  // blue 0, green 1, yellow 1.25, orange 1.5, red 2
  static ColorScale standard() {
    return ColorScale{{{0.0, {0, 0, 255}},
                       {1.0, {0, 200, 0}},
                       {1.25, {255, 255, 0}},
                       {1.5, {255, 165, 0}},
                       {2.0, {255, 0, 0}}}};
  }

  void validate() const {
    if (anchors.size() < 2) throw ConfigError("color scale needs at least two anchors");
    if (anchors.front().score != 0.0 || anchors.back().score != 2.0) {
      throw ConfigError("color scale must start at score 0 and end at score 2");
    }
    for (std::size_t k = 1; k < anchors.size(); ++k) {
      if (!(anchors[k].score > anchors[k - 1].score)) {
        throw ConfigError("color anchor scores must be strictly increasing");
      }
    }
    for (const auto& a : anchors) {
      for (int c : {a.color.r, a.color.g, a.color.b}) {
        if (c < 0 || c > 255) throw ConfigError("color channel outside [0, 255]");
      }
    }
  }
};

// Position inside the scale: segment index and interpolation parameter.
struct ScalePosition {
  std::size_t segment = 0;
  double t = 0.0;
};

inline ScalePosition locate(double score, const ColorScale& scale) {
  if (!(score >= 0.0)) throw std::invalid_argument("color_for: negative score");
  const auto& a = scale.anchors;
  const double s = std::min(score, a.back().score);
  std::size_t k = 0;
  while (k + 2 < a.size() && s >= a[k + 1].score) ++k;
  return {k, (s - a[k].score) / (a[k + 1].score - a[k].score)};
}

inline Rgb color_for(double score, const ColorScale& scale) {
  const auto [k, t] = locate(score, scale);
  const Rgb lo = scale.anchors[k].color;
  const Rgb hi = scale.anchors[k + 1].color;
  const auto mix = [t = t](int a, int b) {
    return static_cast<int>(std::lround(static_cast<double>(a) + t * static_cast<double>(b - a)));
  };
  return {mix(lo.r, hi.r), mix(lo.g, hi.g), mix(lo.b, hi.b)};
}

inline json color_scale_to_json(const ColorScale& scale) {
  json anchors = json::array();
  for (const auto& a : scale.anchors) anchors.push_back({{"score", a.score}, {"color", to_hex(a.color)}});
  return anchors;
}

inline ColorScale color_scale_from_json(const json& anchors) {
  ColorScale scale;
  try {
    for (const auto& a : anchors) {
      scale.anchors.push_back({a.at("score").get<double>(), parse_hex(a.at("color").get<std::string>())});
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed color anchors: ") + e.what());
  }
  scale.validate();
  return scale;
}

// ---------------------------------------------------------------------------
// Scores file

inline constexpr const char* kScoresSchema = "scores/1";

inline std::string write_scores(const std::map<std::string, double>& scores, const ColorScale& scale) {
  std::string out = canonical_json(json{{"schema", kScoresSchema}, {"count", scores.size()}}) + "\n";
  for (const auto& [term, score] : scores) {
    out += canonical_json(json{{"term", term}, {"score", score}, {"color", to_hex(color_for(score, scale))}});
    out += '\n';
  }
  return out;
}

inline std::map<std::string, double> read_scores(const std::string& text, const std::string& what) {
  json header;
  auto rows = detail::read_jsonl_with_header(text, kScoresSchema, what, header);
  std::map<std::string, double> out;
  try {
    for (const auto& row : rows) out[row.at("term").get<std::string>()] = row.at("score").get<double>();
  } catch (const json::exception& e) {
    throw InputError(what + ": " + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Heterogeneity report

struct ScoredTerm {
  std::string term;
  double score = 0.0;
};

struct HeterogeneityReport {
  std::vector<ScoredTerm> highest;  // descending score
  std::vector<ScoredTerm> lowest;   // ascending score
  double p10 = 0.0;
  double p90 = 0.0;
  double percentile_ratio = 0.0;  // +inf when p10 is 0
  std::size_t decile_size = 0;
  Point top_centroid;
  Point bottom_centroid;
  double centroid_distance = 0.0;
  std::size_t n_terms = 0;
};

// Linear interpolation between order statistics at rank (n - 1) * q.
inline double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

// Extremes, P90/P10 and the distance between the score-weighted centroids of
// the top and bottom deciles (ceil(n / 10) terms each).
inline HeterogeneityReport heterogeneity_report(const std::map<std::string, double>& scores,
                                                const Positions& positions, int k_extremes) {
  if (k_extremes < 1) throw ConfigError("k_extremes must be >= 1");
  const std::size_t n = scores.size();
  if (n < 2 * static_cast<std::size_t>(k_extremes)) {
    throw StageError("heterogeneity report needs at least " + std::to_string(2 * k_extremes) + " terms, got " +
                     std::to_string(n));
  }
  std::unordered_map<std::string_view, Point> where;
  for (std::size_t i = 0; i < positions.terms.size(); ++i) where[positions.terms[i]] = positions.coords[i];

  std::vector<ScoredTerm> ranked;
  for (const auto& [term, score] : scores) ranked.push_back({term, score});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const ScoredTerm& a, const ScoredTerm& b) { return a.score > b.score; });

  HeterogeneityReport rep;
  rep.n_terms = n;
  const auto k = static_cast<std::size_t>(k_extremes);
  rep.highest.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<ScoredTerm> ascending = ranked;
  std::stable_sort(ascending.begin(), ascending.end(),
                   [](const ScoredTerm& a, const ScoredTerm& b) { return a.score < b.score; });
  rep.lowest.assign(ascending.begin(), ascending.begin() + static_cast<std::ptrdiff_t>(k));

  std::vector<double> values;
  for (const auto& t : ranked) values.push_back(t.score);
  rep.p10 = percentile(values, 0.10);
  rep.p90 = percentile(values, 0.90);
  rep.percentile_ratio = rep.p10 > 0.0 ? rep.p90 / rep.p10 : std::numeric_limits<double>::infinity();
  if (rep.p10 == 0.0 && rep.p90 == 0.0) rep.percentile_ratio = 1.0;

  rep.decile_size = (n + 9) / 10;
  const auto centroid = [&](const std::vector<ScoredTerm>& list) {
    Point c;
    double weight = 0.0;
    for (std::size_t i = 0; i < rep.decile_size; ++i) weight += list[i].score;
    for (std::size_t i = 0; i < rep.decile_size; ++i) {
      auto it = where.find(list[i].term);
      if (it == where.end()) throw InputError("term '" + list[i].term + "' has no map position");
      const double w = weight > 0.0 ? list[i].score / weight : 1.0 / static_cast<double>(rep.decile_size);
      c.x += w * it->second.x;
      c.y += w * it->second.y;
    }
    return c;
  };
  rep.top_centroid = centroid(ranked);
  rep.bottom_centroid = centroid(ascending);
  rep.centroid_distance = distance(rep.top_centroid, rep.bottom_centroid);
  return rep;
}

inline json heterogeneity_to_json(const HeterogeneityReport& rep) {
  const auto list = [](const std::vector<ScoredTerm>& terms) {
    json arr = json::array();
    for (const auto& t : terms) arr.push_back({{"term", t.term}, {"score", t.score}});
    return arr;
  };
  return json{{"schema", "heterogeneity/1"},
              {"n_terms", rep.n_terms},
              {"highest", list(rep.highest)},
              {"lowest", list(rep.lowest)},
              {"p10", rep.p10},
              {"p90", rep.p90},
              {"percentile_ratio",
               std::isfinite(rep.percentile_ratio) ? json(rep.percentile_ratio) : json(nullptr)},
              {"decile_size", rep.decile_size},
              {"top_decile_centroid", {rep.top_centroid.x, rep.top_centroid.y}},
              {"bottom_decile_centroid", {rep.bottom_centroid.x, rep.bottom_centroid.y}},
              {"centroid_distance", rep.centroid_distance}};
}

inline std::string heterogeneity_to_text(const HeterogeneityReport& rep) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "terms: %zu\n", rep.n_terms);
  out += line;
  out += "highest-scoring terms:\n";
  for (const auto& t : rep.highest) {
    std::snprintf(line, sizeof line, "  %8.4f  %s\n", t.score, t.term.c_str());
    out += line;
  }
  out += "lowest-scoring terms:\n";
  for (const auto& t : rep.lowest) {
    std::snprintf(line, sizeof line, "  %8.4f  %s\n", t.score, t.term.c_str());
    out += line;
  }
  std::snprintf(line, sizeof line, "P10 = %.4f, P90 = %.4f, P90/P10 = ", rep.p10, rep.p90);
  out += line;
  if (std::isfinite(rep.percentile_ratio)) {
    std::snprintf(line, sizeof line, "%.4f\n", rep.percentile_ratio);
    out += line;
  } else {
    out += "inf\n";
  }
  std::snprintf(line, sizeof line, "top/bottom decile (%zu terms each) centroid distance: %.4f\n",
                rep.decile_size, rep.centroid_distance);
  out += line;
  return out;
}

}  // namespace termscape

#endif
