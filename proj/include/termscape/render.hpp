#ifndef TERMSCAPE_RENDER_HPP
#define TERMSCAPE_RENDER_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "termscape/impact.hpp"
#include "termscape/layout.hpp"
#include "termscape/terms.hpp"

namespace termscape {

struct MapEntry {
  std::string term;
  double x = 0.0;
  double y = 0.0;
  std::int64_t occ_count = 0;
  double score = 0.0;
  std::string color;  // #RRGGBB

  bool operator==(const MapEntry&) const = default;
};

struct MapMetadata {
  std::size_t corpus_size = 0;
  YearRange year_range;
  int k = 0;
  int min_occ = 0;
  std::uint64_t seed = 0;
  std::string census_note;

  bool operator==(const MapMetadata&) const = default;
};

struct TermMap {
  std::vector<MapEntry> entries;  // alphabetical by term
  MapMetadata metadata;
  ColorScale scale;
};

inline constexpr const char* kTermMapSchema = "termmap/1";

// Joins positions, terms and scores by term name. All three must cover the
// same set of terms.
inline TermMap assemble_map(const Positions& positions, const TermSet& terms,
                            const std::map<std::string, double>& scores, const ColorScale& scale,
                            MapMetadata metadata) {
  scale.validate();
  if (terms.terms.size() < 2) throw StageError("a term map needs at least 2 terms");

  std::map<std::string, const Term*> by_term;
  for (const auto& t : terms.terms) by_term.emplace(t.canonical, &t);
  std::map<std::string, Point> by_position;
  for (std::size_t i = 0; i < positions.terms.size(); ++i) by_position.emplace(positions.terms[i], positions.coords[i]);

  const auto missing = [](const std::string& term, const char* where) {
    throw StageError("term '" + term + "' is missing from the " + std::string(where));
  };
  for (const auto& [term, _] : by_term) {
    if (!by_position.count(term)) missing(term, "layout");
    if (!scores.count(term)) missing(term, "scores");
  }
  for (const auto& [term, _] : by_position) {
    if (!by_term.count(term)) missing(term, "term set");
  }
  for (const auto& [term, _] : scores) {
    if (!by_term.count(term)) missing(term, "term set");
  }
  if (by_term.size() != terms.terms.size() || by_position.size() != positions.terms.size()) {
    throw StageError("duplicate term names in map inputs");
  }

  TermMap map;
  map.metadata = std::move(metadata);
  map.scale = scale;
  for (const auto& [term, t] : by_term) {
    const Point p = by_position.at(term);
    const double score = scores.at(term);
    map.entries.push_back({term, p.x, p.y, static_cast<std::int64_t>(t->occ_count()), score,
                           to_hex(color_for(score, scale))});
  }
  return map;
}

inline json map_to_json(const TermMap& map) {
  json entries = json::array();
  for (const auto& e : map.entries) {
    entries.push_back({{"term", e.term},
                       {"x", e.x},
                       {"y", e.y},
                       {"occ_count", e.occ_count},
                       {"score", e.score},
                       {"color", e.color}});
  }
  const auto& m = map.metadata;
  return json{{"schema", kTermMapSchema},
              {"metadata",
               {{"corpus_size", m.corpus_size},
                {"year_range", {m.year_range.min, m.year_range.max}},
                {"k", m.k},
                {"min_occ", m.min_occ},
                {"seed", m.seed},
                {"census_note", m.census_note}}},
              {"color_scale", color_scale_to_json(map.scale)},
              {"entries", entries}};
}

// Canonical bytes: sorted keys, 17 significant digits, two-space indent, LF.
inline std::string export_map_json(const TermMap& map) { return canonical_json(map_to_json(map), 2) + "\n"; }

inline TermMap parse_map_json(const std::string& text, const std::string& what = "map") {
  const json doc = parse_json_document(text, what);
  check_schema(doc, kTermMapSchema, what);
  TermMap map;
  try {
    const auto& m = doc.at("metadata");
    map.metadata.corpus_size = m.at("corpus_size").get<std::size_t>();
    map.metadata.year_range = {m.at("year_range").at(0).get<int>(), m.at("year_range").at(1).get<int>()};
    map.metadata.k = m.at("k").get<int>();
    map.metadata.min_occ = m.at("min_occ").get<int>();
    map.metadata.seed = m.at("seed").get<std::uint64_t>();
    map.metadata.census_note = m.at("census_note").get<std::string>();
    map.scale = color_scale_from_json(doc.at("color_scale"));
    for (const auto& e : doc.at("entries")) {
      map.entries.push_back({e.at("term").get<std::string>(), e.at("x").get<double>(), e.at("y").get<double>(),
                             e.at("occ_count").get<std::int64_t>(), e.at("score").get<double>(),
                             e.at("color").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw InputError(what + ": " + e.what());
  }
  return map;
}

// ---------------------------------------------------------------------------
// SVG

struct RenderOptions {
  int width = 1200;
  int height = 900;
  double font_exponent = 0.5;
  double font_min = 8.0;
  double font_max = 28.0;
  double radius_min = 2.0;
  double radius_max = 16.0;
  double label_density = 1.0;  // at most ceil(label_density * n) labels
  std::string background = "#FFFFFF";

  void validate() const {
    if (width < 256 || height < 256) throw ConfigError("canvas must be at least 256x256");
    if (!(font_min > 0.0 && font_min < font_max)) throw ConfigError("font bounds need 0 < min < max");
    if (!(radius_min > 0.0 && radius_min <= radius_max)) throw ConfigError("radius bounds need 0 < min <= max");
    if (!(label_density >= 0.0 && label_density <= 1.0)) throw ConfigError("label density must lie in [0, 1]");
    parse_hex(background);
  }
};

struct Box {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  bool intersects(const Box& o) const { return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1; }
};

struct Glyph {
  std::size_t entry = 0;
  double cx = 0.0, cy = 0.0;
  double radius = 0.0;
  double font = 0.0;
  Box label_box;
  bool label_drawn = false;
};

struct RenderPlan {
  double scale = 0.0;  // pixels per map unit
  std::vector<Glyph> glyphs;  // in drawing order: descending occ_count, then term
};

// Screen geometry and label occlusion. The map-to-screen transform is a
// uniform scale plus translation (and a y flip), so screen distances are map
// distances times `scale`.
inline RenderPlan plan_render(const TermMap& map, const RenderOptions& opts) {
  opts.validate();
  const auto& entries = map.entries;
  if (entries.size() < 2) throw StageError("render needs at least 2 map entries");
  double min_x = entries[0].x, max_x = min_x, min_y = entries[0].y, max_y = min_y;
  std::int64_t max_occ = 1;
  for (const auto& e : entries) {
    min_x = std::min(min_x, e.x);
    max_x = std::max(max_x, e.x);
    min_y = std::min(min_y, e.y);
    max_y = std::max(max_y, e.y);
    max_occ = std::max(max_occ, e.occ_count);
  }
  const double ex = max_x - min_x, ey = max_y - min_y;
  if (!(ex > 0.0) && !(ey > 0.0)) throw StageError("render: all terms are at the same position");

  const double usable_w = 0.9 * opts.width, usable_h = 0.9 * opts.height;
  RenderPlan plan;
  plan.scale = std::min(ex > 0.0 ? usable_w / ex : usable_h / ey, ey > 0.0 ? usable_h / ey : usable_w / ex);
  const double mid_x = 0.5 * (min_x + max_x), mid_y = 0.5 * (min_y + max_y);

  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return entries[a].occ_count > entries[b].occ_count; });

  const auto max_labels = static_cast<std::size_t>(std::ceil(opts.label_density * static_cast<double>(entries.size())));
  std::vector<Box> drawn;
  for (auto i : order) {
    const auto& e = entries[i];
    Glyph g;
    g.entry = i;
    g.cx = 0.5 * opts.width + (e.x - mid_x) * plan.scale;
    g.cy = 0.5 * opts.height - (e.y - mid_y) * plan.scale;
    const double rel = static_cast<double>(std::max<std::int64_t>(e.occ_count, 0)) / static_cast<double>(max_occ);
    g.radius = std::clamp(opts.radius_max * std::sqrt(rel), opts.radius_min, opts.radius_max);
    g.font = std::clamp(opts.font_max * std::pow(rel, opts.font_exponent), opts.font_min, opts.font_max);
    const double half_w = 0.3 * g.font * static_cast<double>(utf8_length(e.term));
    const double half_h = 0.5 * g.font;
    g.label_box = {g.cx - half_w, g.cy - half_h, g.cx + half_w, g.cy + half_h};
    if (drawn.size() < max_labels &&
        std::none_of(drawn.begin(), drawn.end(), [&](const Box& b) { return b.intersects(g.label_box); })) {
      g.label_drawn = true;
      drawn.push_back(g.label_box);
    }
    plan.glyphs.push_back(g);
  }
  return plan;
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

}  // namespace detail

inline std::string render_svg(const TermMap& map, const RenderOptions& opts) {
  const RenderPlan plan = plan_render(map, opts);
  const std::string w = std::to_string(opts.width), h = std::to_string(opts.height);
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w + "\" height=\"" + h +
         "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"" + opts.background + "\"/>\n";

  const auto& anchors = map.scale.anchors;
  const double lo = anchors.front().score, hi = anchors.back().score;
  out += "<defs>\n<linearGradient id=\"impact-scale\" x1=\"0\" y1=\"0\" x2=\"1\" y2=\"0\">\n";
  for (const auto& a : anchors) {
    out += "<stop offset=\"" + detail::fixed2((a.score - lo) / (hi - lo)) + "\" stop-color=\"" + to_hex(a.color) +
           "\"/>\n";
  }
  out += "</linearGradient>\n</defs>\n";

  out += "<g id=\"terms\" fill-opacity=\"0.6\">\n";
  for (const auto& g : plan.glyphs) {
    const auto& e = map.entries[g.entry];
    out += "<circle cx=\"" + detail::fixed2(g.cx) + "\" cy=\"" + detail::fixed2(g.cy) + "\" r=\"" +
           detail::fixed2(g.radius) + "\" fill=\"" + e.color + "\"/>\n";
  }
  out += "</g>\n";

  out += "<g id=\"labels\" font-family=\"Arial, Helvetica, sans-serif\" text-anchor=\"middle\" "
         "dominant-baseline=\"central\">\n";
  for (const auto& g : plan.glyphs) {
    if (!g.label_drawn) continue;
    const auto& e = map.entries[g.entry];
    out += "<text x=\"" + detail::fixed2(g.cx) + "\" y=\"" + detail::fixed2(g.cy) + "\" font-size=\"" +
           detail::fixed2(g.font) + "\" fill=\"" + e.color + "\">" + detail::xml_escape(e.term) + "</text>\n";
  }
  out += "</g>\n";

  // color bar in the lower right corner
  const double bar_w = 180.0, bar_h = 12.0;
  const double bar_x = opts.width - bar_w - 24.0, bar_y = opts.height - 44.0;
  out += "<g id=\"legend\" font-family=\"Arial, Helvetica, sans-serif\" font-size=\"11\" text-anchor=\"middle\">\n";
  out += "<rect x=\"" + detail::fixed2(bar_x) + "\" y=\"" + detail::fixed2(bar_y) + "\" width=\"" +
         detail::fixed2(bar_w) + "\" height=\"" + detail::fixed2(bar_h) +
         "\" fill=\"url(#impact-scale)\" stroke=\"#808080\" stroke-width=\"0.5\"/>\n";
  for (double tick : {0.0, 1.0, 2.0}) {
    const double tx = bar_x + bar_w * (tick - lo) / (hi - lo);
    out += "<line x1=\"" + detail::fixed2(tx) + "\" y1=\"" + detail::fixed2(bar_y + bar_h) + "\" x2=\"" +
           detail::fixed2(tx) + "\" y2=\"" + detail::fixed2(bar_y + bar_h + 4.0) + "\" stroke=\"#404040\"/>\n";
    out += "<text x=\"" + detail::fixed2(tx) + "\" y=\"" + detail::fixed2(bar_y + bar_h + 16.0) + "\" fill=\"#404040\">" +
           detail::fixed2(tick).substr(0, 1) + "</text>\n";
  }
  out += "</g>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace termscape

#endif
