#ifndef TERMSCAPE_PIPELINE_HPP
#define TERMSCAPE_PIPELINE_HPP

#include <sys/resource.h>

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "termscape/cooccur.hpp"
#include "termscape/corpus.hpp"
#include "termscape/impact.hpp"
#include "termscape/layout.hpp"
#include "termscape/render.hpp"
#include "termscape/terms.hpp"
#include "termscape/text.hpp"

#ifndef TERMSCAPE_DEFAULT_LEXICON
#define TERMSCAPE_DEFAULT_LEXICON "data/lexicon.tsv"
#endif

namespace termscape {

// Lexicon lookup order: explicit path, $TERMSCAPE_LEXICON, bundled file.
inline std::string resolve_lexicon_path(const std::string& explicit_path = {}) {
  if (!explicit_path.empty()) return explicit_path;
  if (const char* env = std::getenv("TERMSCAPE_LEXICON"); env && *env) return env;
  return TERMSCAPE_DEFAULT_LEXICON;
}

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw StageError("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stage functions. Each reads and writes the documented interchange files, so
// the pipeline and the single-stage subcommands share one code path.

struct IngestOptions {
  std::string format = "jsonl";  // jsonl | csv
  ColumnMap columns;
  std::set<std::string> doc_types{"article", "review"};
  YearRange years{1000, 9999};
  std::optional<std::string> census_note;  // default: taken from a corpus header, if any
};

struct IngestSummary {
  std::size_t records = 0;
  std::size_t kept = 0;
  std::vector<Diagnostic> diagnostics;
};

inline IngestSummary stage_ingest(const std::string& in, const std::string& out, const IngestOptions& opts) {
  const std::string text = read_file(in);
  ParseResult parsed;
  if (opts.format == "jsonl") {
    parsed = parse_jsonl(text);
  } else if (opts.format == "csv") {
    parsed = parse_csv(text, opts.columns);
  } else {
    throw ConfigError("unknown input format '" + opts.format + "' (expected jsonl or csv)");
  }
  std::string note;
  if (opts.census_note) {
    note = *opts.census_note;
  } else if (parsed.header && parsed.header->contains("census_note") && (*parsed.header)["census_note"].is_string()) {
    note = (*parsed.header)["census_note"].get<std::string>();
  }
  const Corpus corpus = filter_corpus(parsed.publications, opts.doc_types, opts.years, note);
  write_file(out, write_jsonl(corpus));
  return {parsed.publications.size(), corpus.size(), std::move(parsed.diagnostics)};
}

inline Corpus load_corpus(const std::string& path) {
  return corpus_from_parse(parse_jsonl(read_file(path)), path);
}

inline void stage_extract(const std::string& corpus_path, const std::string& out, const Lexicon& lexicon) {
  const Corpus corpus = load_corpus(corpus_path);
  write_file(out, write_candidates(extract_candidates(corpus, lexicon), corpus.size()));
}

struct SelectOptions {
  std::optional<int> min_occ;  // nullopt: default rule on the corpus size
  int k = kDefaultTermCount;
  std::string audit_path;  // optional
};

inline TermSet stage_select(const std::string& candidates_path, const std::string& out, const SelectOptions& opts) {
  if (opts.k < 1) throw ConfigError("k must be >= 1");
  if (opts.min_occ && *opts.min_occ < 1) throw ConfigError("min_occ must be >= 1");
  std::size_t corpus_size = 0;
  const auto candidates = read_candidates(read_file(candidates_path), candidates_path, &corpus_size);
  const int min_occ = opts.min_occ ? *opts.min_occ : default_min_occ(corpus_size);
  const auto scored = relevance_scores(candidates, min_occ);
  TermSet set = select_terms(scored, opts.k);
  write_file(out, write_term_set(set));
  if (!opts.audit_path.empty()) write_file(opts.audit_path, write_term_audit(scored, set));
  return set;
}

inline void stage_cooccur(const std::string& terms_path, const std::string& corpus_path, const std::string& out) {
  const TermSet set = read_term_set(read_file(terms_path), terms_path);
  const Corpus corpus = load_corpus(corpus_path);
  write_file(out, write_matrix_dump(build_matrix(corpus, set)));
}

inline Positions stage_layout(const std::string& matrix_path, const std::string& terms_path, const std::string& out,
                              const LayoutParams& params) {
  const TermSet set = read_term_set(read_file(terms_path), terms_path);
  const auto m = read_matrix_dump(read_file(matrix_path), set, matrix_path);
  const auto sim = association_strength(m);
  Positions pos = compute_layout(sim, m.occ, params);
  write_file(out, canonical_json(layout_to_json(pos, params), 2) + "\n");
  return pos;
}

inline Positions load_layout(const std::string& path) {
  return layout_from_json(parse_json_document(read_file(path), path), path);
}

struct ScoreOptions {
  ColorScale scale = ColorScale::standard();
  std::string layout_path;  // with report_path: also write the heterogeneity report
  std::string report_path;  // JSON; a text rendering goes next to it with ".txt"
  int k_extremes = 10;
};

inline std::map<std::string, double> stage_score(const std::string& corpus_path, const std::string& terms_path,
                                                 const std::string& out, const ScoreOptions& opts) {
  opts.scale.validate();
  const Corpus corpus = load_corpus(corpus_path);
  const TermSet set = read_term_set(read_file(terms_path), terms_path);
  const auto scores = term_scores(set, normalize_citations(corpus));
  write_file(out, write_scores(scores, opts.scale));
  if (!opts.report_path.empty()) {
    if (opts.layout_path.empty()) throw ConfigError("a heterogeneity report needs the layout file");
    const int k = std::min<int>(opts.k_extremes, static_cast<int>(scores.size() / 2));
    const auto rep = heterogeneity_report(scores, load_layout(opts.layout_path), std::max(k, 1));
    write_file(opts.report_path, canonical_json(heterogeneity_to_json(rep), 2) + "\n");
    write_file(opts.report_path + ".txt", heterogeneity_to_text(rep));
  }
  return scores;
}

struct RenderStageOptions {
  ColorScale scale = ColorScale::standard();
  std::string svg_path;  // optional
  RenderOptions render;
};

inline TermMap stage_render(const std::string& layout_path, const std::string& terms_path,
                            const std::string& scores_path, const std::string& corpus_path, const std::string& out,
                            const RenderStageOptions& opts) {
  const json layout_doc = parse_json_document(read_file(layout_path), layout_path);
  const Positions pos = layout_from_json(layout_doc, layout_path);
  const TermSet set = read_term_set(read_file(terms_path), terms_path);
  const auto scores = read_scores(read_file(scores_path), scores_path);
  const Corpus corpus = load_corpus(corpus_path);

  MapMetadata meta;
  meta.corpus_size = corpus.size();
  meta.year_range = corpus.year_range;
  meta.k = set.k;
  meta.min_occ = set.min_occ;
  meta.seed = layout_doc.at("seed").get<std::uint64_t>();
  meta.census_note = corpus.census_note;

  const TermMap map = assemble_map(pos, set, scores, opts.scale, meta);
  write_file(out, export_map_json(map));
  if (!opts.svg_path.empty()) write_file(opts.svg_path, render_svg(map, opts.render));
  return map;
}

inline void stage_synth(const std::string& spec_path, std::uint64_t seed, const std::string& out) {
  const json doc = parse_json_document(read_file(spec_path), spec_path);
  write_file(out, write_jsonl(synth_corpus(synth_spec_from_json(doc), seed)));
}

// ---------------------------------------------------------------------------
// Configuration

struct OutputPaths {
  std::string corpus, candidates, terms, audit, matrix, layout, scores, heterogeneity, map, svg, run;
};

struct PipelineConfig {
  std::string input;
  IngestOptions ingest;
  std::optional<int> min_occ;  // nullopt: "auto"
  int k = kDefaultTermCount;
  LayoutParams layout;
  ColorScale scale = ColorScale::standard();
  RenderOptions render;
  int k_extremes = 10;
  std::string lexicon;  // empty: default lookup
  OutputPaths outputs;
  json source;  // the config document as given
};

namespace detail {

inline std::string resolve_path(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  const std::filesystem::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

template <typename T>
T config_value(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->template get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError("unknown config key '" + where + key + "'");
    }
  }
}

}  // namespace detail

// Relative paths resolve against `base` (the config file's directory).
inline PipelineConfig parse_pipeline_config(const json& doc, const std::filesystem::path& base) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  detail::reject_unknown_keys(doc,
                              {"input", "format", "columns", "doc_types", "year_range", "census_note", "min_occ", "k",
                               "layout", "color_anchors", "render", "k_extremes", "lexicon", "output_dir", "outputs"},
                              "");
  PipelineConfig cfg;
  cfg.source = doc;
  using detail::config_value;

  cfg.input = detail::resolve_path(base, config_value<std::string>(doc, "input", ""));
  if (cfg.input.empty()) throw ConfigError("config needs an 'input' path");
  cfg.ingest.format = config_value<std::string>(doc, "format", "jsonl");
  if (cfg.ingest.format != "jsonl" && cfg.ingest.format != "csv") {
    throw ConfigError("format must be 'jsonl' or 'csv'");
  }
  if (auto it = doc.find("columns"); it != doc.end()) {
    detail::reject_unknown_keys(*it, {"id", "title", "abstract", "year", "citations", "doc_type"}, "columns.");
    auto& c = cfg.ingest.columns;
    c.id = config_value(*it, "id", c.id);
    c.title = config_value(*it, "title", c.title);
    c.abstract = config_value(*it, "abstract", c.abstract);
    c.year = config_value(*it, "year", c.year);
    c.citations = config_value(*it, "citations", c.citations);
    c.doc_type = config_value(*it, "doc_type", c.doc_type);
  }
  cfg.ingest.doc_types = config_value(doc, "doc_types", cfg.ingest.doc_types);
  if (auto it = doc.find("year_range"); it != doc.end()) {
    if (!it->is_array() || it->size() != 2) throw ConfigError("year_range must be [min, max]");
    if (!(*it)[0].is_number_integer() || !(*it)[1].is_number_integer()) {
      throw ConfigError("year_range bounds must be integers");
    }
    cfg.ingest.years = {(*it)[0].get<int>(), (*it)[1].get<int>()};
    if (cfg.ingest.years.min > cfg.ingest.years.max) throw ConfigError("year_range min exceeds max");
  }
  if (auto it = doc.find("census_note"); it != doc.end() && !it->is_null()) {
    cfg.ingest.census_note = config_value<std::string>(doc, "census_note", "");
  }

  if (auto it = doc.find("min_occ"); it != doc.end() && !it->is_null()) {
    if (it->is_string()) {
      if (it->get<std::string>() != "auto") throw ConfigError("min_occ must be an integer or \"auto\"");
    } else {
      cfg.min_occ = config_value<int>(doc, "min_occ", 0);
      if (*cfg.min_occ < 1) throw ConfigError("min_occ must be >= 1");
    }
  }
  cfg.k = config_value<int>(doc, "k", cfg.k);
  if (cfg.k < 1) throw ConfigError("k must be >= 1 (got " + std::to_string(cfg.k) + ")");

  if (auto it = doc.find("layout"); it != doc.end()) {
    detail::reject_unknown_keys(*it, {"seed", "restarts", "max_iters", "tol", "step_policy", "initial_step"},
                                "layout.");
    auto& l = cfg.layout;
    l.seed = config_value(*it, "seed", l.seed);
    l.restarts = config_value(*it, "restarts", l.restarts);
    l.max_iters = config_value(*it, "max_iters", l.max_iters);
    l.tol = config_value(*it, "tol", l.tol);
    l.step = parse_step_policy(config_value<std::string>(*it, "step_policy", "majorization"));
    l.initial_step = config_value(*it, "initial_step", l.initial_step);
  }
  if (auto it = doc.find("color_anchors"); it != doc.end() && !it->is_null()) {
    try {
      cfg.scale = color_scale_from_json(*it);
    } catch (const Error& e) {
      throw ConfigError(std::string("color_anchors: ") + e.what());
    }
  }
  if (auto it = doc.find("render"); it != doc.end()) {
    detail::reject_unknown_keys(*it,
                                {"width", "height", "font_exponent", "font_min", "font_max", "radius_min",
                                 "radius_max", "label_density", "background"},
                                "render.");
    auto& r = cfg.render;
    r.width = config_value(*it, "width", r.width);
    r.height = config_value(*it, "height", r.height);
    r.font_exponent = config_value(*it, "font_exponent", r.font_exponent);
    r.font_min = config_value(*it, "font_min", r.font_min);
    r.font_max = config_value(*it, "font_max", r.font_max);
    r.radius_min = config_value(*it, "radius_min", r.radius_min);
    r.radius_max = config_value(*it, "radius_max", r.radius_max);
    r.label_density = config_value(*it, "label_density", r.label_density);
    r.background = config_value(*it, "background", r.background);
  }
  cfg.k_extremes = config_value<int>(doc, "k_extremes", cfg.k_extremes);
  cfg.lexicon = detail::resolve_path(base, config_value<std::string>(doc, "lexicon", ""));

  const std::filesystem::path out_dir = detail::resolve_path(base, config_value<std::string>(doc, "output_dir", "."));
  json outputs = doc.value("outputs", json::object());
  detail::reject_unknown_keys(outputs,
                              {"corpus", "candidates", "terms", "audit", "matrix", "layout", "scores",
                               "heterogeneity", "map", "svg", "run"},
                              "outputs.");
  const auto out_path = [&](const char* key, const char* fallback) {
    return detail::resolve_path(out_dir, config_value<std::string>(outputs, key, fallback));
  };
  auto& o = cfg.outputs;
  o.corpus = out_path("corpus", "corpus.jsonl");
  o.candidates = out_path("candidates", "candidates.jsonl");
  o.terms = out_path("terms", "terms.jsonl");
  o.audit = out_path("audit", "term_audit.jsonl");
  o.matrix = out_path("matrix", "cooccurrence.txt");
  o.layout = out_path("layout", "layout.json");
  o.scores = out_path("scores", "scores.jsonl");
  o.heterogeneity = out_path("heterogeneity", "heterogeneity.json");
  o.map = out_path("map", "map.json");
  o.svg = outputs.contains("svg") ? out_path("svg", "") : std::string{};
  o.run = out_path("run", "run.json");
  return cfg;
}

inline PipelineConfig load_pipeline_config(const std::string& path) {
  const json doc = parse_json_document(read_file(path), path);
  try {
    return parse_pipeline_config(doc, std::filesystem::absolute(path).parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// Every referenced path must be distinct, including the input.
inline void validate_paths(const PipelineConfig& cfg) {
  const auto& o = cfg.outputs;
  std::map<std::string, std::string> seen;
  const std::pair<const char*, const std::string*> all[] = {
      {"input", &cfg.input},     {"corpus", &o.corpus}, {"candidates", &o.candidates},
      {"terms", &o.terms},       {"audit", &o.audit},   {"matrix", &o.matrix},
      {"layout", &o.layout},     {"scores", &o.scores}, {"heterogeneity", &o.heterogeneity},
      {"heterogeneity text", nullptr}, {"map", &o.map}, {"svg", &o.svg},
      {"run", &o.run}};
  for (const auto& [name, path] : all) {
    const std::string p = path ? *path : o.heterogeneity + ".txt";
    if (p.empty()) continue;
    auto [it, inserted] = seen.emplace(p, name);
    if (!inserted) throw ConfigError("paths for '" + it->second + "' and '" + name + "' coincide: " + p);
  }
}

// Everything that can be checked without reading the input, so a bad config
// fails before any file is written.
inline void validate_config(const PipelineConfig& cfg) {
  if (cfg.k < 1) throw ConfigError("k must be >= 1");
  if (cfg.min_occ && *cfg.min_occ < 1) throw ConfigError("min_occ must be >= 1");
  if (cfg.k_extremes < 1) throw ConfigError("k_extremes must be >= 1");
  validate(cfg.layout);
  cfg.scale.validate();
  cfg.render.validate();
  validate_paths(cfg);
}

// ---------------------------------------------------------------------------
// Full run

struct StageRecord {
  std::string name;
  double seconds = 0.0;
  long peak_rss_kb = 0;
};

struct PipelineResult {
  int min_occ = 0;
  std::size_t n_terms = 0;
  Positions positions;
  std::vector<StageRecord> stages;
  std::vector<Diagnostic> diagnostics;
};

namespace detail {

inline long peak_rss_kb() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return usage.ru_maxrss;
}

inline json layout_params_json(const LayoutParams& p) {
  return {{"seed", p.seed},
          {"restarts", p.restarts},
          {"max_iters", p.max_iters},
          {"tol", p.tol},
          {"step_policy", step_policy_name(p.step)},
          {"initial_step", p.initial_step}};
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

// ingest -> extract -> select -> cooccur -> layout -> score -> render. Each
// stage reads the previous stage's file back, so the run is the composition
// of the single-stage commands. Errors carry the stage name.
inline PipelineResult run_pipeline(const PipelineConfig& cfg, std::ostream* log = nullptr) {
  validate_config(cfg);
  const auto& o = cfg.outputs;
  for (const std::string* p : {&o.corpus, &o.candidates, &o.terms, &o.audit, &o.matrix, &o.layout, &o.scores,
                               &o.heterogeneity, &o.map, &o.svg, &o.run}) {
    if (p->empty()) continue;
    const auto dir = std::filesystem::path(*p).parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
  }

  PipelineResult result;
  const std::string started = detail::utc_timestamp();
  const auto run_stage = [&](const char* name, const std::function<void()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const Error& e) {
      throw Error(e.kind(), std::string("stage '") + name + "': " + e.what());
    } catch (const std::exception& e) {
      throw StageError(std::string("stage '") + name + "': " + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.stages.push_back({name, secs, detail::peak_rss_kb()});
    if (log) *log << "termscape: " << name << " done in " << secs << " s\n";
  };

  Lexicon lexicon;
  run_stage("ingest", [&] {
    auto summary = stage_ingest(cfg.input, o.corpus, cfg.ingest);
    result.diagnostics = std::move(summary.diagnostics);
    if (log) {
      for (const auto& d : result.diagnostics) *log << cfg.input << ":" << d.line << ": " << d.message << "\n";
    }
  });
  run_stage("extract", [&] {
    lexicon = Lexicon::load_file(resolve_lexicon_path(cfg.lexicon));
    stage_extract(o.corpus, o.candidates, lexicon);
  });
  run_stage("select", [&] {
    const auto set = stage_select(o.candidates, o.terms, {cfg.min_occ, cfg.k, o.audit});
    result.min_occ = set.min_occ;
    result.n_terms = set.terms.size();
  });
  run_stage("cooccur", [&] { stage_cooccur(o.terms, o.corpus, o.matrix); });
  run_stage("layout", [&] { result.positions = stage_layout(o.matrix, o.terms, o.layout, cfg.layout); });
  run_stage("score", [&] {
    ScoreOptions so;
    so.scale = cfg.scale;
    so.layout_path = o.layout;
    so.report_path = o.heterogeneity;
    so.k_extremes = cfg.k_extremes;
    stage_score(o.corpus, o.terms, o.scores, so);
  });
  run_stage("render", [&] {
    stage_render(o.layout, o.terms, o.scores, o.corpus, o.map, {cfg.scale, o.svg, cfg.render});
  });

  json artifacts = json::object();
  const std::pair<const char*, const std::string*> files[] = {
      {"corpus", &o.corpus}, {"candidates", &o.candidates}, {"terms", &o.terms},
      {"audit", &o.audit},   {"matrix", &o.matrix},         {"layout", &o.layout},
      {"scores", &o.scores}, {"heterogeneity", &o.heterogeneity}, {"map", &o.map},
      {"svg", &o.svg}};
  for (const auto& [name, path] : files) {
    if (path->empty()) continue;
    const std::string bytes = read_file(*path);
    artifacts[name] = {{"path", *path}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}};
  }
  json stages = json::array();
  for (const auto& s : result.stages) {
    stages.push_back({{"stage", s.name}, {"seconds", s.seconds}, {"peak_rss_kb", s.peak_rss_kb}});
  }
  const json run{{"schema", "run/1"},
                 {"started_utc", started},
                 {"config", cfg.source},
                 {"resolved",
                  {{"input", cfg.input},
                   {"lexicon", resolve_lexicon_path(cfg.lexicon)},
                   {"min_occ", result.min_occ},
                   {"min_occ_source", cfg.min_occ ? "config" : "auto"},
                   {"k", cfg.k},
                   {"n_terms", result.n_terms},
                   {"layout", detail::layout_params_json(cfg.layout)},
                   {"converged", result.positions.converged},
                   {"constraint_residual", result.positions.constraint_residual},
                   {"iterations_used", result.positions.iterations_used},
                   {"color_anchors", color_scale_to_json(cfg.scale)}}},
                 {"diagnostics", result.diagnostics.size()},
                 {"artifacts", artifacts},
                 {"stages", stages}};
  write_file(o.run, canonical_json(run, 2) + "\n");
  return result;
}

}  // namespace termscape

#endif
