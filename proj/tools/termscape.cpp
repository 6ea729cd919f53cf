// termscape command line: the full pipeline plus one subcommand per stage.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "termscape/termscape.hpp"

namespace ts = termscape;

namespace {

std::string absolute(const std::string& p) {
  return p.empty() ? p : std::filesystem::absolute(p).lexically_normal().string();
}

std::optional<int> parse_min_occ(const std::string& text) {
  if (text.empty() || text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size() && v >= 1) return v;
  } catch (const std::exception&) {
  }
  throw ts::ConfigError("--min-occ must be a positive integer or 'auto' (got '" + text + "')");
}

ts::ColorScale load_scale(const std::string& path) {
  if (path.empty()) return ts::ColorScale::standard();
  const auto doc = ts::parse_json_document(ts::read_file(path), path);
  try {
    return ts::color_scale_from_json(doc.is_object() ? doc.at("color_anchors") : doc);
  } catch (const ts::json::exception& e) {
    throw ts::ConfigError(path + ": " + e.what());
  }
}

struct LayoutFlags {
  std::uint64_t seed = 0;
  int restarts = 10;
  int max_iters = 1000;
  double tol = 1e-7;
  std::string step = "majorization";
};

void add_layout_flags(CLI::App* cmd, LayoutFlags& f) {
  cmd->add_option("--seed", f.seed, "PRNG seed for initial positions");
  cmd->add_option("--restarts", f.restarts, "independent starts; the best is kept");
  cmd->add_option("--max-iters", f.max_iters, "iteration cap per start");
  cmd->add_option("--tol", f.tol, "relative decrease that counts as converged");
  cmd->add_option("--step-policy", f.step, "majorization or gradient");
}

ts::LayoutParams to_params(const LayoutFlags& f) {
  ts::LayoutParams p;
  p.seed = f.seed;
  p.restarts = f.restarts;
  p.max_iters = f.max_iters;
  p.tol = f.tol;
  p.step = ts::parse_step_policy(f.step);
  return p;
}

void add_render_flags(CLI::App* cmd, ts::RenderOptions& r) {
  cmd->add_option("--width", r.width, "canvas width in pixels");
  cmd->add_option("--height", r.height, "canvas height in pixels");
  cmd->add_option("--font-min", r.font_min);
  cmd->add_option("--font-max", r.font_max);
  cmd->add_option("--font-exponent", r.font_exponent);
  cmd->add_option("--label-density", r.label_density, "largest fraction of terms that get a label");
  cmd->add_option("--background", r.background, "#RRGGBB");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"termscape: impact-colored term maps from bibliographic corpora"};
  app.require_subcommand(1);

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "run every stage from a config file");
  std::string config_path, svg_path, lexicon_path, output_dir, min_occ_text;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> k_override;
  pipeline->add_option("--config", config_path, "pipeline config (JSON)")->required();
  pipeline->add_option("--svg", svg_path, "also write the SVG map here");
  pipeline->add_option("--seed", seed_override, "layout seed (overrides the config)");
  pipeline->add_option("--k", k_override, "number of terms to select");
  pipeline->add_option("--min-occ", min_occ_text, "occurrence threshold or 'auto'");
  pipeline->add_option("--lexicon", lexicon_path, "POS lexicon (word<TAB>TAG)");
  pipeline->add_option("--output-dir", output_dir, "directory for artifacts");

  // stages
  std::string in, out, corpus_path, terms_path, scores_path, layout_path, report_path, audit_path, colors_path;
  std::string format = "jsonl", census_note, doc_types_text = "article,review", spec_path;
  std::vector<int> years;
  ts::ColumnMap columns;
  int k = ts::kDefaultTermCount, k_extremes = 10;
  std::uint64_t synth_seed = 0;
  LayoutFlags layout_flags;
  ts::RenderOptions render_opts;

  auto* ingest = app.add_subcommand("ingest", "parse, validate and filter raw records");
  ingest->add_option("--in", in, "JSONL or CSV records")->required();
  ingest->add_option("--out", out, "corpus JSONL")->required();
  ingest->add_option("--format", format, "jsonl or csv");
  ingest->add_option("--doc-types", doc_types_text, "comma-separated document types to keep");
  ingest->add_option("--years", years, "inclusive year range: MIN MAX")->expected(2);
  ingest->add_option("--census-note", census_note, "provenance note for the citation counts");
  ingest->add_option("--col-id", columns.id);
  ingest->add_option("--col-title", columns.title);
  ingest->add_option("--col-abstract", columns.abstract, "empty when there is no abstract column");
  ingest->add_option("--col-year", columns.year);
  ingest->add_option("--col-citations", columns.citations);
  ingest->add_option("--col-doc-type", columns.doc_type);

  auto* extract = app.add_subcommand("extract", "noun-phrase candidates per publication");
  extract->add_option("--in", in, "corpus JSONL")->required();
  extract->add_option("--out", out, "candidates JSONL")->required();
  extract->add_option("--lexicon", lexicon_path, "POS lexicon (word<TAB>TAG)");

  auto* select = app.add_subcommand("select", "score candidates and keep the top k");
  select->add_option("--in", in, "candidates JSONL")->required();
  select->add_option("--out", out, "terms JSONL")->required();
  select->add_option("--k", k, "number of terms to select");
  select->add_option("--min-occ", min_occ_text, "occurrence threshold or 'auto'");
  select->add_option("--audit", audit_path, "write the scored-candidate audit here");

  auto* cooccur = app.add_subcommand("cooccur", "publication-level co-occurrence counts");
  cooccur->add_option("--in", in, "terms JSONL")->required();
  cooccur->add_option("--corpus", corpus_path, "corpus JSONL")->required();
  cooccur->add_option("--out", out, "matrix dump")->required();

  auto* layout = app.add_subcommand("layout", "VOS layout of the similarity matrix");
  layout->add_option("--in", in, "matrix dump")->required();
  layout->add_option("--terms", terms_path, "terms JSONL the matrix was built from")->required();
  layout->add_option("--out", out, "layout JSON")->required();
  add_layout_flags(layout, layout_flags);

  auto* score = app.add_subcommand("score", "year-normalized impact score per term");
  score->add_option("--in", in, "corpus JSONL")->required();
  score->add_option("--terms", terms_path, "terms JSONL")->required();
  score->add_option("--out", out, "scores JSONL")->required();
  score->add_option("--colors", colors_path, "JSON file with color anchors");
  score->add_option("--layout", layout_path, "layout JSON (for the heterogeneity report)");
  score->add_option("--report", report_path, "heterogeneity report JSON");
  score->add_option("--k-extremes", k_extremes, "terms listed at each end of the report");

  auto* render = app.add_subcommand("render", "assemble the term map and draw it");
  render->add_option("--in", in, "layout JSON")->required();
  render->add_option("--terms", terms_path, "terms JSONL")->required();
  render->add_option("--scores", scores_path, "scores JSONL")->required();
  render->add_option("--corpus", corpus_path, "corpus JSONL")->required();
  render->add_option("--out", out, "map JSON")->required();
  render->add_option("--svg", svg_path, "SVG output");
  render->add_option("--colors", colors_path, "JSON file with color anchors");
  add_render_flags(render, render_opts);

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  synth->add_option("--spec", spec_path, "synthetic corpus spec (JSON)")->required();
  synth->add_option("--seed", synth_seed, "generator seed")->required();
  synth->add_option("--out", out, "corpus JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ts::ErrorKind::config);
  }

  try {
    if (pipeline->parsed()) {
      ts::json doc = ts::parse_json_document(ts::read_file(config_path), config_path);
      if (!doc.is_object()) throw ts::ConfigError(config_path + ": config must be a JSON object");
      // flags override the config; their paths are relative to the working directory
      if (seed_override) doc["layout"]["seed"] = *seed_override;
      if (k_override) doc["k"] = *k_override;
      if (!min_occ_text.empty()) {
        const auto m = parse_min_occ(min_occ_text);
        doc["min_occ"] = m ? ts::json(*m) : ts::json("auto");
      }
      if (!lexicon_path.empty()) doc["lexicon"] = absolute(lexicon_path);
      if (!output_dir.empty()) doc["output_dir"] = absolute(output_dir);
      if (!svg_path.empty()) doc["outputs"]["svg"] = absolute(svg_path);
      ts::PipelineConfig cfg;
      try {
        cfg = ts::parse_pipeline_config(doc, std::filesystem::absolute(config_path).parent_path());
      } catch (const ts::ConfigError& e) {
        throw ts::ConfigError(config_path + ": " + e.what());
      }
      const auto result = ts::run_pipeline(cfg, &std::cerr);
      std::cerr << "termscape: " << result.n_terms << " terms (min_occ " << result.min_occ << "), layout "
                << (result.positions.converged ? "converged" : "did not converge") << "\n";
    } else if (ingest->parsed()) {
      ts::IngestOptions opts;
      opts.format = format;
      opts.columns = columns;
      opts.doc_types.clear();
      for (auto& t : ts::split_list(doc_types_text, ',')) opts.doc_types.insert(std::move(t));
      if (!years.empty()) opts.years = {years[0], years[1]};
      if (ingest->count("--census-note")) opts.census_note = census_note;
      const auto summary = ts::stage_ingest(in, out, opts);
      for (const auto& d : summary.diagnostics) std::cerr << in << ":" << d.line << ": " << d.message << "\n";
      std::cerr << "termscape: kept " << summary.kept << " of " << summary.records << " records\n";
    } else if (extract->parsed()) {
      ts::stage_extract(in, out, ts::Lexicon::load_file(ts::resolve_lexicon_path(lexicon_path)));
    } else if (select->parsed()) {
      ts::stage_select(in, out, {parse_min_occ(min_occ_text), k, audit_path});
    } else if (cooccur->parsed()) {
      ts::stage_cooccur(in, corpus_path, out);
    } else if (layout->parsed()) {
      const auto pos = ts::stage_layout(in, terms_path, out, to_params(layout_flags));
      if (!pos.converged) std::cerr << "termscape: warning: layout did not converge\n";
    } else if (score->parsed()) {
      ts::ScoreOptions opts;
      opts.scale = load_scale(colors_path);
      opts.layout_path = layout_path;
      opts.report_path = report_path;
      opts.k_extremes = k_extremes;
      ts::stage_score(in, terms_path, out, opts);
    } else if (render->parsed()) {
      ts::stage_render(in, terms_path, scores_path, corpus_path, out, {load_scale(colors_path), svg_path, render_opts});
    } else if (synth->parsed()) {
      ts::stage_synth(spec_path, synth_seed, out);
    }
  } catch (const ts::Error& e) {
    std::cerr << "termscape: error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "termscape: error: " << e.what() << "\n";
    return static_cast<int>(ts::ErrorKind::stage);
  }
  return 0;
}
