#ifndef TERMSCAPE_CORPUS_HPP
#define TERMSCAPE_CORPUS_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "termscape/error.hpp"
#include "termscape/json_io.hpp"
#include "termscape/random.hpp"
#include "termscape/strings.hpp"

namespace termscape {

struct Publication {
  std::string id;
  std::string title;
  std::optional<std::string> abstract;
  int year = 0;
  std::int64_t citations = 0;
  std::string doc_type;

  bool operator==(const Publication&) const = default;
};

struct YearRange {
  int min = 0;
  int max = 0;

  bool contains(int year) const { return year >= min && year <= max; }
  bool operator==(const YearRange&) const = default;
};

// Immutable after construction. Publications keep the stable, deduplicated
// input order.
struct Corpus {
  std::vector<Publication> publications;
  YearRange year_range;
  std::set<std::string> doc_types_kept;  // lowercase
  std::string census_note;

  std::size_t size() const { return publications.size(); }
  bool operator==(const Corpus&) const = default;
};

struct CorpusStats {
  std::map<int, std::int64_t> per_year_count;
  std::map<int, std::int64_t> per_year_citations;
  std::map<int, double> per_year_mean_citations;
  std::int64_t total = 0;
};

struct Diagnostic {
  std::size_t line = 0;  // 1-based; for CSV the physical line the record starts on
  std::string message;
};

struct ParseResult {
  std::vector<Publication> publications;
  std::vector<Diagnostic> diagnostics;
  std::optional<json> header;  // a "corpus/1" header line, when present
};

inline constexpr const char* kCorpusSchema = "corpus/1";

namespace detail {

inline bool valid_year(std::int64_t year) { return year >= 1000 && year <= 9999; }

// Records are accepted or rejected as a whole; the returned string is the
// rejection reason.
inline std::optional<std::string> publication_from_json(const json& obj, Publication& out) {
  if (!obj.is_object()) return "line is not a JSON object";
  const auto string_field = [&](const char* key, std::string& dst) -> std::optional<std::string> {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::string("missing mandatory field '") + key + "'";
    if (!it->is_string()) return std::string("field '") + key + "' must be a string";
    dst = it->get<std::string>();
    return std::nullopt;
  };
  const auto int_field = [&](const char* key, std::int64_t& dst) -> std::optional<std::string> {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::string("missing mandatory field '") + key + "'";
    if (!it->is_number_integer()) return std::string("field '") + key + "' must be an integer";
    dst = it->get<std::int64_t>();
    return std::nullopt;
  };

  Publication pub;
  std::int64_t year = 0;
  if (auto e = string_field("id", pub.id)) return e;
  if (auto e = string_field("title", pub.title)) return e;
  if (auto e = int_field("year", year)) return e;
  if (auto e = int_field("citations", pub.citations)) return e;
  if (auto e = string_field("doc_type", pub.doc_type)) return e;
  if (auto it = obj.find("abstract"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) return std::string("field 'abstract' must be a string");
    if (!it->get_ref<const std::string&>().empty()) pub.abstract = it->get<std::string>();
  }
  if (pub.id.empty()) return std::string("empty id");
  if (trim(pub.title).empty()) return std::string("empty title");
  if (!valid_year(year)) return "year " + std::to_string(year) + " is not a 4-digit year";
  if (pub.citations < 0) return "negative citations (" + std::to_string(pub.citations) + ")";
  pub.year = static_cast<int>(year);
  out = std::move(pub);
  return std::nullopt;
}

// First record with an id wins; later ones become diagnostics.
class DuplicateFilter {
public:
  bool admit(const Publication& pub, std::size_t line, std::vector<Diagnostic>& diags) {
    if (seen_.insert(pub.id).second) return true;
    diags.push_back({line, "duplicate id '" + pub.id + "' (first occurrence kept)"});
    return false;
  }

private:
  std::unordered_set<std::string> seen_;
};

}  // namespace detail

inline ParseResult parse_jsonl(std::istream& in) {
  ParseResult result;
  detail::DuplicateFilter dups;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error&) {
      result.diagnostics.push_back({line_no, "line is not valid JSON"});
      continue;
    }
    if (obj.is_object() && obj.contains("schema")) {
      if (result.header || !result.publications.empty()) {
        result.diagnostics.push_back({line_no, "header line is only allowed first"});
        continue;
      }
      check_schema(obj, kCorpusSchema, "corpus header (line " + std::to_string(line_no) + ")");
      result.header = std::move(obj);
      continue;
    }
    Publication pub;
    if (auto err = detail::publication_from_json(obj, pub)) {
      result.diagnostics.push_back({line_no, *err});
      continue;
    }
    if (dups.admit(pub, line_no, result.diagnostics)) result.publications.push_back(std::move(pub));
  }
  if (in.bad()) throw InputError("I/O failure while reading JSONL input");
  return result;
}

inline ParseResult parse_jsonl(const std::string& text) {
  std::istringstream in(text);
  return parse_jsonl(in);
}

struct ColumnMap {
  std::string id = "id";
  std::string title = "title";
  std::string abstract = "abstract";  // empty: the input has no abstract column
  std::string year = "year";
  std::string citations = "citations";
  std::string doc_type = "doc_type";
};

namespace detail {

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

// RFC 4180: fields separated by ',', optionally enclosed in '"', with '""' as
// an escaped quote; quoted fields may contain separators and line breaks.
inline std::vector<CsvRecord> read_csv_records(std::istream& in) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool record_has_content = false;
  std::size_t line = 1;
  current.line = 1;

  const auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  const auto end_record = [&] {
    end_field();
    if (record_has_content || current.fields.size() > 1 || !current.fields[0].empty()) {
      records.push_back(std::move(current));
    }
    current = CsvRecord{};
    record_has_content = false;
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started) {
          in_quotes = true;
          field_started = true;
          record_has_content = true;
        } else {
          field += c;
        }
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        if (in.peek() == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        current.line = line;
        break;
      default:
        field += c;
        field_started = true;
        record_has_content = true;
    }
  }
  if (in.bad()) throw InputError("I/O failure while reading CSV input");
  if (in_quotes) throw InputError("unterminated quoted field in CSV record starting at line " +
                                  std::to_string(current.line));
  if (record_has_content || !field.empty()) end_record();
  return records;
}

inline std::optional<std::int64_t> parse_int(std::string_view text) {
  text = trim(text);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

}  // namespace detail

inline ParseResult parse_csv(std::istream& in, const ColumnMap& columns = {}) {
  ParseResult result;
  auto records = detail::read_csv_records(in);
  if (records.empty()) throw InputError("CSV input has no header row");

  const auto& header = records.front().fields;
  const auto column_of = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InputError("CSV header lacks mapped column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t col_id = column_of(columns.id);
  const std::size_t col_title = column_of(columns.title);
  const std::optional<std::size_t> col_abstract =
      columns.abstract.empty() ? std::nullopt : std::optional(column_of(columns.abstract));
  const std::size_t col_year = column_of(columns.year);
  const std::size_t col_citations = column_of(columns.citations);
  const std::size_t col_doc_type = column_of(columns.doc_type);

  detail::DuplicateFilter dups;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.size()) {
      result.diagnostics.push_back({rec.line, "row has " + std::to_string(rec.fields.size()) +
                                                  " fields, header has " +
                                                  std::to_string(header.size())});
      continue;
    }
    const auto year = detail::parse_int(rec.fields[col_year]);
    const auto citations = detail::parse_int(rec.fields[col_citations]);
    if (!year) {
      result.diagnostics.push_back({rec.line, "field 'year' must be an integer"});
      continue;
    }
    if (!citations) {
      result.diagnostics.push_back({rec.line, "field 'citations' must be an integer"});
      continue;
    }
    json obj = {{"id", rec.fields[col_id]},
                {"title", rec.fields[col_title]},
                {"year", *year},
                {"citations", *citations},
                {"doc_type", rec.fields[col_doc_type]}};
    if (col_abstract && !rec.fields[*col_abstract].empty()) obj["abstract"] = rec.fields[*col_abstract];
    Publication pub;
    if (auto err = detail::publication_from_json(obj, pub)) {
      result.diagnostics.push_back({rec.line, *err});
      continue;
    }
    if (dups.admit(pub, rec.line, result.diagnostics)) result.publications.push_back(std::move(pub));
  }
  return result;
}

inline ParseResult parse_csv(const std::string& text, const ColumnMap& columns = {}) {
  std::istringstream in(text);
  return parse_csv(in, columns);
}

inline json publication_to_json(const Publication& pub) {
  json obj = {{"id", pub.id},
              {"title", pub.title},
              {"year", pub.year},
              {"citations", pub.citations},
              {"doc_type", pub.doc_type}};
  if (pub.abstract) obj["abstract"] = *pub.abstract;
  return obj;
}

inline json corpus_header(const Corpus& corpus) {
  return json{{"schema", kCorpusSchema},
              {"size", corpus.size()},
              {"year_range", {corpus.year_range.min, corpus.year_range.max}},
              {"doc_types", corpus.doc_types_kept},
              {"census_note", corpus.census_note}};
}

inline std::string write_jsonl(const std::vector<Publication>& pubs) {
  std::string out;
  for (const auto& pub : pubs) {
    out += canonical_json(publication_to_json(pub));
    out += '\n';
  }
  return out;
}

// Corpus file: a header line recording the filters, then one record per line.
inline std::string write_jsonl(const Corpus& corpus) {
  return canonical_json(corpus_header(corpus)) + "\n" + write_jsonl(corpus.publications);
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

inline std::string write_csv(const std::vector<Publication>& pubs) {
  std::string out = "id,title,abstract,year,citations,doc_type\n";
  for (const auto& pub : pubs) {
    out += detail::csv_field(pub.id) + ',' + detail::csv_field(pub.title) + ',' +
           detail::csv_field(pub.abstract.value_or("")) + ',' + std::to_string(pub.year) + ',' +
           std::to_string(pub.citations) + ',' + detail::csv_field(pub.doc_type) + '\n';
  }
  return out;
}

// Restores a Corpus from a file written by write_jsonl(const Corpus&).
inline Corpus corpus_from_parse(ParseResult parsed, const std::string& what) {
  if (!parsed.header) throw InputError(what + ": missing corpus header line");
  if (!parsed.diagnostics.empty()) {
    const auto& d = parsed.diagnostics.front();
    throw InputError(what + ": line " + std::to_string(d.line) + ": " + d.message);
  }
  const json& h = *parsed.header;
  Corpus corpus;
  try {
    corpus.year_range = {h.at("year_range").at(0).get<int>(), h.at("year_range").at(1).get<int>()};
    corpus.doc_types_kept = h.at("doc_types").get<std::set<std::string>>();
    corpus.census_note = h.at("census_note").get<std::string>();
  } catch (const json::exception& e) {
    throw InputError(what + ": malformed corpus header: " + e.what());
  }
  corpus.publications = std::move(parsed.publications);
  return corpus;
}

inline Corpus filter_corpus(const std::vector<Publication>& pubs,
                            const std::set<std::string>& doc_types, YearRange years,
                            std::string census_note = {}) {
  if (years.min > years.max) {
    throw ConfigError("year range [" + std::to_string(years.min) + ", " +
                      std::to_string(years.max) + "] is empty");
  }
  Corpus corpus;
  corpus.year_range = years;
  corpus.census_note = std::move(census_note);
  for (const auto& t : doc_types) corpus.doc_types_kept.insert(to_lower(t));
  for (const auto& pub : pubs) {
    if (years.contains(pub.year) && corpus.doc_types_kept.count(to_lower(pub.doc_type))) {
      corpus.publications.push_back(pub);
    }
  }
  return corpus;
}

inline CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  for (const auto& pub : corpus.publications) {
    ++stats.per_year_count[pub.year];
    stats.per_year_citations[pub.year] += pub.citations;
    ++stats.total;
  }
  for (const auto& [year, count] : stats.per_year_count) {
    stats.per_year_mean_citations[year] =
        static_cast<double>(stats.per_year_citations[year]) / static_cast<double>(count);
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Synthetic corpora

struct SynthCluster {
  std::string name;
  std::vector<std::string> vocabulary;
  int n_pubs = 0;
  double citation_rate = 0.0;
};

struct SynthSpec {
  std::vector<SynthCluster> clusters;
  double bridge_fraction = 0.0;
  YearRange years{2006, 2010};
};

inline SynthSpec synth_spec_from_json(const json& doc) {
  SynthSpec spec;
  try {
    for (const auto& c : doc.at("clusters")) {
      SynthCluster cluster;
      cluster.name = c.at("name").get<std::string>();
      cluster.vocabulary = c.at("vocabulary").get<std::vector<std::string>>();
      cluster.n_pubs = c.at("n_pubs").get<int>();
      cluster.citation_rate = c.at("citation_rate").get<double>();
      spec.clusters.push_back(std::move(cluster));
    }
    spec.bridge_fraction = doc.value("bridge_fraction", 0.0);
    if (doc.contains("years")) spec.years = {doc["years"].at(0).get<int>(), doc["years"].at(1).get<int>()};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed synth spec: ") + e.what());
  }
  return spec;
}

inline json synth_spec_to_json(const SynthSpec& spec) {
  json clusters = json::array();
  for (const auto& c : spec.clusters) {
    clusters.push_back({{"name", c.name},
                        {"vocabulary", c.vocabulary},
                        {"n_pubs", c.n_pubs},
                        {"citation_rate", c.citation_rate}});
  }
  return json{{"clusters", clusters},
              {"bridge_fraction", spec.bridge_fraction},
              {"years", {spec.years.min, spec.years.max}}};
}

namespace detail {

inline void validate_synth_spec(const SynthSpec& spec) {
  if (spec.clusters.empty()) throw ConfigError("synth spec has no clusters");
  if (!(spec.bridge_fraction >= 0.0 && spec.bridge_fraction <= 1.0)) {
    throw ConfigError("bridge_fraction must lie in [0, 1]");
  }
  if (spec.bridge_fraction > 0.0 && spec.clusters.size() < 2) {
    throw ConfigError("bridge publications need at least two clusters");
  }
  if (spec.years.min > spec.years.max || !valid_year(spec.years.min) || !valid_year(spec.years.max)) {
    throw ConfigError("synth spec year range is invalid");
  }
  std::map<std::string, std::string> owner;
  for (const auto& c : spec.clusters) {
    if (c.n_pubs <= 0) throw ConfigError("cluster '" + c.name + "' needs a positive n_pubs");
    if (!(c.citation_rate > 0.0)) {
      throw ConfigError("cluster '" + c.name + "' needs a positive citation_rate");
    }
    if (c.vocabulary.empty()) throw ConfigError("cluster '" + c.name + "' has an empty vocabulary");
    for (const auto& phrase : c.vocabulary) {
      const std::string key = join(split_words(to_lower(phrase)), " ");
      if (key.empty()) throw ConfigError("cluster '" + c.name + "' has an empty phrase");
      auto [it, inserted] = owner.emplace(key, c.name);
      if (!inserted && it->second != c.name) {
        throw ConfigError("phrase '" + key + "' appears in clusters '" + it->second + "' and '" +
                          c.name + "'");
      }
    }
  }
}

inline std::string capitalized(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

// "a", "a and b", "a, b and c", ...
inline std::string enumerate_phrases(const std::vector<std::string>& phrases, std::size_t from,
                                     std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) {
    if (i > from) out += (i + 1 == to) ? " and " : ", ";
    out += phrases[i];
  }
  return out;
}

}  // namespace detail

// Generation order (fixed, so other implementations can reproduce it): for each
// cluster in spec order, for each of its publications: year, phrase count
// (5 + below(11)), bridge coin, partner cluster when bridging, then one
// vocabulary draw per phrase (odd-indexed phrases come from the partner), and
// finally the Poisson citation count.
inline Corpus synth_corpus(const SynthSpec& spec, std::uint64_t seed) {
  detail::validate_synth_spec(spec);
  SplitMix64 rng(seed);
  Corpus corpus;
  corpus.year_range = spec.years;
  corpus.doc_types_kept = {"article"};
  corpus.census_note = "synthetic corpus, seed " + std::to_string(seed);

  const std::size_t k = spec.clusters.size();
  const auto span = static_cast<std::uint64_t>(spec.years.max - spec.years.min + 1);
  for (std::size_t c = 0; c < k; ++c) {
    const auto& cluster = spec.clusters[c];
    for (int i = 0; i < cluster.n_pubs; ++i) {
      Publication pub;
      char id[32];
      std::snprintf(id, sizeof id, "-%04d", i + 1);
      pub.id = cluster.name + id;
      pub.doc_type = "article";
      pub.year = spec.years.min + static_cast<int>(rng.below(span));
      const std::size_t n_phrases = 5 + static_cast<std::size_t>(rng.below(11));
      const bool bridge = rng.uniform01() < spec.bridge_fraction;
      std::size_t partner = c;
      if (bridge) partner = (c + 1 + static_cast<std::size_t>(rng.below(k - 1))) % k;

      std::vector<std::string> phrases;
      for (std::size_t j = 0; j < n_phrases; ++j) {
        const auto& vocab = spec.clusters[(bridge && j % 2 == 1) ? partner : c].vocabulary;
        phrases.push_back(vocab[rng.below(vocab.size())]);
      }
      pub.citations = static_cast<std::int64_t>(rng.poisson(cluster.citation_rate));

      pub.title = detail::capitalized(detail::enumerate_phrases(phrases, 0, 2));
      std::vector<std::string> sentences;
      for (std::size_t j = 2; j < n_phrases; j += 3) {
        sentences.push_back(
            detail::capitalized(detail::enumerate_phrases(phrases, j, std::min(j + 3, n_phrases))) +
            ".");
      }
      pub.abstract = join(sentences, " ");
      corpus.publications.push_back(std::move(pub));
    }
  }
  return corpus;
}

}  // namespace termscape

#endif
