#include "commands.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "netml/dataset.hpp"
#include "netml/error.hpp"
#include "netml/experiments.hpp"
#include "netml/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace netml::app {

namespace {

enum class FieldType { kString, kPath, kInt, kUnsigned, kDouble, kBool, kStringList, kDoubleList };

struct Field {
  const char* name;
  FieldType type;
  const char* help;
};

const Field kFields[] = {
    {"project", FieldType::kString, "target project name"},
    {"bugs", FieldType::kPath, "bug reports (NDJSON)"},
    {"methods", FieldType::kPath, "method documents (NDJSON)"},
    {"spectra", FieldType::kPath, "execution traces (NDJSON)"},
    {"ground_truth", FieldType::kPath, "faulty methods per bug (NDJSON)"},
    {"source_project", FieldType::kString, "source project name (cross-project)"},
    {"source_bugs", FieldType::kPath, "source bug reports"},
    {"source_methods", FieldType::kPath, "source method documents"},
    {"source_spectra", FieldType::kPath, "source execution traces"},
    {"source_ground_truth", FieldType::kPath, "source ground truth"},
    {"stopwords", FieldType::kPath, "stopword list, one per line"},
    {"keywords", FieldType::kPath, "programming keyword list, one per line"},
    {"stemmer", FieldType::kString, "porter or none"},
    {"keep_original_identifiers", FieldType::kBool, "keep compound identifiers next to their parts"},
    {"min_weight", FieldType::kDouble, "drop similarity edges with weight <= this"},
    {"top_k_per_node", FieldType::kUnsigned, "keep only each node's k strongest edges (0 = all)"},
    {"model", FieldType::kString, "netml, aml, tarantula, ochiai or dstar"},
    {"models", FieldType::kStringList, "models to evaluate; the first is compared against the rest"},
    {"alpha", FieldType::kDouble, "ridge strength"},
    {"beta", FieldType::kDouble, "network lasso strength"},
    {"k", FieldType::kUnsigned, "history neighbors per query"},
    {"t_max", FieldType::kInt, "outer Newton sweeps"},
    {"eta0", FieldType::kDouble, "initial step size"},
    {"aml_lambda", FieldType::kDouble, "AML ridge strength"},
    {"aml_eta", FieldType::kDouble, "AML learning rate"},
    {"aml_t_max", FieldType::kInt, "AML epochs"},
    {"dstar_star", FieldType::kInt, "D* exponent"},
    {"folds", FieldType::kUnsigned, "cross-validation folds"},
    {"tune", FieldType::kBool, "grid-search alpha and beta by inner cross-validation"},
    {"inner_folds", FieldType::kUnsigned, "inner cross-validation folds"},
    {"alpha_grid", FieldType::kDoubleList, "alpha candidates"},
    {"beta_grid", FieldType::kDoubleList, "beta candidates"},
    {"pairing", FieldType::kString, "per-bug or per-fold significance pairing"},
    {"seed", FieldType::kUnsigned, "random seed (required)"},
    {"output", FieldType::kPath, "output directory"},
    {"bug", FieldType::kString, "query bug id (localize)"},
};

const Field* find_field(const std::string& name) {
  for (const auto& f : kFields)
    if (name == f.name) return &f;
  return nullptr;
}

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorCode::kConfig, message); }

template <typename T>
T parse_number(const std::string& name, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) config_error("--" + name + ": cannot parse '" + text + "'");
  return value;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

json parse_override(const Field& field, const std::string& text) {
  const std::string name = field.name;
  switch (field.type) {
    case FieldType::kString:
    case FieldType::kPath: return text;
    case FieldType::kInt: return parse_number<std::int64_t>(name, text);
    case FieldType::kUnsigned: return parse_number<std::uint64_t>(name, text);
    case FieldType::kDouble: return parse_number<double>(name, text);
    case FieldType::kBool:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      config_error("--" + name + ": expected true or false, got '" + text + "'");
    case FieldType::kStringList: return split_commas(text);
    case FieldType::kDoubleList: {
      json list = json::array();
      for (const auto& item : split_commas(text)) list.push_back(parse_number<double>(name, item));
      return list;
    }
  }
  return text;
}

bool type_matches(const Field& field, const json& value) {
  switch (field.type) {
    case FieldType::kString:
    case FieldType::kPath: return value.is_string();
    case FieldType::kInt: return value.is_number_integer();
    case FieldType::kUnsigned: return value.is_number_unsigned();
    case FieldType::kDouble: return value.is_number();
    case FieldType::kBool: return value.is_boolean();
    case FieldType::kStringList:
      return value.is_array() && std::all_of(value.begin(), value.end(), [](const json& v) { return v.is_string(); });
    case FieldType::kDoubleList:
      return value.is_array() && std::all_of(value.begin(), value.end(), [](const json& v) { return v.is_number(); });
  }
  return false;
}

/// Settings merged from the config file and command-line overrides.
class Settings {
 public:
  void load_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config '" + path.string() + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      config_error("config '" + path.string() + "': " + e.what());
    }
    if (!doc.is_object()) config_error("config '" + path.string() + "' must be a JSON object");
    const fs::path base = path.parent_path();
    for (auto& [key, value] : doc.items()) {
      const Field* field = find_field(key);
      if (!field) config_error("unknown config field '" + key + "'");
      if (!type_matches(*field, value)) config_error("config field '" + key + "' has the wrong type");
      // Relative paths in a config file are relative to that file.
      if (field->type == FieldType::kPath && fs::path(value.get<std::string>()).is_relative())
        values_[key] = (base / value.get<std::string>()).string();
      else
        values_[key] = value;
    }
  }

  void apply_override(const Field& field, const std::string& text) { values_[field.name] = parse_override(field, text); }

  bool has(const std::string& key) const { return values_.contains(key); }

  std::string string(const std::string& key, const std::string& fallback = {}) const {
    return has(key) ? values_.at(key).get<std::string>() : fallback;
  }
  fs::path path(const std::string& key) const { return has(key) ? fs::path(string(key)) : fs::path(); }
  fs::path required_path(const std::string& key) const {
    if (!has(key)) config_error("missing required setting '" + key + "'");
    return path(key);
  }
  template <typename T>
  T number(const std::string& key, T fallback) const {
    return has(key) ? values_.at(key).get<T>() : fallback;
  }
  bool flag(const std::string& key, bool fallback) const { return has(key) ? values_.at(key).get<bool>() : fallback; }
  std::vector<std::string> strings(const std::string& key) const {
    return has(key) ? values_.at(key).get<std::vector<std::string>>() : std::vector<std::string>{};
  }
  std::vector<double> doubles(const std::string& key, std::vector<double> fallback) const {
    return has(key) ? values_.at(key).get<std::vector<double>>() : fallback;
  }

 private:
  std::map<std::string, json> values_;
};

ProjectOptions project_options(const Settings& s) {
  ProjectOptions options;
  if (s.has("stopwords")) options.preprocess.stopwords = PreprocessConfig::load_word_list(s.path("stopwords"));
  if (s.has("keywords")) options.preprocess.keywords = PreprocessConfig::load_word_list(s.path("keywords"));
  const std::string stemmer = s.string("stemmer", "porter");
  if (stemmer == "porter") {
    options.preprocess.stemmer = Stemmer::kPorter;
  } else if (stemmer == "none") {
    options.preprocess.stemmer = Stemmer::kNone;
  } else {
    config_error("stemmer must be porter or none, got '" + stemmer + "'");
  }
  options.preprocess.keep_original_identifiers = s.flag("keep_original_identifiers", true);
  options.sparsify.min_weight = s.number<double>("min_weight", 0.0);
  if (const auto k = s.number<std::uint64_t>("top_k_per_node", 0); k > 0) options.sparsify.top_k_per_node = k;
  return options;
}

std::uint64_t seed_of(const Settings& s) {
  if (!s.has("seed")) config_error("missing required setting 'seed'");
  return s.number<std::uint64_t>("seed", 0);
}

ModelConfig model_config(const Settings& s) {
  ModelConfig c;
  c.kind = parse_model_kind(s.string("model", "netml"));
  c.hp.alpha = s.number<double>("alpha", c.hp.alpha);
  c.hp.beta = s.number<double>("beta", c.hp.beta);
  c.hp.k = s.number<std::uint64_t>("k", c.hp.k);
  c.hp.t_max = static_cast<int>(s.number<std::int64_t>("t_max", c.hp.t_max));
  c.hp.eta0 = s.number<double>("eta0", c.hp.eta0);
  c.aml.lambda = s.number<double>("aml_lambda", c.aml.lambda);
  c.aml.eta = s.number<double>("aml_eta", c.aml.eta);
  c.aml.t_max = static_cast<int>(s.number<std::int64_t>("aml_t_max", c.aml.t_max));
  c.dstar_star = static_cast<int>(s.number<std::int64_t>("dstar_star", c.dstar_star));
  c.seed = seed_of(s);
  c.validate();
  return c;
}

CvOptions cv_options(const Settings& s) {
  CvOptions o;
  o.folds = s.number<std::uint64_t>("folds", o.folds);
  o.tuning.enabled = s.flag("tune", false);
  o.tuning.inner_folds = s.number<std::uint64_t>("inner_folds", o.tuning.inner_folds);
  o.tuning.alpha_grid = s.doubles("alpha_grid", o.tuning.alpha_grid);
  o.tuning.beta_grid = s.doubles("beta_grid", o.tuning.beta_grid);
  if (o.tuning.enabled && (o.tuning.alpha_grid.empty() || o.tuning.beta_grid.empty()))
    config_error("tuning grids must not be empty");
  if (o.tuning.inner_folds < 2) config_error("inner_folds must be >= 2");
  return o;
}

Project load_target(const Settings& s) {
  DatasetPaths paths{s.required_path("bugs"), s.required_path("methods"), s.required_path("spectra"),
                     s.path("ground_truth")};
  return Project::load(s.string("project", "target"), paths, project_options(s));
}

bool has_source(const Settings& s) {
  return s.has("source_bugs") || s.has("source_methods") || s.has("source_spectra");
}

Project load_source(const Settings& s) {
  DatasetPaths paths{s.required_path("source_bugs"), s.required_path("source_methods"),
                     s.required_path("source_spectra"), s.required_path("source_ground_truth")};
  return Project::load(s.string("source_project", "source"), paths, project_options(s));
}

fs::path output_dir(const Settings& s) {
  const fs::path dir = s.required_path("output");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) config_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) config_error("cannot write '" + path.string() + "'");
  fn(out);
  out.flush();
  if (!out) config_error("failed writing '" + path.string() + "'");
  std::cout << path.string() << '\n';
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void cmd_preprocess(const Settings& s) {
  seed_of(s);
  const ProjectOptions options = project_options(s);
  std::vector<RawDocument> methods, bugs;
  {
    std::ifstream in(s.required_path("methods"));
    if (!in) config_error("cannot open '" + s.path("methods").string() + "'");
    methods = read_documents(in, DocumentKind::kMethod, s.path("methods").string());
  }
  if (s.has("bugs")) {
    std::ifstream in(s.path("bugs"));
    if (!in) config_error("cannot open '" + s.path("bugs").string() + "'");
    bugs = read_documents(in, DocumentKind::kBugReport, s.path("bugs").string());
  }
  auto by_id = [](const RawDocument& a, const RawDocument& b) { return a.id < b.id; };
  std::sort(methods.begin(), methods.end(), by_id);
  std::sort(bugs.begin(), bugs.end(), by_id);
  const CorpusBuild build = build_corpus(methods, bugs, options.preprocess);

  ordered_json body;
  body["methods"] = build.methods.size();
  body["bugs"] = build.bugs.size();
  std::vector<std::string> words;
  for (std::uint32_t t = 0; t < build.corpus.vocabulary_size(); ++t) words.push_back(build.corpus.term(t));
  std::sort(words.begin(), words.end());
  body["vocabulary"] = ordered_json::array();
  for (const auto& w : words)
    body["vocabulary"].push_back(ordered_json{{"term", w}, {"doc_freq", build.corpus.doc_freq(w)}, {"idf", build.corpus.idf(w)}});
  body["documents"] = ordered_json::array();
  for (const auto* docs : {&build.methods, &build.bugs}) {
    for (const auto& d : *docs) {
      ordered_json tokens = ordered_json::object();
      for (const auto& [w, c] : d.token_counts) tokens[w] = c;
      body["documents"].push_back(ordered_json{{"id", d.id}, {"kind", std::string(to_string(d.kind))}, {"tokens", tokens}});
    }
  }
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(body.dump())));
  ordered_json doc;
  doc["content_hash"] = std::string("fnv1a64:") + hash;
  for (auto& [key, value] : body.items()) doc[key] = value;
  write_file(output_dir(s) / "corpus.json", [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

void cmd_features(const Settings& s) {
  seed_of(s);
  const Project project = load_target(s);
  const fs::path dir = output_dir(s);
  write_file(dir / "features.csv", [&](std::ostream& out) { project.tensor.write_csv(out); });
  write_file(dir / "bug_graph.csv", [&](std::ostream& out) { project.bug_graph->write_csv(out); });
  write_file(dir / "method_graph.csv", [&](std::ostream& out) { project.method_graph->write_csv(out); });
}

void cmd_localize(const Settings& s) {
  const ModelConfig config = model_config(s);
  if (!s.has("bug")) config_error("missing required setting 'bug'");
  const std::string bug = s.string("bug");
  const Project target = load_target(s);
  std::optional<Project> source;
  if (has_source(s)) source = load_source(s);
  const Localizer localizer = source ? Localizer(*source, target) : Localizer(target);
  const Localization result = localizer.localize(bug, config);
  const fs::path dir = output_dir(s);
  write_file(dir / "ranking.csv", [&](std::ostream& out) { write_ranked_csv(out, result.ranked); });
  if (result.problem && result.fit)
    write_file(dir / "params.csv",
               [&](std::ostream& out) { write_params_csv(out, *result.problem, result.fit->params); });
}

std::vector<ModelKind> models_of(const Settings& s) {
  std::vector<ModelKind> out;
  const auto names = s.strings("models");
  if (names.empty()) {
    out = {ModelKind::kNetml, ModelKind::kAml, ModelKind::kTarantula, ModelKind::kOchiai, ModelKind::kDStar};
  } else {
    for (const auto& n : names) out.push_back(parse_model_kind(n));
  }
  return out;
}

void write_reports(const Settings& s, const std::vector<EvalReport>& reports) {
  const Pairing pairing = parse_pairing(s.string("pairing", "per-bug"));
  const auto comparisons = compare(reports, pairing);
  const fs::path dir = output_dir(s);
  write_file(dir / "report.json", [&](std::ostream& out) { write_report_json(out, reports, comparisons); });
  write_file(dir / "summary.csv", [&](std::ostream& out) { write_summary_csv(out, reports); });
  write_file(dir / "per_bug.csv", [&](std::ostream& out) { write_per_bug_csv(out, reports); });
  write_file(dir / "comparisons.csv", [&](std::ostream& out) { write_comparisons_csv(out, comparisons); });
}

void cmd_evaluate(const Settings& s) {
  const ModelConfig base = model_config(s);
  const CvOptions cv = cv_options(s);
  parse_pairing(s.string("pairing", "per-bug"));
  const Project project = load_target(s);
  std::vector<EvalReport> reports;
  for (ModelKind kind : models_of(s)) {
    ModelConfig c = base;
    c.kind = kind;
    reports.push_back(cross_validate(project, c, cv));
  }
  write_reports(s, reports);
}

void cmd_cross_project(const Settings& s) {
  const ModelConfig base = model_config(s);
  parse_pairing(s.string("pairing", "per-bug"));
  if (!has_source(s)) config_error("cross-project needs source_bugs, source_methods, source_spectra and source_ground_truth");
  const Project source = load_source(s);
  const Project target = load_target(s);
  std::vector<EvalReport> reports;
  for (ModelKind kind : models_of(s)) {
    ModelConfig c = base;
    c.kind = kind;
    reports.push_back(cross_project(source, target, c));
  }
  write_reports(s, reports);
}

void cmd_ablate(const Settings& s) {
  const ModelConfig base = model_config(s);
  if (!is_supervised(base.kind)) config_error("ablation needs a supervised model (netml or aml)");
  const CvOptions cv = cv_options(s);
  parse_pairing(s.string("pairing", "per-bug"));
  const Project target = load_target(s);
  std::optional<Project> source;
  if (has_source(s)) source = load_source(s);

  const std::string name(to_string(base.kind));
  std::vector<std::pair<std::string, FeatureMask>> variants{{name, {true, true, true}}};
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    FeatureMask mask{true, true, true};
    mask[j] = false;
    variants.emplace_back(name + "-" + std::string(feature_name(j)), mask);
  }
  std::vector<EvalReport> reports;
  for (const auto& [label, mask] : variants) {
    ModelConfig c = base;
    c.features = mask;
    EvalReport r = source ? cross_project(*source, target, c) : cross_validate(target, c, cv);
    r.model = label;
    reports.push_back(std::move(r));
  }
  write_reports(s, reports);
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Multi-modal bug localization with network-lasso regularized learning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "netml 0.1.0");

  struct Command {
    const char* name;
    const char* help;
    void (*fn)(const Settings&);
  };
  const Command commands[] = {
      {"preprocess", "preprocess documents and write a corpus snapshot", cmd_preprocess},
      {"features", "write the feature tensor and similarity graphs", cmd_features},
      {"localize", "rank methods for one bug", cmd_localize},
      {"evaluate", "cross-validate models and compare them", cmd_evaluate},
      {"ablate", "cross-validate with one feature dropped at a time", cmd_ablate},
      {"cross-project", "train on a source project, evaluate on the target", cmd_cross_project},
  };

  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::map<std::string, CLI::App*> subcommands;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "JSON config file");
    for (const auto& f : kFields) sub->add_option(std::string("--") + f.name, overrides[f.name], f.help);
    subcommands[c.name] = sub;
  }

  std::vector<std::string> argv_tail(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code(ErrorCode::kConfig);
  }

  try {
    Settings settings;
    if (!config_path.empty()) settings.load_file(config_path);
    for (const auto& f : kFields) {
      const auto& sub = subcommands;
      bool given = false;
      for (const auto& [name, cmd] : sub)
        if (cmd->parsed() && cmd->count(std::string("--") + f.name) > 0) given = true;
      if (given) settings.apply_override(f, overrides[f.name]);
    }
    for (const auto& c : commands)
      if (subcommands[c.name]->parsed()) c.fn(settings);
    return 0;
  } catch (const Error& e) {
    std::cerr << "netml: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const json::exception& e) {
    std::cerr << "netml: Config: " << e.what() << '\n';
    return exit_code(ErrorCode::kConfig);
  } catch (const std::exception& e) {
    std::cerr << "netml: internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace netml::app
