#include "netml/experiments.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <ostream>

#include "netml/csv.hpp"
#include "netml/error.hpp"
#include "netml/rng.hpp"

namespace netml {

std::vector<std::size_t> assign_folds(std::size_t n, std::size_t folds, std::uint64_t seed) {
  if (folds < 1 || folds > n)
    throw Error(ErrorCode::kConfig, "need 1 <= folds <= " + std::to_string(n) + ", got " + std::to_string(folds));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = Rng::substream(seed, "folds");
  rng.shuffle(order);
  std::vector<std::size_t> fold(n);
  for (std::size_t i = 0; i < n; ++i) fold[order[i]] = i % folds;
  return fold;
}

std::size_t EvalReport::top_n(std::size_t n) const {
  return static_cast<std::size_t>(
      std::count_if(bugs.begin(), bugs.end(), [n](const BugEvaluation& b) { return b.best_rank <= n; }));
}

double EvalReport::top_n_proportion(std::size_t n) const {
  return bugs.empty() ? 0.0 : static_cast<double>(top_n(n)) / static_cast<double>(bugs.size());
}

double EvalReport::map() const {
  if (bugs.empty()) return 0.0;
  std::vector<double> aps;
  for (const auto& b : bugs) aps.push_back(b.average_precision);
  return mean_average_precision(aps);
}

std::vector<double> EvalReport::fold_map() const {
  std::vector<double> sum(folds, 0.0);
  std::vector<std::size_t> count(folds, 0);
  for (const auto& b : bugs) {
    sum.at(b.fold) += b.average_precision;
    ++count.at(b.fold);
  }
  for (std::size_t f = 0; f < folds; ++f)
    if (count[f] > 0) sum[f] /= static_cast<double>(count[f]);
  return sum;
}

std::vector<BugResult> EvalReport::bug_results() const {
  std::vector<BugResult> out;
  for (const auto& b : bugs) out.push_back({b.bug_id, b.average_precision, b.best_rank, b.fold});
  return out;
}

namespace {

std::vector<std::string> labeled_bugs(const Project& project) {
  std::vector<std::string> out;
  for (const auto& id : project.bug_ids())
    if (project.is_labeled(id)) out.push_back(id);
  return out;
}

BugEvaluation evaluate_query(const Localizer& localizer, const std::string& query,
                             const std::vector<std::string>& history, const ModelConfig& config, std::size_t fold) {
  const Localization result = localizer.localize(query, history, config);
  const auto& faulty = localizer.target().faulty(query);
  return BugEvaluation{query, fold, average_precision(result.ranked, faulty), best_faulty_rank(result.ranked, faulty),
                       config.hp.alpha, config.hp.beta};
}

double inner_map(const Localizer& localizer, const std::vector<std::string>& bugs,
                 const std::vector<std::size_t>& fold_of, std::size_t folds, const ModelConfig& config) {
  double sum = 0.0;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::string> train;
    for (std::size_t i = 0; i < bugs.size(); ++i)
      if (fold_of[i] != f) train.push_back(bugs[i]);
    for (std::size_t i = 0; i < bugs.size(); ++i)
      if (fold_of[i] == f) sum += evaluate_query(localizer, bugs[i], train, config, f).average_precision;
  }
  return sum / static_cast<double>(bugs.size());
}

ModelConfig tune(const Localizer& localizer, const std::vector<std::string>& train, const ModelConfig& config,
                 const TuningOptions& tuning, std::uint64_t seed) {
  if (train.size() < 2) return config;
  const std::size_t folds = std::min(tuning.inner_folds, train.size());
  const auto fold_of = assign_folds(train.size(), folds, seed);
  ModelConfig best = config;
  double best_map = -1.0;
  for (double alpha : tuning.alpha_grid) {
    for (double beta : tuning.beta_grid) {
      ModelConfig candidate = config;
      candidate.hp.alpha = alpha;
      candidate.hp.beta = beta;
      const double m = inner_map(localizer, train, fold_of, folds, candidate);
      if (m > best_map) {
        best_map = m;
        best = candidate;
      }
    }
  }
  return best;
}

}  // namespace

EvalReport cross_validate(const Project& project, const ModelConfig& config, const CvOptions& options) {
  config.validate();
  const auto queries = labeled_bugs(project);
  if (queries.size() < options.folds)
    throw Error(ErrorCode::kConfig, "cross-validation needs at least " + std::to_string(options.folds) +
                                        " labeled bugs, project '" + project.name + "' has " +
                                        std::to_string(queries.size()));
  const auto fold_of = assign_folds(queries.size(), options.folds, config.seed);
  const Localizer localizer(project);

  EvalReport report;
  report.model = std::string(to_string(config.kind));
  report.mode = "cross-validation";
  report.seed = config.seed;
  report.folds = options.folds;
  for (std::size_t f = 0; f < options.folds; ++f) {
    std::vector<std::string> train;
    for (std::size_t i = 0; i < queries.size(); ++i)
      if (fold_of[i] != f) train.push_back(queries[i]);
    ModelConfig fold_config = config;
    if (options.tuning.enabled && config.kind == ModelKind::kNetml)
      fold_config = tune(localizer, train, config, options.tuning,
                         Rng::substream(config.seed, "tune/" + std::to_string(f)).next());
    for (std::size_t i = 0; i < queries.size(); ++i)
      if (fold_of[i] == f) report.bugs.push_back(evaluate_query(localizer, queries[i], train, fold_config, f));
  }
  std::sort(report.bugs.begin(), report.bugs.end(),
            [](const BugEvaluation& a, const BugEvaluation& b) { return a.bug_id < b.bug_id; });
  return report;
}

EvalReport cross_project(const Project& source, const Project& target, const ModelConfig& config) {
  config.validate();
  const Localizer localizer(source, target);
  const auto history = labeled_bugs(source);
  EvalReport report;
  report.model = std::string(to_string(config.kind));
  report.mode = "cross-project";
  report.seed = config.seed;
  report.folds = 1;
  for (const auto& query : labeled_bugs(target))
    report.bugs.push_back(evaluate_query(localizer, query, history, config, 0));
  return report;
}

std::string_view to_string(Pairing pairing) { return pairing == Pairing::kPerBug ? "per-bug" : "per-fold"; }

Pairing parse_pairing(std::string_view text) {
  if (text == "per-bug") return Pairing::kPerBug;
  if (text == "per-fold") return Pairing::kPerFold;
  throw Error(ErrorCode::kConfig, "pairing must be per-bug or per-fold, got '" + std::string(text) + "'");
}

std::vector<Comparison> compare(const std::vector<EvalReport>& reports, Pairing pairing) {
  std::vector<Comparison> out;
  if (reports.size() < 2) return out;
  const EvalReport& ref = reports.front();
  std::vector<double> raw;
  std::vector<std::size_t> tested;
  for (std::size_t r = 1; r < reports.size(); ++r) {
    const EvalReport& other = reports[r];
    Comparison c;
    c.model = ref.model;
    c.baseline = other.model;
    c.pairing = pairing;
    c.delta = delta_analysis(ref.bug_results(), other.bug_results());
    std::vector<double> xs, ys;
    if (pairing == Pairing::kPerBug) {
      for (std::size_t i = 0; i < ref.bugs.size(); ++i) {
        xs.push_back(ref.bugs[i].average_precision);
        ys.push_back(other.bugs[i].average_precision);
      }
    } else {
      if (ref.folds != other.folds) throw Error(ErrorCode::kMalformedInput, "per-fold pairing needs equal fold counts");
      xs = ref.fold_map();
      ys = other.fold_map();
    }
    try {
      c.wilcoxon = wilcoxon_signed_rank(xs, ys);
      raw.push_back(c.wilcoxon->p_value);
      tested.push_back(out.size());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTooFewPairs) throw;
    }
    out.push_back(std::move(c));
  }
  const auto adjusted = benjamini_hochberg(raw);
  for (std::size_t i = 0; i < tested.size(); ++i) out[tested[i]].p_adjusted = adjusted[i];
  return out;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json delta_json(const DeltaClass& c) {
  return ordered_json{{"count", c.count},
                      {"empty", c.empty()},
                      {"expected_delta_ap", c.expected_delta_ap},
                      {"expected_delta_rank", c.expected_delta_rank}};
}

}  // namespace

void write_report_json(std::ostream& out, const std::vector<EvalReport>& reports,
                       const std::vector<Comparison>& comparisons) {
  ordered_json doc;
  doc["models"] = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json m;
    m["model"] = r.model;
    m["mode"] = r.mode;
    m["seed"] = r.seed;
    m["folds"] = r.folds;
    m["bugs"] = r.bugs.size();
    for (std::size_t n : {1, 5, 10})
      m["top" + std::to_string(n)] = ordered_json{{"count", r.top_n(n)}, {"proportion", r.top_n_proportion(n)}};
    m["map"] = r.map();
    m["per_bug"] = ordered_json::array();
    for (const auto& b : r.bugs)
      m["per_bug"].push_back(ordered_json{{"bug_id", b.bug_id},
                                          {"fold", b.fold},
                                          {"average_precision", b.average_precision},
                                          {"best_rank", b.best_rank},
                                          {"alpha", b.alpha},
                                          {"beta", b.beta}});
    doc["models"].push_back(std::move(m));
  }
  doc["comparisons"] = ordered_json::array();
  for (const auto& c : comparisons) {
    ordered_json j;
    j["model"] = c.model;
    j["baseline"] = c.baseline;
    j["pairing"] = std::string(to_string(c.pairing));
    if (c.wilcoxon) {
      j["wilcoxon"] = ordered_json{{"n", c.wilcoxon->n},
                                   {"statistic", c.wilcoxon->statistic},
                                   {"p_value", c.wilcoxon->p_value},
                                   {"exact", c.wilcoxon->exact},
                                   {"all_zero", c.wilcoxon->all_zero}};
    } else {
      j["wilcoxon"] = nullptr;
    }
    j["p_adjusted"] = c.p_adjusted;
    j["delta"] = ordered_json{{"improved", delta_json(c.delta.improved)},
                              {"deteriorated", delta_json(c.delta.deteriorated)},
                              {"unchanged", delta_json(c.delta.unchanged)}};
    doc["comparisons"].push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
  csv::write_row(out, {"model", "bugs", "top1", "top1_pct", "top5", "top5_pct", "top10", "top10_pct", "map"});
  for (const auto& r : reports) {
    std::vector<std::string> row{r.model, std::to_string(r.bugs.size())};
    for (std::size_t n : {1, 5, 10}) {
      row.push_back(std::to_string(r.top_n(n)));
      row.push_back(csv::format_double(100.0 * r.top_n_proportion(n)));
    }
    row.push_back(csv::format_double(r.map()));
    csv::write_row(out, row);
  }
}

void write_per_bug_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
  csv::write_row(out, {"model", "bug_id", "fold", "average_precision", "best_rank", "alpha", "beta"});
  for (const auto& r : reports)
    for (const auto& b : r.bugs)
      csv::write_row(out, {r.model, b.bug_id, std::to_string(b.fold), csv::format_double(b.average_precision),
                           std::to_string(b.best_rank), csv::format_double(b.alpha), csv::format_double(b.beta)});
}

void write_comparisons_csv(std::ostream& out, const std::vector<Comparison>& comparisons) {
  csv::write_row(out, {"model", "baseline", "pairing", "n", "statistic", "p_value", "p_adjusted", "improved",
                       "improved_delta_ap", "improved_delta_rank", "deteriorated", "deteriorated_delta_ap",
                       "deteriorated_delta_rank", "unchanged"});
  for (const auto& c : comparisons) {
    std::vector<std::string> row{c.model, c.baseline, std::string(to_string(c.pairing))};
    if (c.wilcoxon) {
      row.push_back(std::to_string(c.wilcoxon->n));
      row.push_back(csv::format_double(c.wilcoxon->statistic));
      row.push_back(csv::format_double(c.wilcoxon->p_value));
    } else {
      row.insert(row.end(), {"NA", "NA", "NA"});
    }
    row.push_back(csv::format_double(c.p_adjusted));
    row.push_back(std::to_string(c.delta.improved.count));
    row.push_back(csv::format_double(c.delta.improved.expected_delta_ap));
    row.push_back(csv::format_double(c.delta.improved.expected_delta_rank));
    row.push_back(std::to_string(c.delta.deteriorated.count));
    row.push_back(csv::format_double(c.delta.deteriorated.expected_delta_ap));
    row.push_back(csv::format_double(c.delta.deteriorated.expected_delta_rank));
    row.push_back(std::to_string(c.delta.unchanged.count));
    csv::write_row(out, row);
  }
}

}  // namespace netml
