#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netml/aml.hpp"
#include "netml/dataset.hpp"
#include "netml/integrator.hpp"
#include "netml/ranking.hpp"

namespace netml {

enum class ModelKind { kNetml, kAml, kTarantula, kOchiai, kDStar };

std::string_view to_string(ModelKind kind);
/// Accepts netml, aml, tarantula, ochiai, dstar. Throws Config.
ModelKind parse_model_kind(std::string_view text);
bool is_supervised(ModelKind kind);

/// Which of the three feature columns a supervised model sees; a disabled
/// column is zeroed.
using FeatureMask = std::array<bool, kNumFeatures>;

struct ModelConfig {
  ModelKind kind = ModelKind::kNetml;
  HyperParams hp;
  AmlConfig aml;
  int dstar_star = 2;
  std::uint64_t seed = 0;
  FeatureMask features{true, true, true};

  void validate() const;
};

struct Localization {
  RankedList ranked;
  std::vector<std::string> neighbors;  // B_K, most similar first
  std::optional<NetmlProblem> problem;  // netml only
  std::optional<FitResult> fit;         // netml only
  std::optional<AmlParams> aml;         // aml only
};

/// Ranks a project's methods for one query bug at a time.
///
/// Within a project, history bugs come from the same project. Across
/// projects, every source bug is history: source bugs are re-vectorized
/// against the target corpus so they can be compared with the query, and the
/// working method set is the target's methods followed by the source's
/// (each bug only has features and labels on its own project's methods).
class Localizer {
 public:
  explicit Localizer(const Project& project);
  Localizer(const Project& source, const Project& target);

  /// `history` holds bug ids of the history project; the query itself is
  /// skipped if present. Supervised models throw EmptyHistory on an empty
  /// history and MissingLabels on unlabeled history bugs.
  Localization localize(const std::string& query, const std::vector<std::string>& history,
                        const ModelConfig& config) const;

  /// History = every labeled bug of the history project other than the query.
  Localization localize(const std::string& query, const ModelConfig& config) const;

  const Project& target() const { return target_; }
  const Project& history_project() const { return source_ ? *source_ : target_; }
  bool cross_project() const { return source_ != nullptr; }

 private:
  struct Row {
    const Project* project;
    std::size_t tensor_row;
    std::size_t column_offset;
    bool labeled;
  };

  std::string history_node(const std::string& bug_id) const;
  Row row_of(const std::string& node) const;
  std::vector<double> unsupervised_scores(const std::string& query, const ModelConfig& config) const;

  const Project& target_;
  const Project* source_ = nullptr;
  std::vector<std::string> columns_;
  std::size_t target_columns_ = 0;
  std::shared_ptr<const SimilarityGraph> bug_graph_;
  std::shared_ptr<const SimilarityGraph> method_graph_;
};

/// Node-id prefix given to source-project bugs and methods in cross-project mode.
inline constexpr std::string_view kSourcePrefix = "source/";

}  // namespace netml
