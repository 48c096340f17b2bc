#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "netml/features.hpp"
#include "netml/graphs.hpp"

namespace netml {

using ParamVector = std::array<double, kNumFeatures>;

/// Per-bug u_b and per-method v_m, aligned with a problem's rows/columns.
struct IntegratorParams {
  std::vector<ParamVector> u;
  std::vector<ParamVector> v;

  static IntegratorParams zeros(std::size_t n_bugs, std::size_t n_methods);
};

struct HyperParams {
  double alpha = 0.1;       // ridge, > 0
  double beta = 0.1;        // network lasso, >= 0
  std::size_t k = 10;       // neighbors
  int t_max = 30;           // outer Newton sweeps
  double eta0 = 1.0;        // initial damping, (0, 1]

  /// Throws Config on out-of-range values.
  void validate() const;
};

/// Training subproblem for one query: rows are bugs (B_K plus the query),
/// columns are methods. Unlabeled cells carry no entropy term.
struct NetmlProblem {
  std::vector<std::string> bug_ids;
  std::vector<std::string> method_ids;
  std::vector<FeatureVector> x;  // row-major
  std::vector<Label> y;
  std::vector<double> w;         // instance weights, 0 for unlabeled cells
  // Shared so per-query problems can reuse a project's method graph.
  std::shared_ptr<const SimilarityGraph> bug_graph;     // nodes == bug_ids
  std::shared_ptr<const SimilarityGraph> method_graph;  // nodes == method_ids
  std::size_t query_row = 0;

  std::size_t n_bugs() const { return bug_ids.size(); }
  std::size_t n_methods() const { return method_ids.size(); }
  std::size_t cell(std::size_t b, std::size_t m) const { return b * method_ids.size() + m; }

  /// Throws MalformedInput on shape mismatches.
  void validate() const;
};

/// 1/N_faulty for positives, 1/(N - N_faulty) for negatives, 0 for absent.
/// Throws DegenerateLabels when a class is empty.
std::vector<double> instance_weights(std::span<const Label> labels);

/// sum_j (u_j + v_j) x_j
double predict_score(const FeatureVector& x, const ParamVector& u, const ParamVector& v);

/// 1 / (1 + exp(-z)), evaluated without overflow.
double logistic(double z);

struct LossBreakdown {
  double entropy = 0.0;
  double ridge = 0.0;
  double lasso = 0.0;
  double total() const { return entropy + ridge + lasso; }
};

/// Probabilities are clamped to [1e-12, 1 - 1e-12] inside the logarithms.
inline constexpr double kProbabilityClamp = 1e-12;

/// Weighted cross-entropy over labeled cells plus (alpha/2)||params||^2 plus
/// (beta/2) sum over graph edges of e * ||p_i - p_j||^2 (each edge once).
LossBreakdown loss_full(const NetmlProblem& problem, const IntegratorParams& params,
                        double alpha, double beta);

/// Weighted cross-entropy from cached probabilities.
double entropy_loss(const NetmlProblem& problem, std::span<const double> probabilities);

/// sigma(f_{b,m}) for every cell.
std::vector<double> probabilities(const NetmlProblem& problem, const IntegratorParams& params);

struct Derivatives {
  double gradient = 0.0;
  double curvature = 0.0;
};

/// First and second partial derivative of loss_full with respect to u_{b,j}
/// (resp. v_{m,j}), using the supplied probabilities.
Derivatives grad_hess_u(const NetmlProblem& problem, const IntegratorParams& params,
                        std::span<const double> probabilities, std::size_t bug, std::size_t j,
                        double alpha, double beta);
Derivatives grad_hess_v(const NetmlProblem& problem, const IntegratorParams& params,
                        std::span<const double> probabilities, std::size_t method, std::size_t j,
                        double alpha, double beta);

struct FitResult {
  IntegratorParams params;
  std::vector<double> query_scores;     // f_{b*,m} per method column
  std::vector<double> entropy_trace;    // index 0 is the initial entropy
  std::vector<double> eta_trace;        // eta in effect for each sweep
};

/// Damped per-feature Newton sweeps with adaptive step size.
///
/// Parameters start at zero. Each outer iteration visits features j = 1..3;
/// for each j the neighbor sums of u are frozen, every u_{b,j} takes a damped
/// Newton step, then the same for v_{m,j}. Probabilities are refreshed once
/// per outer iteration. eta halves when the entropy rose, otherwise doubles
/// (capped at 1). Throws NonFiniteState if a parameter stops being finite.
FitResult fit(const NetmlProblem& problem, const HyperParams& hp);

/// CSV "node_id,kind,p1,p2,p3" with kind bug/method.
void write_params_csv(std::ostream& out, const NetmlProblem& problem,
                      const IntegratorParams& params);

}  // namespace netml
