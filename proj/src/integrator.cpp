#include "netml/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "netml/csv.hpp"
#include "netml/error.hpp"

namespace netml {

IntegratorParams IntegratorParams::zeros(std::size_t n_bugs, std::size_t n_methods) {
  return IntegratorParams{std::vector<ParamVector>(n_bugs, ParamVector{}),
                          std::vector<ParamVector>(n_methods, ParamVector{})};
}

void HyperParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::kConfig, "alpha must be > 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::kConfig, "beta must be >= 0");
  if (k < 1) throw Error(ErrorCode::kConfig, "K must be >= 1");
  if (t_max < 0) throw Error(ErrorCode::kConfig, "T_max must be >= 0");
  if (!(eta0 > 0.0 && eta0 <= 1.0)) throw Error(ErrorCode::kConfig, "eta0 must lie in (0, 1]");
}

void NetmlProblem::validate() const {
  const std::size_t cells = n_bugs() * n_methods();
  if (x.size() != cells || y.size() != cells || w.size() != cells)
    throw Error(ErrorCode::kMalformedInput, "problem arrays do not match bugs x methods");
  if (!bug_graph || !method_graph) throw Error(ErrorCode::kMalformedInput, "problem graphs missing");
  if (bug_graph->size() != n_bugs() || method_graph->size() != n_methods())
    throw Error(ErrorCode::kMalformedInput, "problem graphs do not match bugs/methods");
  if (n_bugs() == 0 || query_row >= n_bugs())
    throw Error(ErrorCode::kMalformedInput, "problem query row out of range");
}

std::vector<double> instance_weights(std::span<const Label> labels) {
  std::size_t positives = 0;
  std::size_t negatives = 0;
  for (Label l : labels) {
    if (l == Label::kPositive) ++positives;
    if (l == Label::kNegative) ++negatives;
  }
  if (positives == 0 || negatives == 0)
    throw Error(ErrorCode::kDegenerateLabels, "instance weights need both faulty and non-faulty instances (" +
                                                  std::to_string(positives) + " faulty, " +
                                                  std::to_string(negatives) + " non-faulty)");
  const double n = static_cast<double>(positives + negatives);
  const double w_pos = 1.0 / static_cast<double>(positives);
  const double w_neg = 1.0 / (n - static_cast<double>(positives));
  std::vector<double> w(labels.size(), 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == Label::kPositive) w[i] = w_pos;
    if (labels[i] == Label::kNegative) w[i] = w_neg;
  }
  return w;
}

double predict_score(const FeatureVector& x, const ParamVector& u, const ParamVector& v) {
  double f = 0.0;
  for (std::size_t j = 0; j < kNumFeatures; ++j) f += (u[j] + v[j]) * x[j];
  return f;
}

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> probabilities(const NetmlProblem& problem, const IntegratorParams& params) {
  std::vector<double> sigma(problem.x.size());
  for (std::size_t b = 0; b < problem.n_bugs(); ++b)
    for (std::size_t m = 0; m < problem.n_methods(); ++m) {
      const std::size_t i = problem.cell(b, m);
      sigma[i] = logistic(predict_score(problem.x[i], params.u[b], params.v[m]));
    }
  return sigma;
}

double entropy_loss(const NetmlProblem& problem, std::span<const double> sigma) {
  double loss = 0.0;
  for (std::size_t i = 0; i < problem.y.size(); ++i) {
    if (problem.y[i] == Label::kAbsent) continue;
    const double s = std::clamp(sigma[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
    loss -= problem.w[i] * (problem.y[i] == Label::kPositive ? std::log(s) : std::log(1.0 - s));
  }
  return loss;
}

namespace {

double graph_penalty(const SimilarityGraph& graph, const std::vector<ParamVector>& p) {
  double sum = 0.0;
  for (std::size_t a = 0; a < graph.size(); ++a) {
    for (const auto& n : graph.neighbors(a)) {
      if (n.node <= a) continue;
      double sq = 0.0;
      for (std::size_t j = 0; j < kNumFeatures; ++j) {
        const double d = p[a][j] - p[n.node][j];
        sq += d * d;
      }
      sum += n.weight * sq;
    }
  }
  return sum;
}

double squared_sum(const std::vector<ParamVector>& p) {
  double sum = 0.0;
  for (const auto& row : p)
    for (double value : row) sum += value * value;
  return sum;
}

double neighbor_sum(const SimilarityGraph& graph, const std::vector<ParamVector>& p, std::size_t node,
                    std::size_t j) {
  double sum = 0.0;
  for (const auto& n : graph.neighbors(node)) sum += n.weight * p[n.node][j];
  return sum;
}

}  // namespace

LossBreakdown loss_full(const NetmlProblem& problem, const IntegratorParams& params, double alpha, double beta) {
  LossBreakdown loss;
  loss.entropy = entropy_loss(problem, probabilities(problem, params));
  loss.ridge = 0.5 * alpha * (squared_sum(params.u) + squared_sum(params.v));
  loss.lasso = 0.5 * beta * (graph_penalty((*problem.bug_graph), params.u) + graph_penalty((*problem.method_graph), params.v));
  return loss;
}

Derivatives grad_hess_u(const NetmlProblem& problem, const IntegratorParams& params,
                        std::span<const double> sigma, std::size_t bug, std::size_t j, double alpha,
                        double beta) {
  Derivatives d;
  for (std::size_t m = 0; m < problem.n_methods(); ++m) {
    const std::size_t i = problem.cell(bug, m);
    if (problem.y[i] == Label::kAbsent) continue;
    const double xj = problem.x[i][j];
    const double y = problem.y[i] == Label::kPositive ? 1.0 : 0.0;
    d.gradient += problem.w[i] * (sigma[i] - y) * xj;
    d.curvature += problem.w[i] * sigma[i] * (1.0 - sigma[i]) * xj * xj;
  }
  const double u = params.u[bug][j];
  const double q = (*problem.bug_graph).degree(bug);
  d.gradient += alpha * u + beta * (u * q - neighbor_sum((*problem.bug_graph), params.u, bug, j));
  d.curvature += alpha + beta * q;
  return d;
}

Derivatives grad_hess_v(const NetmlProblem& problem, const IntegratorParams& params,
                        std::span<const double> sigma, std::size_t method, std::size_t j, double alpha,
                        double beta) {
  Derivatives d;
  for (std::size_t b = 0; b < problem.n_bugs(); ++b) {
    const std::size_t i = problem.cell(b, method);
    if (problem.y[i] == Label::kAbsent) continue;
    const double xj = problem.x[i][j];
    const double y = problem.y[i] == Label::kPositive ? 1.0 : 0.0;
    d.gradient += problem.w[i] * (sigma[i] - y) * xj;
    d.curvature += problem.w[i] * sigma[i] * (1.0 - sigma[i]) * xj * xj;
  }
  const double v = params.v[method][j];
  const double q = (*problem.method_graph).degree(method);
  d.gradient += alpha * v + beta * (v * q - neighbor_sum((*problem.method_graph), params.v, method, j));
  d.curvature += alpha + beta * q;
  return d;
}

namespace {

void require_finite(const IntegratorParams& params, const NetmlProblem& problem, int iteration, double entropy) {
  auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg << "non-finite " << what << " after sweep " << iteration << " (entropy " << entropy << ")";
    throw Error(ErrorCode::kNonFiniteState, msg.str());
  };
  for (std::size_t b = 0; b < params.u.size(); ++b)
    for (double value : params.u[b])
      if (!std::isfinite(value)) fail("u for bug '" + problem.bug_ids[b] + "'");
  for (std::size_t m = 0; m < params.v.size(); ++m)
    for (double value : params.v[m])
      if (!std::isfinite(value)) fail("v for method '" + problem.method_ids[m] + "'");
  if (!std::isfinite(entropy)) fail("entropy");
}

}  // namespace

FitResult fit(const NetmlProblem& problem, const HyperParams& hp) {
  hp.validate();
  problem.validate();
  const std::size_t n_bugs = problem.n_bugs();
  const std::size_t n_methods = problem.n_methods();

  FitResult result;
  IntegratorParams& params = result.params;
  params = IntegratorParams::zeros(n_bugs, n_methods);

  std::vector<double> sigma = probabilities(problem, params);
  double current = entropy_loss(problem, sigma);
  result.entropy_trace.push_back(current);
  double eta = hp.eta0;

  std::vector<double> neighbor(std::max(n_bugs, n_methods));
  for (int iteration = 1; iteration <= hp.t_max; ++iteration) {
    const double previous = current;
    result.eta_trace.push_back(eta);
    for (std::size_t j = 0; j < kNumFeatures; ++j) {
      // Neighbor sums use the parameters from before this block of updates,
      // so the result does not depend on the visiting order.
      for (std::size_t b = 0; b < n_bugs; ++b) neighbor[b] = neighbor_sum((*problem.bug_graph), params.u, b, j);
      for (std::size_t b = 0; b < n_bugs; ++b) {
        double numer = 0.0;
        double denom = 0.0;
        for (std::size_t m = 0; m < n_methods; ++m) {
          const std::size_t i = problem.cell(b, m);
          if (problem.y[i] == Label::kAbsent) continue;
          const double xj = problem.x[i][j];
          const double y = problem.y[i] == Label::kPositive ? 1.0 : 0.0;
          numer += problem.w[i] * (sigma[i] - y) * xj;
          denom += problem.w[i] * sigma[i] * (1.0 - sigma[i]) * xj * xj;
        }
        const double u = params.u[b][j];
        const double q = (*problem.bug_graph).degree(b);
        numer += hp.beta * (u * q - neighbor[b]) + hp.alpha * u;
        denom += hp.beta * q + hp.alpha;
        params.u[b][j] = u - eta * (numer / denom);
      }

      for (std::size_t m = 0; m < n_methods; ++m) neighbor[m] = neighbor_sum((*problem.method_graph), params.v, m, j);
      for (std::size_t m = 0; m < n_methods; ++m) {
        double numer = 0.0;
        double denom = 0.0;
        for (std::size_t b = 0; b < n_bugs; ++b) {
          const std::size_t i = problem.cell(b, m);
          if (problem.y[i] == Label::kAbsent) continue;
          const double xj = problem.x[i][j];
          const double y = problem.y[i] == Label::kPositive ? 1.0 : 0.0;
          numer += problem.w[i] * (sigma[i] - y) * xj;
          denom += problem.w[i] * sigma[i] * (1.0 - sigma[i]) * xj * xj;
        }
        const double v = params.v[m][j];
        const double q = (*problem.method_graph).degree(m);
        numer += hp.beta * (v * q - neighbor[m]) + hp.alpha * v;
        denom += hp.beta * q + hp.alpha;
        params.v[m][j] = v - eta * (numer / denom);
      }
    }
    sigma = probabilities(problem, params);
    current = entropy_loss(problem, sigma);
    require_finite(params, problem, iteration, current);
    result.entropy_trace.push_back(current);
    eta = current > previous ? eta / 2.0 : std::min(1.0, 2.0 * eta);
  }

  result.query_scores.resize(n_methods);
  const std::size_t q = problem.query_row;
  for (std::size_t m = 0; m < n_methods; ++m)
    result.query_scores[m] = predict_score(problem.x[problem.cell(q, m)], params.u[q], params.v[m]);
  return result;
}

void write_params_csv(std::ostream& out, const NetmlProblem& problem, const IntegratorParams& params) {
  csv::write_row(out, {"node_id", "kind", "p1", "p2", "p3"});
  auto row = [&](const std::string& id, const char* kind, const ParamVector& p) {
    csv::write_row(out, {id, kind, csv::format_double(p[0]), csv::format_double(p[1]), csv::format_double(p[2])});
  };
  for (std::size_t b = 0; b < params.u.size(); ++b) row(problem.bug_ids[b], "bug", params.u[b]);
  for (std::size_t m = 0; m < params.v.size(); ++m) row(problem.method_ids[m], "method", params.v[m]);
}

}  // namespace netml
