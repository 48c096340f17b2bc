#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace netml::oracle {

namespace {

double y_value(Label y) { return y == Label::kPositive ? 1.0 : 0.0; }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double score(const NetmlProblem& p, const IntegratorParams& q, std::size_t b, std::size_t m) {
  const FeatureVector& x = p.x[b * p.method_ids.size() + m];
  return (q.u[b][0] + q.v[m][0]) * x[0] + (q.u[b][1] + q.v[m][1]) * x[1] + (q.u[b][2] + q.v[m][2]) * x[2];
}

}  // namespace

double loss(const NetmlProblem& p, const IntegratorParams& q, double alpha, double beta) {
  const std::size_t nb = p.bug_ids.size();
  const std::size_t nm = p.method_ids.size();
  double entropy = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t m = 0; m < nm; ++m) {
      const std::size_t i = b * nm + m;
      if (p.y[i] == Label::kAbsent) continue;
      double s = sigmoid(score(p, q, b, m));
      s = std::min(std::max(s, 1e-12), 1.0 - 1e-12);
      entropy += -p.w[i] * (y_value(p.y[i]) * std::log(s) + (1.0 - y_value(p.y[i])) * std::log(1.0 - s));
    }
  }
  double ridge = 0.0;
  for (const auto& u : q.u)
    for (double v : u) ridge += v * v;
  for (const auto& v : q.v)
    for (double x : v) ridge += x * x;
  double lasso = 0.0;
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t c = a + 1; c < nb; ++c)
      for (std::size_t j = 0; j < 3; ++j)
        lasso += p.bug_graph->weight(a, c) * std::pow(q.u[a][j] - q.u[c][j], 2);
  for (std::size_t a = 0; a < nm; ++a)
    for (std::size_t c = a + 1; c < nm; ++c)
      for (std::size_t j = 0; j < 3; ++j)
        lasso += p.method_graph->weight(a, c) * std::pow(q.v[a][j] - q.v[c][j], 2);
  return entropy + alpha / 2.0 * ridge + beta / 2.0 * lasso;
}

std::vector<double> flatten(const IntegratorParams& q) {
  std::vector<double> out;
  for (const auto& u : q.u) out.insert(out.end(), u.begin(), u.end());
  for (const auto& v : q.v) out.insert(out.end(), v.begin(), v.end());
  return out;
}

IntegratorParams unflatten(const std::vector<double>& flat, std::size_t nb, std::size_t nm) {
  IntegratorParams q;
  q.u.resize(nb);
  q.v.resize(nm);
  std::size_t k = 0;
  for (auto& u : q.u)
    for (double& v : u) v = flat[k++];
  for (auto& v : q.v)
    for (double& x : v) x = flat[k++];
  return q;
}

std::vector<double> gradient(const NetmlProblem& p, const IntegratorParams& q, double alpha, double beta) {
  const std::size_t nb = p.bug_ids.size();
  const std::size_t nm = p.method_ids.size();
  IntegratorParams g;
  g.u.assign(nb, ParamVector{});
  g.v.assign(nm, ParamVector{});
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t m = 0; m < nm; ++m) {
      const std::size_t i = b * nm + m;
      if (p.y[i] == Label::kAbsent) continue;
      const double s = sigmoid(score(p, q, b, m));
      // Inside the clamp region the entropy is flat.
      if (s < 1e-12 || s > 1.0 - 1e-12) continue;
      const double r = p.w[i] * (s - y_value(p.y[i]));
      for (std::size_t j = 0; j < 3; ++j) {
        g.u[b][j] += r * p.x[i][j];
        g.v[m][j] += r * p.x[i][j];
      }
    }
  }
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t j = 0; j < 3; ++j) {
      g.u[b][j] += alpha * q.u[b][j];
      for (std::size_t c = 0; c < nb; ++c) g.u[b][j] += beta * p.bug_graph->weight(b, c) * (q.u[b][j] - q.u[c][j]);
    }
  for (std::size_t m = 0; m < nm; ++m)
    for (std::size_t j = 0; j < 3; ++j) {
      g.v[m][j] += alpha * q.v[m][j];
      for (std::size_t c = 0; c < nm; ++c) g.v[m][j] += beta * p.method_graph->weight(m, c) * (q.v[m][j] - q.v[c][j]);
    }
  return flatten(g);
}

double minimize(const NetmlProblem& p, double alpha, double beta, int max_iterations, double tolerance) {
  const std::size_t nb = p.bug_ids.size();
  const std::size_t nm = p.method_ids.size();
  std::vector<double> x(3 * (nb + nm), 0.0);
  double f = loss(p, unflatten(x, nb, nm), alpha, beta);
  double step = 1.0;
  for (int it = 0; it < max_iterations; ++it) {
    const auto g = gradient(p, unflatten(x, nb, nm), alpha, beta);
    double gg = 0.0;
    for (double v : g) gg += v * v;
    if (std::sqrt(gg) < tolerance) break;
    step = std::min(1.0, step * 2.0);
    while (true) {
      std::vector<double> trial(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] - step * g[k];
      const double ft = loss(p, unflatten(trial, nb, nm), alpha, beta);
      if (ft <= f - 0.5 * step * gg) {
        x = std::move(trial);
        f = ft;
        break;
      }
      step *= 0.5;
      if (step < 1e-20) return f;
    }
  }
  return f;
}

NetmlProblem random_problem(Rng& rng, const RandomProblemOptions& o) {
  const std::size_t nb = 2 + rng.below(o.max_bugs - 1);
  const std::size_t nm = 2 + rng.below(o.max_methods - 1);
  NetmlProblem p;
  for (std::size_t b = 0; b < nb; ++b) p.bug_ids.push_back("b" + std::to_string(b));
  for (std::size_t m = 0; m < nm; ++m) p.method_ids.push_back("m" + std::to_string(m));
  p.x.resize(nb * nm);
  p.y.assign(nb * nm, Label::kAbsent);
  for (auto& x : p.x)
    for (double& v : x) v = rng.uniform();
  for (std::size_t b = 1; b < nb; ++b) {
    const std::size_t pos = rng.below(nm);
    for (std::size_t m = 0; m < nm; ++m)
      p.y[b * nm + m] = (m == pos || rng.uniform() < 0.15) ? Label::kPositive : Label::kNegative;
    const std::size_t neg = (pos + 1) % nm;
    p.y[b * nm + neg] = Label::kNegative;
  }
  p.w = instance_weights(p.y);
  auto bugs = std::make_shared<SimilarityGraph>(p.bug_ids);
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t c = a + 1; c < nb; ++c)
      if ((o.connected_bugs && c == a + 1) || rng.uniform() < o.edge_probability)
        bugs->set_edge(a, c, 0.05 + 0.95 * rng.uniform());
  auto methods = std::make_shared<SimilarityGraph>(p.method_ids);
  for (std::size_t a = 0; a < nm; ++a)
    for (std::size_t c = a + 1; c < nm; ++c)
      if (rng.uniform() < o.edge_probability) methods->set_edge(a, c, rng.uniform());
  p.bug_graph = bugs;
  p.method_graph = methods;
  p.query_row = 0;
  return p;
}

IntegratorParams random_params(Rng& rng, std::size_t nb, std::size_t nm, double scale) {
  IntegratorParams q;
  q.u.resize(nb);
  q.v.resize(nm);
  for (auto& u : q.u)
    for (double& v : u) v = scale * (2.0 * rng.uniform() - 1.0);
  for (auto& v : q.v)
    for (double& x : v) x = scale * (2.0 * rng.uniform() - 1.0);
  return q;
}

double average_precision(const std::vector<std::string>& ranking, const std::set<std::string>& faulty) {
  double sum = 0.0;
  for (std::size_t k = 1; k <= ranking.size(); ++k) {
    if (!faulty.contains(ranking[k - 1])) continue;
    std::size_t in_top_k = 0;
    for (std::size_t i = 0; i < k; ++i) in_top_k += faulty.contains(ranking[i]) ? 1 : 0;
    sum += static_cast<double>(in_top_k) / static_cast<double>(k);
  }
  return sum / static_cast<double>(faulty.size());
}

std::vector<std::string> spectra_ranking(const ProgramSpectra& spectra, std::vector<std::string> methods, bool ochiai) {
  std::map<std::string, double> score;
  for (const auto& m : methods) {
    double ef = 0, ep = 0, tf = 0, tp = 0;
    for (const auto& t : spectra.traces()) {
      const bool hit = std::find(t.executed.begin(), t.executed.end(), m) != t.executed.end();
      if (t.outcome == Outcome::kFail) {
        tf += 1;
        ef += hit;
      } else {
        tp += 1;
        ep += hit;
      }
    }
    double s;
    if (ochiai) {
      s = ef == 0 ? 0.0 : ef / std::sqrt(tf * (ef + ep));
    } else {
      const double fr = ef / tf;
      const double pr = tp == 0 ? 0.0 : ep / tp;
      s = fr + pr == 0 ? 0.0 : fr / (fr + pr);
    }
    score[m] = s;
  }
  std::sort(methods.begin(), methods.end());
  std::stable_sort(methods.begin(), methods.end(),
                   [&](const std::string& a, const std::string& b) { return score[a] > score[b]; });
  return methods;
}

double wilcoxon_enumerate(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> d;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] != ys[i]) d.push_back(xs[i] - ys[i]);
  const std::size_t n = d.size();
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::fabs(d[k]) < std::fabs(d[i])) less += 1;
      if (std::fabs(d[k]) == std::fabs(d[i])) equal += 1;
    }
    rank[i] = less + (equal + 1.0) / 2.0;
  }
  double observed = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0) observed += rank[i];
  std::uint64_t at_least = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) w += rank[i];
    if (w >= observed - 1e-9) ++at_least;
  }
  return static_cast<double>(at_least) / static_cast<double>(std::uint64_t{1} << n);
}

}  // namespace netml::oracle
