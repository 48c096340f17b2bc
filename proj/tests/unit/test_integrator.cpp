#include <catch_amalgamated.hpp>
#include <cmath>
#include <sstream>

#include "netml/error.hpp"
#include "netml/integrator.hpp"
#include "oracles.hpp"

using namespace netml;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("predict_score") {
  CHECK(predict_score({0.3, 0.2, 0.1}, {}, {}) == 0.0);
  CHECK(predict_score({0.5, 0.7, 0.9}, {1, 0, 0}, {0, 0, 0}) == 0.5);
  CHECK_THAT(predict_score({0.2, 0.5, 0.1}, {1, 2, 0}, {-1, 1, 1}), WithinAbs(1.6, 1e-15));
}

TEST_CASE("logistic") {
  CHECK(logistic(0.0) == 0.5);
  CHECK_THAT(logistic(500.0), WithinAbs(1.0, 1e-12));
  CHECK(std::isfinite(logistic(-800.0)));
  CHECK(logistic(-800.0) >= 0.0);
  CHECK_THAT(logistic(1.0), WithinAbs(0.73105858, 1e-8));
}

TEST_CASE("instance weights") {
  std::vector<Label> labels(10, Label::kNegative);
  labels[3] = labels[7] = Label::kPositive;
  const auto w = instance_weights(labels);
  CHECK(w[3] == 0.5);
  CHECK(w[0] == 0.125);

  const std::vector<Label> half{Label::kPositive, Label::kNegative, Label::kPositive, Label::kNegative};
  const auto h = instance_weights(half);
  CHECK(h[0] == h[1]);

  const std::vector<Label> two{Label::kPositive, Label::kNegative, Label::kAbsent};
  const auto t = instance_weights(two);
  CHECK(t == std::vector<double>{1.0, 1.0, 0.0});

  try {
    instance_weights(std::vector<Label>{Label::kNegative, Label::kAbsent});
    FAIL();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateLabels);
  }
}

namespace {

NetmlProblem fixture() {
  NetmlProblem p;
  p.bug_ids = {"b1", "b2"};
  p.method_ids = {"m1", "m2"};
  p.x = {{0.9, 0.1, 0.4}, {0.2, 0.8, 0.0}, {0.5, 0.5, 0.5}, {0.3, 0.0, 0.7}};
  p.y = {Label::kPositive, Label::kNegative, Label::kAbsent, Label::kAbsent};
  p.w = instance_weights(p.y);
  auto bg = std::make_shared<SimilarityGraph>(p.bug_ids);
  bg->set_edge(0, 1, 0.6);
  auto mg = std::make_shared<SimilarityGraph>(p.method_ids);
  mg->set_edge(0, 1, 0.3);
  p.bug_graph = bg;
  p.method_graph = mg;
  p.query_row = 1;
  return p;
}

}  // namespace

TEST_CASE("loss at zero parameters") {
  const auto p = fixture();
  const auto zero = IntegratorParams::zeros(2, 2);
  const auto l = loss_full(p, zero, 0.1, 0.1);
  CHECK_THAT(l.entropy, WithinAbs(2.0 * std::log(2.0), 1e-15));
  CHECK(l.ridge == 0.0);
  CHECK(l.lasso == 0.0);
}

TEST_CASE("loss matches a straight-line summation") {
  const auto p = fixture();
  IntegratorParams q{{{0.5, -1.0, 2.0}, {0.1, 0.2, -0.3}}, {{1.0, 0.0, -0.5}, {-0.2, 0.7, 0.4}}};
  for (double alpha : {0.1, 2.0})
    for (double beta : {0.0, 0.3, 5.0})
      CHECK_THAT(loss_full(p, q, alpha, beta).total(), WithinAbs(oracle::loss(p, q, alpha, beta), 1e-12));

  IntegratorParams equal{{{0.5, -1.0, 2.0}, {0.5, -1.0, 2.0}}, {{1.0, 0.0, -0.5}, {1.0, 0.0, -0.5}}};
  CHECK(loss_full(p, equal, 0.1, 3.0).lasso == 0.0);
}

TEST_CASE("derivatives at the origin with no features") {
  auto p = fixture();
  for (auto& x : p.x) x = {0, 0, 0};
  const auto zero = IntegratorParams::zeros(2, 2);
  const auto sigma = probabilities(p, zero);
  const auto d = grad_hess_u(p, zero, sigma, 0, 1, 0.1, 0.5);
  CHECK(d.gradient == 0.0);
  CHECK_THAT(d.curvature, WithinAbs(0.1 + 0.5 * 0.6, 1e-15));
  const auto e = grad_hess_v(p, zero, sigma, 1, 2, 0.1, 0.5);
  CHECK_THAT(e.curvature, WithinAbs(0.1 + 0.5 * 0.3, 1e-15));
}

TEST_CASE("derivatives match finite differences") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = oracle::random_problem(rng);
    const auto q = oracle::random_params(rng, p.n_bugs(), p.n_methods());
    const double alpha = 0.05 + rng.uniform();
    const double beta = rng.uniform() * 2.0;
    const auto sigma = probabilities(p, q);
    const double h = 1e-5;
    for (std::size_t b = 0; b < p.n_bugs(); ++b)
      for (std::size_t j = 0; j < 3; ++j) {
        auto plus = q, minus = q;
        plus.u[b][j] += h;
        minus.u[b][j] -= h;
        const double fp = loss_full(p, plus, alpha, beta).total();
        const double fm = loss_full(p, minus, alpha, beta).total();
        const double f0 = loss_full(p, q, alpha, beta).total();
        const auto d = grad_hess_u(p, q, sigma, b, j, alpha, beta);
        CHECK_THAT(d.gradient, WithinAbs((fp - fm) / (2 * h), 1e-6));
        CHECK_THAT(d.curvature, WithinRel((fp - 2 * f0 + fm) / (h * h), 1e-3));
        CHECK(d.curvature > 0.0);
      }
  }
}

TEST_CASE("fit with zero sweeps scores everything zero") {
  auto p = fixture();
  HyperParams hp;
  hp.t_max = 0;
  const auto r = fit(p, hp);
  CHECK(r.query_scores == std::vector<double>{0.0, 0.0});
  CHECK(r.entropy_trace.size() == 1);
}

TEST_CASE("fit lowers the entropy and follows the step-size rule") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = oracle::random_problem(rng);
    HyperParams hp;
    hp.alpha = 0.01 + rng.uniform();
    hp.beta = rng.uniform();
    const auto r = fit(p, hp);
    REQUIRE(r.entropy_trace.size() == static_cast<std::size_t>(hp.t_max) + 1);
    CHECK(r.entropy_trace.back() <= r.entropy_trace.front());
    CHECK(r.eta_trace.front() == 1.0);
    for (std::size_t t = 1; t < r.eta_trace.size(); ++t) {
      const bool rose = r.entropy_trace[t] > r.entropy_trace[t - 1];
      CHECK(r.eta_trace[t] == (rose ? r.eta_trace[t - 1] / 2 : std::min(1.0, 2 * r.eta_trace[t - 1])));
    }
  }
}

TEST_CASE("query scores do not depend on input order") {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = oracle::random_problem(rng);
    HyperParams hp;
    const auto r = fit(p, hp);

    // Reverse both bugs and methods.
    NetmlProblem s = p;
    const std::size_t nb = p.n_bugs(), nm = p.n_methods();
    std::reverse(s.bug_ids.begin(), s.bug_ids.end());
    std::reverse(s.method_ids.begin(), s.method_ids.end());
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t m = 0; m < nm; ++m) {
        const std::size_t from = p.cell(nb - 1 - b, nm - 1 - m);
        s.x[s.cell(b, m)] = p.x[from];
        s.y[s.cell(b, m)] = p.y[from];
        s.w[s.cell(b, m)] = p.w[from];
      }
    s.bug_graph = std::make_shared<SimilarityGraph>(p.bug_graph->induced(s.bug_ids));
    s.method_graph = std::make_shared<SimilarityGraph>(p.method_graph->induced(s.method_ids));
    s.query_row = nb - 1 - p.query_row;
    const auto rs = fit(s, hp);
    for (std::size_t m = 0; m < nm; ++m) CHECK_THAT(rs.query_scores[nm - 1 - m], WithinAbs(r.query_scores[m], 1e-9));
  }
}

TEST_CASE("non-finite features abort the fit") {
  auto p = fixture();
  p.x[0][0] = std::nan("");
  try {
    fit(p, HyperParams{});
    FAIL();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonFiniteState);
  }
}

TEST_CASE("hyperparameter validation") {
  HyperParams hp;
  hp.alpha = 0.0;
  CHECK_THROWS_AS(hp.validate(), Error);
  hp = {};
  hp.beta = -1.0;
  CHECK_THROWS_AS(hp.validate(), Error);
  hp = {};
  hp.eta0 = 1.5;
  CHECK_THROWS_AS(hp.validate(), Error);
  hp = {};
  hp.k = 0;
  CHECK_THROWS_AS(hp.validate(), Error);
}

TEST_CASE("parameter csv") {
  auto p = fixture();
  IntegratorParams q{{{1, 2, 3}, {0, 0, 0}}, {{0.5, 0, 0}, {0, 0, -1}}};
  std::ostringstream out;
  write_params_csv(out, p, q);
  CHECK(out.str() == "node_id,kind,p1,p2,p3\nb1,bug,1,2,3\nb2,bug,0,0,0\nm1,method,0.5,0,0\nm2,method,0,0,-1\n");
}
