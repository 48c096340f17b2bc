#include "netml/aml.hpp"

#include <cmath>
#include <vector>

#include "netml/error.hpp"
#include "netml/integrator.hpp"
#include "netml/rng.hpp"

namespace netml {

void AmlConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::kConfig, "AML lambda must be >= 0");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw Error(ErrorCode::kConfig, "AML eta must be > 0");
  if (t_max < 0) throw Error(ErrorCode::kConfig, "AML T_max must be >= 0");
}

double aml_score(const FeatureVector& x, const FeatureVector& theta) {
  double f = 0.0;
  for (std::size_t j = 0; j < kNumFeatures; ++j) f += theta[j] * x[j];
  return f;
}

double aml_instance_loss(const FeatureVector& x, Label y, const FeatureVector& theta) {
  const double f = aml_score(x, theta);
  // log(1 + e^{-f}) for y = 1, log(1 + e^{f}) for y = 0, computed stably.
  const double z = y == Label::kPositive ? -f : f;
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

FeatureVector aml_instance_gradient(const FeatureVector& x, Label y, const FeatureVector& theta) {
  const double r = logistic(aml_score(x, theta)) - (y == Label::kPositive ? 1.0 : 0.0);
  FeatureVector g{};
  for (std::size_t j = 0; j < kNumFeatures; ++j) g[j] = r * x[j];
  return g;
}

AmlParams aml_fit(std::span<const FeatureVector> x, std::span<const Label> y, const AmlConfig& config,
                  std::uint64_t seed) {
  config.validate();
  if (x.size() != y.size()) throw Error(ErrorCode::kMalformedInput, "AML features and labels differ in length");
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == Label::kPositive) positives.push_back(i);
    if (y[i] == Label::kNegative) negatives.push_back(i);
  }
  if (positives.empty() || negatives.empty())
    throw Error(ErrorCode::kDegenerateLabels, "AML needs both faulty and non-faulty instances");

  const std::size_t n = positives.size() + negatives.size();
  Rng rng(seed);
  AmlParams params;
  for (int epoch = 0; epoch < config.t_max; ++epoch) {
    for (std::size_t draw = 1; draw <= n; ++draw) {
      const bool odd = draw % 2 == 1;
      const auto& pool = odd ? negatives : positives;
      const std::size_t i = pool[rng.below(pool.size())];
      (odd ? params.negative_draws : params.positive_draws) += 1;
      const FeatureVector g = aml_instance_gradient(x[i], y[i], params.theta);
      for (std::size_t j = 0; j < kNumFeatures; ++j)
        params.theta[j] -= config.eta * (g[j] + config.lambda * params.theta[j]);
    }
    for (double t : params.theta)
      if (!std::isfinite(t))
        throw Error(ErrorCode::kNonFiniteState, "AML weights stopped being finite in epoch " + std::to_string(epoch + 1));
  }
  return params;
}

}  // namespace netml
