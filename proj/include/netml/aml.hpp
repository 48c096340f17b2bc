#pragma once

#include <cstdint>
#include <span>

#include "netml/features.hpp"

namespace netml {

struct AmlConfig {
  double lambda = 1e-3;
  double eta = 0.1;
  int t_max = 30;

  void validate() const;
};

struct AmlParams {
  FeatureVector theta{};              // weights for [text, spectra, suspword]
  std::size_t positive_draws = 0;
  std::size_t negative_draws = 0;
};

/// theta . x
double aml_score(const FeatureVector& x, const FeatureVector& theta);

/// Regularized logistic regression by balanced-sampling SGD.
///
/// Each epoch makes N draws (N = labeled instances); draw n = 1..N picks a
/// random negative when n is odd and a random positive when n is even, then
/// applies theta_j -= eta * ((sigma(f) - y) x_j + lambda theta_j).
/// Unlabeled cells are ignored. Throws DegenerateLabels if a class is empty.
AmlParams aml_fit(std::span<const FeatureVector> x, std::span<const Label> y,
                  const AmlConfig& config, std::uint64_t seed);

/// Instance-wise loss -[y log s + (1-y) log(1-s)] and its theta gradient
/// (without the ridge term).
double aml_instance_loss(const FeatureVector& x, Label y, const FeatureVector& theta);
FeatureVector aml_instance_gradient(const FeatureVector& x, Label y, const FeatureVector& theta);

}  // namespace netml
