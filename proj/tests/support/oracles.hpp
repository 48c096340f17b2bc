#pragma once

// Straight-line reference implementations used to check the library. They
// share no code with the functions under test beyond the data types.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "netml/integrator.hpp"
#include "netml/rng.hpp"
#include "netml/spectra.hpp"

namespace netml::oracle {

/// Full objective summed term by term over every cell and every node pair.
double loss(const NetmlProblem& problem, const IntegratorParams& params, double alpha, double beta);

/// Analytic gradient of `loss`, laid out as [u_0..u_B, v_0..v_M] x 3.
std::vector<double> gradient(const NetmlProblem& problem, const IntegratorParams& params, double alpha, double beta);

std::vector<double> flatten(const IntegratorParams& params);
IntegratorParams unflatten(const std::vector<double>& flat, std::size_t n_bugs, std::size_t n_methods);

/// Gradient descent with Armijo backtracking until the gradient norm drops
/// below `tolerance` or `max_iterations` is reached. Returns the final loss.
double minimize(const NetmlProblem& problem, double alpha, double beta, int max_iterations = 200000,
                double tolerance = 1e-11);

struct RandomProblemOptions {
  std::size_t max_bugs = 5;
  std::size_t max_methods = 8;
  double edge_probability = 0.6;
  bool connected_bugs = false;
};

/// Random labeled instance; row 0 is the unlabeled query. Every labeled row
/// has at least one positive and one negative method.
NetmlProblem random_problem(Rng& rng, const RandomProblemOptions& options = {});
IntegratorParams random_params(Rng& rng, std::size_t n_bugs, std::size_t n_methods, double scale = 1.0);

/// Counts faulty methods in each prefix of `ranking` to compute AP.
double average_precision(const std::vector<std::string>& ranking, const std::set<std::string>& faulty);

/// Raw counts and Tarantula/Ochiai by direct definition, then ids sorted by
/// score (descending) with ascending id among ties.
std::vector<std::string> spectra_ranking(const ProgramSpectra& spectra, std::vector<std::string> methods,
                                         bool ochiai);

/// One-sided exact p-value by enumerating all 2^n sign assignments of the
/// nonzero differences with mid-ranks.
double wilcoxon_enumerate(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace netml::oracle
