#include <algorithm>
#include <cmath>
#include <numeric>

#include "netml/error.hpp"
#include "netml/evaluation.hpp"

namespace netml {

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

WilcoxonResult wilcoxon_signed_rank(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::kMalformedInput, "Wilcoxon samples differ in length");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - ys[i];
    if (std::isnan(d)) throw Error(ErrorCode::kNonFiniteState, "NaN in Wilcoxon sample");
    if (d != 0.0) diffs.push_back(d);
  }

  WilcoxonResult result;
  result.n = diffs.size();
  if (diffs.empty() && !xs.empty()) {
    result.all_zero = true;
    result.exact = true;
    return result;
  }
  if (diffs.size() < kWilcoxonMinPairs)
    throw Error(ErrorCode::kTooFewPairs, "Wilcoxon needs at least " + std::to_string(kWilcoxonMinPairs) +
                                             " nonzero pairs, got " + std::to_string(diffs.size()));

  const std::size_t n = diffs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(diffs[a]) < std::fabs(diffs[b]);
  });

  // Doubled mid-ranks stay integral, which keeps the exact distribution on integers.
  std::vector<std::size_t> rank2(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]])) ++j;
    const std::size_t twice_mid = (i + 1) + (j + 1);
    for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = twice_mid;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }

  std::size_t w2 = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (diffs[i] > 0.0) w2 += rank2[i];
  result.statistic = static_cast<double>(w2) / 2.0;

  if (n <= kWilcoxonExactLimit) {
    result.exact = true;
    const std::size_t total = n * (n + 1);
    std::vector<double> ways(total + 1, 0.0);
    ways[0] = 1.0;
    std::size_t reach = 0;
    for (std::size_t i = 0; i < n; ++i) {
      reach += rank2[i];
      for (std::size_t s = reach; s >= rank2[i]; --s) {
        ways[s] += ways[s - rank2[i]];
        if (s == rank2[i]) break;
      }
    }
    double upper = 0.0;
    for (std::size_t s = w2; s <= total; ++s) upper += ways[s];
    result.p_value = std::min(1.0, upper / std::ldexp(1.0, static_cast<int>(n)));
    return result;
  }

  const double nd = static_cast<double>(n);
  const double mean = nd * (nd + 1.0) / 4.0;
  const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
  const double z = (result.statistic - mean - 0.5) / std::sqrt(var);
  result.p_value = normal_upper_tail(z);
  return result;
}

std::vector<double> benjamini_hochberg(std::span<const double> p_values) {
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  std::vector<double> adjusted(m);
  double running = 1.0;
  for (std::size_t r = m; r-- > 0;) {
    const double value = p_values[order[r]] * static_cast<double>(m) / static_cast<double>(r + 1);
    running = std::min(running, value);
    adjusted[order[r]] = running;
  }
  return adjusted;
}

}  // namespace netml
