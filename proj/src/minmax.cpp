#include "kadapt/minmax.hpp"

#include <algorithm>
#include <cmath>

namespace kadapt {

MinMaxResult solve_minmax(const BudgetedInstance& inst) {
  if (std::abs(inst.gamma - std::round(inst.gamma)) > kAbsTol)
    throw std::invalid_argument("minmax: the threshold decomposition needs integer gamma");

  std::vector<double> thresholds = inst.d;
  thresholds.push_back(0.0);
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  MinMaxResult out;
  out.value = kInf;
  Bits best_bits;
  for (double tau : thresholds) {
    std::vector<double> weights(inst.n);
    for (std::size_t i = 0; i < inst.n; ++i)
      weights[i] = inst.c_hat[i] + std::max(0.0, inst.d[i] - tau);
    auto [inner, bits] = inst.ground->deterministic_min(weights);
    const double total = inst.gamma * tau + inner;
    out.breakdown.push_back({tau, total});
    if (total < out.value) {
      out.value = total;
      best_bits = std::move(bits);
    }
  }
  out.minimizer = make_solution(inst, std::move(best_bits));
  return out;
}

}  // namespace kadapt
