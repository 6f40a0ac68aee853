#include "model_build.hpp"

#include <algorithm>
#include <cmath>

namespace kadapt::detail {

TupleMip build_tuple_mip(const BudgetedInstance& inst, const std::vector<double>& obj_weights,
                         const std::vector<double>& coupling_weights, std::size_t beta_copy,
                         double beta_coef, std::size_t beta_excluded_copy) {
  const std::size_t k = obj_weights.size();
  if (coupling_weights.size() != k)
    throw std::invalid_argument("tuple mip: weight vectors must agree on k");
  const LinearDescription& desc = inst.ground->description();

  TupleMip out;
  out.k = k;
  out.copy_cols = desc.columns;
  for (std::size_t i = 0; i < inst.n; ++i)
    if (inst.d[i] > 0.0) out.dev_items.push_back(i);
  const std::size_t nd = out.dev_items.size();

  out.gamma_offset = k * desc.columns;
  out.theta_col = out.gamma_offset + nd;
  std::size_t total = out.theta_col + 1;
  if (beta_copy != SIZE_MAX) {
    out.beta_copy = beta_copy;
    out.beta_excluded_copy = beta_excluded_copy;
    out.beta_offset = total;
    total += nd;
  }

  LinearProgram lp(total, 0.0, kInf);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t off = j * desc.columns;
    for (std::size_t c = 0; c < desc.columns; ++c) lp.set_bounds(off + c, 0.0, 1.0);
    for (std::size_t i = 0; i < inst.n; ++i)
      lp.objective[off + i] = obj_weights[j] * inst.c_hat[i];
  }
  for (std::size_t s = 0; s < nd; ++s) lp.objective[out.gamma_offset + s] = 1.0;
  lp.objective[out.theta_col] = inst.gamma;
  if (beta_copy != SIZE_MAX) {
    for (std::size_t s = 0; s < nd; ++s) {
      lp.set_bounds(out.beta_offset + s, 0.0, 1.0);
      lp.objective[out.beta_offset + s] = beta_coef * inst.d[out.dev_items[s]];
    }
  }

  // Ground description per copy.
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t off = j * desc.columns;
    for (const LinearRow& row : desc.rows) {
      std::vector<double> coeffs(total, 0.0);
      for (std::size_t c = 0; c < desc.columns; ++c) coeffs[off + c] = row.coeffs[c];
      lp.add_row(std::move(coeffs), row.sense, row.rhs);
    }
  }
  // Coupling rows: Σ_j w_j d_i x^(j)_i − θ − γ_i ≤ 0.
  for (std::size_t s = 0; s < nd; ++s) {
    const std::size_t i = out.dev_items[s];
    std::vector<double> coeffs(total, 0.0);
    for (std::size_t j = 0; j < k; ++j)
      coeffs[j * desc.columns + i] = coupling_weights[j] * inst.d[i];
    coeffs[out.gamma_offset + s] = -1.0;
    coeffs[out.theta_col] = -1.0;
    lp.add_row(std::move(coeffs), RowSense::LessEqual, 0.0);
  }
  // β block: β_i ≤ x^(copy)_i, Σβ ≤ Γ, and optionally β_i ≤ 1 − x^(excl)_i.
  if (beta_copy != SIZE_MAX) {
    for (std::size_t s = 0; s < nd; ++s) {
      const std::size_t i = out.dev_items[s];
      std::vector<double> coeffs(total, 0.0);
      coeffs[out.beta_offset + s] = 1.0;
      coeffs[beta_copy * desc.columns + i] = -1.0;
      lp.add_row(std::move(coeffs), RowSense::LessEqual, 0.0);
    }
    if (beta_excluded_copy != SIZE_MAX) {
      for (std::size_t s = 0; s < nd; ++s) {
        const std::size_t i = out.dev_items[s];
        std::vector<double> coeffs(total, 0.0);
        coeffs[out.beta_offset + s] = 1.0;
        coeffs[beta_excluded_copy * desc.columns + i] = 1.0;
        lp.add_row(std::move(coeffs), RowSense::LessEqual, 1.0);
      }
    }
    std::vector<double> budget(total, 0.0);
    for (std::size_t s = 0; s < nd; ++s) budget[out.beta_offset + s] = 1.0;
    lp.add_row(std::move(budget), RowSense::LessEqual, inst.gamma);
  }

  MixedBinaryProgram p;
  p.lp = std::move(lp);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t c = 0; c < desc.columns; ++c) p.binary.push_back(j * desc.columns + c);
  out.program = std::move(p);
  return out;
}

ThetaGamma optimal_theta_gamma(const BudgetedInstance& inst, const std::vector<Bits>& members,
                               const std::vector<double>& coupling_weights) {
  std::vector<double> w(inst.n, 0.0);
  for (std::size_t j = 0; j < members.size(); ++j) {
    if (coupling_weights[j] == 0.0) continue;
    for (std::size_t i = 0; i < inst.n; ++i)
      if (members[j][i]) w[i] += coupling_weights[j] * inst.d[i];
  }
  std::vector<double> sorted = w;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> prefix(sorted.size() + 1, 0.0);
  for (std::size_t i = 0; i < sorted.size(); ++i) prefix[i + 1] = prefix[i] + sorted[i];
  auto value_at = [&](double theta) {
    // Γθ + Σ max(0, w_i − θ) using the sorted prefix.
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), theta, std::greater<>());
    const std::size_t cnt = static_cast<std::size_t>(it - sorted.begin());
    return inst.gamma * theta + prefix[cnt] - theta * static_cast<double>(cnt);
  };
  double best_theta = 0.0;
  double best = value_at(0.0);
  for (double cand : sorted) {
    const double v = value_at(cand);
    if (v < best - kAbsTol) {
      best = v;
      best_theta = cand;
    }
  }
  ThetaGamma out;
  out.theta = best_theta;
  out.norm_value = best;
  out.gamma.resize(inst.n);
  for (std::size_t i = 0; i < inst.n; ++i) out.gamma[i] = std::max(0.0, w[i] - best_theta);
  return out;
}

std::vector<double> tuple_warm_start(const TupleMip& mip, const BudgetedInstance& inst,
                                     const std::vector<Bits>& members,
                                     const std::vector<double>& coupling_weights) {
  std::vector<double> x(mip.program.lp.num_vars(), 0.0);
  for (std::size_t j = 0; j < mip.k; ++j) {
    const std::vector<double> cols = inst.ground->lift_items(members[j]);
    std::copy(cols.begin(), cols.end(), x.begin() + static_cast<long>(j * mip.copy_cols));
  }
  const ThetaGamma tg = optimal_theta_gamma(inst, members, coupling_weights);
  x[mip.theta_col] = tg.theta;
  for (std::size_t s = 0; s < mip.dev_items.size(); ++s)
    x[mip.gamma_offset + s] = tg.gamma[mip.dev_items[s]];
  if (mip.beta_offset != SIZE_MAX) {
    // Fractional knapsack: the Γ largest eligible deviations of the β copy.
    std::vector<std::size_t> order;
    for (std::size_t s = 0; s < mip.dev_items.size(); ++s) {
      const std::size_t i = mip.dev_items[s];
      if (!members[mip.beta_copy][i]) continue;
      if (mip.beta_excluded_copy != SIZE_MAX && members[mip.beta_excluded_copy][i]) continue;
      order.push_back(s);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return inst.d[mip.dev_items[a]] > inst.d[mip.dev_items[b]];
    });
    double left = inst.gamma;
    for (std::size_t s : order) {
      if (left <= 0.0) break;
      const double take = std::min(1.0, left);
      x[mip.beta_offset + s] = take;
      left -= take;
    }
  }
  return x;
}

KTuple extract_tuple(const TupleMip& mip, const BudgetedInstance& inst,
                     const std::vector<double>& x) {
  KTuple t;
  t.members.reserve(mip.k);
  for (std::size_t j = 0; j < mip.k; ++j) {
    std::vector<double> cols(x.begin() + static_cast<long>(j * mip.copy_cols),
                             x.begin() + static_cast<long>((j + 1) * mip.copy_cols));
    t.members.push_back(make_solution(inst, inst.ground->extract_items(cols)));
  }
  return t;
}

}  // namespace kadapt::detail
