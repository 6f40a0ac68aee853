#include "kadapt/lp.hpp"

#include <algorithm>
#include <cmath>

namespace kadapt {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDegenTol = 1e-11;
constexpr long kPivotCap = 1000000;

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper, FreeZero };

// Dense two-phase bounded-variable simplex. One instance per solve.
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) {}

  LpSolution run() {
    validate();
    LpSolution out;
    for (std::size_t j = 0; j < lp_.num_vars(); ++j) {
      if (lp_.lower[j] > lp_.upper[j] + kFeasTol) {
        out.status = LpStatus::Infeasible;
        return out;
      }
    }
    build();
    if (!phase1()) {
      out.status = infeasible_ ? LpStatus::Infeasible : LpStatus::NumericalFailure;
      out.pivots = pivots_;
      return out;
    }
    const LpStatus st = phase2();
    out.status = st;
    out.pivots = pivots_;
    if (st != LpStatus::Optimal) return out;
    extract(out);
    return out;
  }

 private:
  void validate() const {
    const std::size_t n = lp_.num_vars();
    if (lp_.lower.size() != n || lp_.upper.size() != n)
      throw std::invalid_argument("lp: bound vectors must match variable count");
    auto bad = [](double v) { return std::isnan(v) || std::isinf(v); };
    for (double v : lp_.objective)
      if (bad(v)) throw std::invalid_argument("lp: non-finite objective coefficient");
    for (const LinearRow& r : lp_.rows) {
      if (r.coeffs.size() != n)
        throw std::invalid_argument("lp: row length must match variable count");
      for (double v : r.coeffs)
        if (bad(v)) throw std::invalid_argument("lp: non-finite row coefficient");
      if (bad(r.rhs)) throw std::invalid_argument("lp: non-finite rhs");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isnan(lp_.lower[j]) || std::isnan(lp_.upper[j]))
        throw std::invalid_argument("lp: NaN bound");
    }
  }

  // Equality standard form: structural vars, one slack per inequality row,
  // one artificial per row. Columns are stored sparsely; the tableau is dense.
  void build() {
    n_struct_ = lp_.num_vars();
    m_ = lp_.num_rows();
    n_slack_ = 0;
    for (const LinearRow& r : lp_.rows)
      if (r.sense != RowSense::Equal) ++n_slack_;
    n_real_ = n_struct_ + n_slack_;
    n_total_ = n_real_ + m_;

    lo_.assign(n_total_, 0.0);
    up_.assign(n_total_, kInf);
    for (std::size_t j = 0; j < n_struct_; ++j) {
      lo_[j] = lp_.lower[j];
      up_[j] = lp_.upper[j];
    }
    cols_.assign(n_total_, {});
    b_.assign(m_, 0.0);
    std::size_t slack = n_struct_;
    for (std::size_t i = 0; i < m_; ++i) {
      const LinearRow& r = lp_.rows[i];
      b_[i] = r.rhs;
      for (std::size_t j = 0; j < n_struct_; ++j)
        if (r.coeffs[j] != 0.0) cols_[j].push_back({i, r.coeffs[j]});
      if (r.sense == RowSense::LessEqual) {
        cols_[slack].push_back({i, 1.0});
        ++slack;
      } else if (r.sense == RowSense::GreaterEqual) {
        cols_[slack].push_back({i, -1.0});
        ++slack;
      }
    }

    state_.assign(n_total_, VarState::AtLower);
    value_.assign(n_total_, 0.0);
    for (std::size_t j = 0; j < n_real_; ++j) {
      if (std::isfinite(lo_[j])) {
        state_[j] = VarState::AtLower;
        value_[j] = lo_[j];
      } else if (std::isfinite(up_[j])) {
        state_[j] = VarState::AtUpper;
        value_[j] = up_[j];
      } else {
        state_[j] = VarState::FreeZero;
        value_[j] = 0.0;
      }
    }

    // Residuals decide the artificial signs; artificials start basic.
    std::vector<double> resid = b_;
    for (std::size_t j = 0; j < n_real_; ++j) {
      if (value_[j] == 0.0) continue;
      for (auto [i, a] : cols_[j]) resid[i] -= a * value_[j];
    }
    sigma_.assign(m_, 1.0);
    basis_.assign(m_, 0);
    xb_.assign(m_, 0.0);
    tableau_.assign(m_ * n_total_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      sigma_[i] = (resid[i] >= 0.0) ? 1.0 : -1.0;
      const std::size_t art = n_real_ + i;
      cols_[art].push_back({i, sigma_[i]});
      basis_[i] = art;
      state_[art] = VarState::Basic;
      xb_[i] = std::abs(resid[i]);
    }
    // tableau = B⁻¹A with B = diag(sigma).
    for (std::size_t j = 0; j < n_total_; ++j)
      for (auto [i, a] : cols_[j]) t(i, j) = sigma_[i] * a;
  }

  double& t(std::size_t i, std::size_t j) { return tableau_[i * n_total_ + j]; }
  double t(std::size_t i, std::size_t j) const { return tableau_[i * n_total_ + j]; }

  void set_cost_phase1() {
    cost_.assign(n_total_, 0.0);
    for (std::size_t j = n_real_; j < n_total_; ++j) cost_[j] = 1.0;
    rebuild_zrow();
  }
  void set_cost_phase2() {
    cost_.assign(n_total_, 0.0);
    for (std::size_t j = 0; j < n_struct_; ++j) cost_[j] = lp_.objective[j];
    rebuild_zrow();
  }
  void rebuild_zrow() {
    zrow_ = cost_;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &tableau_[i * n_total_];
      for (std::size_t j = 0; j < n_total_; ++j) zrow_[j] -= cb * row[j];
    }
  }

  bool eligible_dir(std::size_t j, double d, int& dir) const {
    if (state_[j] == VarState::Basic) return false;
    if (j >= n_real_) return false;  // artificials never re-enter
    if (up_[j] - lo_[j] <= kDegenTol) return false;
    switch (state_[j]) {
      case VarState::AtLower:
        if (d < -kOptTol) { dir = +1; return true; }
        return false;
      case VarState::AtUpper:
        if (d > kOptTol) { dir = -1; return true; }
        return false;
      case VarState::FreeZero:
        if (d < -kOptTol) { dir = +1; return true; }
        if (d > kOptTol) { dir = -1; return true; }
        return false;
      default:
        return false;
    }
  }

  // Returns Optimal/Unbounded/NumericalFailure for the current cost vector.
  LpStatus primal_loop() {
    long degen_run = 0;
    const long bland_after = 5 * static_cast<long>(m_ + n_total_);
    while (true) {
      if (pivots_ >= kPivotCap) return LpStatus::NumericalFailure;
      const bool bland = degen_run > bland_after;
      std::size_t enter = n_total_;
      int dir = 0;
      double best = 0.0;
      for (std::size_t j = 0; j < n_real_; ++j) {
        int dj;
        if (!eligible_dir(j, zrow_[j], dj)) continue;
        if (bland) {
          enter = j;
          dir = dj;
          break;
        }
        const double score = std::abs(zrow_[j]);
        if (score > best) {
          best = score;
          enter = j;
          dir = dj;
        }
      }
      if (enter == n_total_) return LpStatus::Optimal;

      // Ratio test: entering moves by dir*t, basic i changes at rate
      // delta_i = -dir * w_i.
      double tbest = kInf;
      if (std::isfinite(lo_[enter]) && std::isfinite(up_[enter]))
        tbest = up_[enter] - lo_[enter];
      std::size_t leave = m_;
      bool leave_to_upper = false;
      double leave_piv = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double w = t(i, enter);
        if (std::abs(w) <= kPivotTol) continue;
        const double delta = -dir * w;
        const std::size_t bv = basis_[i];
        double ti;
        bool to_upper;
        if (delta < 0.0) {
          if (!std::isfinite(lo_[bv])) continue;
          ti = (xb_[i] - lo_[bv]) / (-delta);
          to_upper = false;
        } else {
          if (!std::isfinite(up_[bv])) continue;
          ti = (up_[bv] - xb_[i]) / delta;
          to_upper = true;
        }
        if (ti < 0.0) ti = 0.0;
        bool take = false;
        if (ti < tbest - kDegenTol) {
          take = true;
        } else if (ti <= tbest + kDegenTol) {
          if (leave == m_)
            take = ti <= tbest;  // prefer a pivot over a bound flip on ties
          else if (bland)
            take = bv < basis_[leave];
          else
            take = std::abs(w) > std::abs(leave_piv);
        }
        if (take) {
          tbest = std::min(tbest, ti);
          leave = i;
          leave_to_upper = to_upper;
          leave_piv = w;
        }
      }
      if (!std::isfinite(tbest)) return LpStatus::Unbounded;
      if (tbest <= kDegenTol) ++degen_run; else degen_run = 0;
      ++pivots_;

      if (leave == m_) {  // bound flip
        for (std::size_t i = 0; i < m_; ++i) {
          const double w = t(i, enter);
          if (w != 0.0) xb_[i] += -dir * w * tbest;
        }
        value_[enter] += dir * tbest;
        state_[enter] = (dir > 0) ? VarState::AtUpper : VarState::AtLower;
        continue;
      }
      pivot(leave, enter, dir, tbest, leave_to_upper);
    }
  }

  void pivot(std::size_t r, std::size_t enter, int dir, double tbest, bool leave_to_upper) {
    const double enter_val = value_[enter] + dir * tbest;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double w = t(i, enter);
      if (w != 0.0) xb_[i] += -dir * w * tbest;
    }
    const std::size_t leaving = basis_[r];
    if (leave_to_upper) {
      state_[leaving] = VarState::AtUpper;
      value_[leaving] = up_[leaving];
    } else {
      state_[leaving] = VarState::AtLower;
      value_[leaving] = lo_[leaving];
    }

    double* prow = &tableau_[r * n_total_];
    const double inv = 1.0 / prow[enter];
    for (std::size_t j = 0; j < n_total_; ++j) prow[j] *= inv;
    prow[enter] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &tableau_[i * n_total_];
      const double f = row[enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n_total_; ++j) row[j] -= f * prow[j];
      row[enter] = 0.0;
    }
    {
      const double f = zrow_[enter];
      if (f != 0.0) {
        for (std::size_t j = 0; j < n_total_; ++j) zrow_[j] -= f * prow[j];
        zrow_[enter] = 0.0;
      }
    }
    basis_[r] = enter;
    state_[enter] = VarState::Basic;
    xb_[r] = enter_val;
  }

  bool phase1() {
    set_cost_phase1();
    const LpStatus st = primal_loop();
    // The phase-1 objective is bounded below by zero, so Unbounded can only
    // arise numerically.
    if (st != LpStatus::Optimal) return false;
    double art_sum = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n_real_) art_sum += std::abs(xb_[i]);
    double scale = 1.0;
    for (double bi : b_) scale = std::max(scale, std::abs(bi));
    if (art_sum > 10.0 * kFeasTol * scale) {
      infeasible_ = true;
      return false;
    }
    // Drive basic artificials out. A row whose tableau entries vanish on all
    // real columns is linearly dependent (and consistent, since phase 1
    // reached zero): its artificial becomes a free logical that absorbs the
    // redundant constraint.
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_real_) continue;
      std::size_t enter = n_total_;
      double best = 1e-7;
      for (std::size_t j = 0; j < n_real_; ++j) {
        if (state_[j] == VarState::Basic) continue;
        const double w = std::abs(t(i, j));
        if (w > best) {
          best = w;
          enter = j;
        }
      }
      if (enter == n_total_) {
        lo_[basis_[i]] = -kInf;
        up_[basis_[i]] = kInf;
        xb_[i] = 0.0;
        continue;
      }
      pivot(i, enter, +1, 0.0, false);
      ++pivots_;
    }
    for (std::size_t j = n_real_; j < n_total_; ++j)
      if (state_[j] != VarState::Basic) up_[j] = 0.0;
    return true;
  }

  LpStatus phase2() {
    set_cost_phase2();
    for (int attempt = 0; attempt < 4; ++attempt) {
      const LpStatus st = primal_loop();
      if (st != LpStatus::Optimal) return st;
      refresh_basics();
      if (certify_optimal()) return LpStatus::Optimal;
      rebuild_zrow();
    }
    return LpStatus::NumericalFailure;
  }

  // Exact optimality check with duals from the original columns, immune to
  // tableau drift.
  bool certify_optimal() {
    std::vector<double> y;
    if (!solve_duals(y)) return false;
    for (std::size_t j = 0; j < n_real_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      if (up_[j] - lo_[j] <= kDegenTol) continue;
      double d = cost_[j];
      for (auto [i, a] : cols_[j]) d -= y[i] * a;
      int dir;
      if (eligible_dir(j, d, dir) && std::abs(d) > 10 * kOptTol) return false;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t bv = basis_[i];
      if (std::isfinite(lo_[bv]) && xb_[i] < lo_[bv] - 10 * kFeasTol) return false;
      if (std::isfinite(up_[bv]) && xb_[i] > up_[bv] + 10 * kFeasTol) return false;
    }
    return true;
  }

  // Solve B xB = b - N v_N exactly via dense LU to wash out pivot drift.
  void refresh_basics() {
    if (m_ == 0) return;
    std::vector<double> rhs = b_;
    for (std::size_t j = 0; j < n_total_; ++j) {
      if (state_[j] == VarState::Basic || value_[j] == 0.0) continue;
      for (auto [i, a] : cols_[j]) rhs[i] -= a * value_[j];
    }
    std::vector<double> B(m_ * m_, 0.0);
    for (std::size_t c = 0; c < m_; ++c)
      for (auto [i, a] : cols_[basis_[c]]) B[i * m_ + c] = a;
    if (lu_solve(std::move(B), rhs)) xb_ = rhs;
  }

  bool solve_duals(std::vector<double>& y) {
    y.assign(m_, 0.0);
    if (m_ == 0) return true;
    std::vector<double> Bt(m_ * m_, 0.0);
    std::vector<double> cb(m_, 0.0);
    for (std::size_t c = 0; c < m_; ++c) {
      for (auto [i, a] : cols_[basis_[c]]) Bt[c * m_ + i] = a;
      cb[c] = cost_[basis_[c]];
    }
    if (!lu_solve(std::move(Bt), cb)) return false;
    y = cb;
    return true;
  }

  // LU with partial pivoting; returns false if singular. Solves A x = rhs.
  static bool lu_solve(std::vector<double> A, std::vector<double>& rhs) {
    const std::size_t n = rhs.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::abs(A[perm[k] * n + k]);
      for (std::size_t i = k + 1; i < n; ++i) {
        const double v = std::abs(A[perm[i] * n + k]);
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (best < 1e-13) return false;
      std::swap(perm[k], perm[p]);
      const double diag = A[perm[k] * n + k];
      for (std::size_t i = k + 1; i < n; ++i) {
        const double f = A[perm[i] * n + k] / diag;
        if (f == 0.0) continue;
        A[perm[i] * n + k] = f;
        for (std::size_t j = k + 1; j < n; ++j) A[perm[i] * n + j] -= f * A[perm[k] * n + j];
      }
    }
    std::vector<double> yv(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = rhs[perm[i]];
      for (std::size_t j = 0; j < i; ++j) s -= A[perm[i] * n + j] * yv[j];
      yv[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = yv[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= A[perm[i] * n + j] * rhs[j];
      rhs[i] = s / A[perm[i] * n + i];
    }
    return true;
  }

  void extract(LpSolution& out) {
    std::vector<double> full(n_total_, 0.0);
    for (std::size_t j = 0; j < n_total_; ++j)
      if (state_[j] != VarState::Basic) full[j] = value_[j];
    for (std::size_t i = 0; i < m_; ++i) full[basis_[i]] = xb_[i];
    out.primal.assign(full.begin(), full.begin() + n_struct_);
    double obj = 0.0;
    for (std::size_t j = 0; j < n_struct_; ++j) obj += lp_.objective[j] * full[j];
    out.objective = obj;
    solve_duals(out.dual);
  }

  const LinearProgram& lp_;
  std::size_t n_struct_ = 0, n_slack_ = 0, n_real_ = 0, n_total_ = 0, m_ = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> cols_;
  std::vector<double> b_, sigma_;
  std::vector<double> lo_, up_;
  std::vector<double> tableau_, zrow_, cost_;
  std::vector<double> xb_, value_;
  std::vector<std::size_t> basis_;
  std::vector<VarState> state_;
  long pivots_ = 0;
  bool infeasible_ = false;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  Simplex s(lp);
  return s.run();
}

LpResiduals lp_residuals(const LinearProgram& lp, const LpSolution& sol) {
  LpResiduals res;
  if (sol.status != LpStatus::Optimal) return res;
  const std::size_t n = lp.num_vars();
  for (std::size_t j = 0; j < n; ++j) {
    const double x = sol.primal[j];
    if (std::isfinite(lp.lower[j]))
      res.feasibility = std::max(res.feasibility, lp.lower[j] - x);
    if (std::isfinite(lp.upper[j]))
      res.feasibility = std::max(res.feasibility, x - lp.upper[j]);
  }
  double dual_obj = 0.0;
  std::vector<double> reduced = lp.objective;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const LinearRow& r = lp.rows[i];
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) ax += r.coeffs[j] * sol.primal[j];
    double viol = 0.0;
    switch (r.sense) {
      case RowSense::LessEqual: viol = ax - r.rhs; break;
      case RowSense::GreaterEqual: viol = r.rhs - ax; break;
      case RowSense::Equal: viol = std::abs(ax - r.rhs); break;
    }
    res.feasibility = std::max(res.feasibility, viol);
    const double y = sol.dual[i];
    res.complementary_slackness =
        std::max(res.complementary_slackness, std::abs(y * (ax - r.rhs)));
    dual_obj += y * r.rhs;
    for (std::size_t j = 0; j < n; ++j) reduced[j] -= y * r.coeffs[j];
  }
  // Reduced costs act as bound multipliers at the active bound.
  for (std::size_t j = 0; j < n; ++j) {
    const double d = reduced[j];
    const double x = sol.primal[j];
    if (d > 0) {
      if (std::isfinite(lp.lower[j])) {
        dual_obj += d * lp.lower[j];
        res.complementary_slackness =
            std::max(res.complementary_slackness, std::abs(d * (x - lp.lower[j])));
      } else {
        res.complementary_slackness = std::max(res.complementary_slackness, d);
      }
    } else if (d < 0) {
      if (std::isfinite(lp.upper[j])) {
        dual_obj += d * lp.upper[j];
        res.complementary_slackness =
            std::max(res.complementary_slackness, std::abs(d * (lp.upper[j] - x)));
      } else {
        res.complementary_slackness = std::max(res.complementary_slackness, -d);
      }
    }
  }
  res.duality_gap = std::abs(sol.objective - dual_obj);
  return res;
}

}  // namespace kadapt
