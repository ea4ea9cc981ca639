#include "stochround/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stochround/common.hpp"

namespace stochround {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense two-phase revised simplex over the standard form
//   min c x   s.t.  A x = b,  x >= 0
// with an explicit basis inverse, product-form updates and periodic
// refactorization.  Pricing is Dantzig with Bland's rule as the
// anti-cycling fallback; everything is deterministic.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opts) : lp_(lp), opts_(opts) {
    build_standard_form();
  }

  SimplexResult run() {
    SimplexResult res;
    if (m_ == 0) {
      // Nothing constrains the variables beyond their lower bounds (finite
      // uppers become rows), so any negative cost direction is unbounded.
      for (int j = 0; j < n_; ++j) {
        if (obj_[j] < 0) {
          res.status = SolveStatus::Unbounded;
          return res;
        }
      }
      res.status = SolveStatus::Optimal;
      res.x = shift_;
      res.objective = objective_constant();
      if (lp_.maximize) res.objective = -res.objective;  // undo the internal negation
      return res;
    }

    basis_.resize(m_);
    in_basis_.assign(num_cols_, false);
    for (int r = 0; r < m_; ++r) {
      int col = start_basis_[r];
      basis_[r] = col;
      in_basis_[col] = true;
    }
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) binv_[idx(r, r)] = 1.0;
    xb_ = b_;

    // Phase 1: minimize the artificial total.
    if (has_artificial_) {
      cost_.assign(num_cols_, 0.0);
      for (int j = art_begin_; j < num_cols_; ++j) cost_[j] = 1.0;
      phase_ = 1;
      Outcome oc = iterate();
      res.phase1_iterations = iterations_;
      if (oc != Outcome::Optimal) throw InternalError("phase 1 cannot be unbounded");
      double infeas = 0;
      for (int r = 0; r < m_; ++r)
        if (basis_[r] >= art_begin_) infeas += std::max(xb_[r], 0.0);
      if (infeas > phase1_tol()) {
        res.status = SolveStatus::Infeasible;
        res.iterations = iterations_;
        return res;
      }
      drive_out_artificials();
    }

    cost_.assign(num_cols_, 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = obj_[j];
    phase_ = 2;
    Outcome oc = iterate();
    res.iterations = iterations_;
    if (oc == Outcome::Unbounded) {
      res.status = SolveStatus::Unbounded;
      return res;
    }

    res.status = SolveStatus::Optimal;
    res.x.assign(lp_.num_vars(), 0.0);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) res.x[basis_[r]] = std::max(xb_[r], 0.0);
    for (int j = 0; j < n_; ++j) res.x[j] += shift_[j];

    double obj = objective_constant();
    for (int j = 0; j < n_; ++j) obj += obj_[j] * (res.x[j] - shift_[j]);
    res.objective = lp_.maximize ? -obj : obj;

    std::vector<double> y = duals();
    res.row_dual.assign(lp_.num_rows(), 0.0);
    for (int r = 0; r < lp_.num_rows(); ++r) {
      double v = flip_[r] ? -y[r] : y[r];
      res.row_dual[r] = lp_.maximize ? -v : v;
    }
    res.basis = basis_;
    return res;
  }

 private:
  enum class Outcome { Optimal, Unbounded };

  std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * m_ + c; }

  double phase1_tol() const {
    double bmax = 1.0;
    for (double v : b_) bmax = std::max(bmax, std::abs(v));
    return 1e-7 * bmax;
  }

  double objective_constant() const { return obj_const_; }

  // Standard-form layout: structural columns 0..n-1, slack of original row r
  // at n + r (Le: +1, Ge: -1 before flipping), artificials from art_begin_.
  void build_standard_form() {
    const int n = lp_.num_vars();
    n_ = n;
    obj_.assign(lp_.objective.begin(), lp_.objective.end());
    if (lp_.maximize)
      for (double& c : obj_) c = -c;

    shift_.assign(n, 0.0);
    obj_const_ = 0;
    for (int j = 0; j < n; ++j) {
      double lo = lp_.lower.empty() ? 0.0 : lp_.lower[j];
      if (lo != 0.0) {
        shift_[j] = lo;
        obj_const_ += obj_[j] * lo;
      }
    }

    std::vector<std::vector<std::pair<int, double>>> all_rows = lp_.rows;
    std::vector<RowSense> senses = lp_.senses;
    std::vector<double> rhs = lp_.rhs;
    for (int j = 0; j < n; ++j) {
      double up = lp_.upper.empty() ? kInf : lp_.upper[j];
      if (up < kInf) {
        all_rows.push_back({{j, 1.0}});
        senses.push_back(RowSense::Le);
        rhs.push_back(up);
      }
    }

    m_ = static_cast<int>(all_rows.size());
    flip_.assign(m_, false);
    b_.assign(m_, 0.0);
    cols_.assign(n_ + 2 * m_, {});

    for (int r = 0; r < m_; ++r) {
      double b = rhs[r];
      for (const auto& [col, coef] : all_rows[r]) b -= coef * shift_[col];
      RowSense sense = senses[r];
      double sign = 1.0;
      if (b < 0) {
        flip_[r] = true;
        sign = -1.0;
        b = -b;
        if (sense == RowSense::Le)
          sense = RowSense::Ge;
        else if (sense == RowSense::Ge)
          sense = RowSense::Le;
      }
      b_[r] = b;
      for (const auto& [col, coef] : all_rows[r])
        if (coef != 0.0) cols_[col].emplace_back(r, sign * coef);
      if (sense == RowSense::Le)
        cols_[n_ + r].emplace_back(r, 1.0);
      else if (sense == RowSense::Ge)
        cols_[n_ + r].emplace_back(r, -1.0);
      eff_sense_.push_back(sense);
    }

    art_begin_ = n_ + m_;
    num_cols_ = n_ + 2 * m_;
    start_basis_.assign(m_, -1);
    has_artificial_ = false;
    for (int r = 0; r < m_; ++r) {
      if (eff_sense_[r] == RowSense::Le) {
        start_basis_[r] = n_ + r;
      } else {
        cols_[art_begin_ + r].emplace_back(r, 1.0);
        start_basis_[r] = art_begin_ + r;
        has_artificial_ = true;
      }
    }
  }

  std::vector<double> duals() const {
    std::vector<double> y(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      for (int r = 0; r < m_; ++r) y[r] += cb * binv_[idx(i, r)];
    }
    return y;
  }

  double reduced_cost(int j, const std::vector<double>& y) const {
    double d = cost_[j];
    for (const auto& [r, a] : cols_[j]) d -= y[r] * a;
    return d;
  }

  bool enterable(int j) const {
    if (in_basis_[j]) return false;
    if (j >= art_begin_) return false;           // artificials never re-enter
    if (phase_ == 2 && j >= n_ && eff_sense_[j - n_] == RowSense::Eq) return false;
    return j < n_ || !cols_[j].empty();
  }

  Outcome iterate() {
    int degen_streak = 0;
    bool bland = false;
    int since_refactor = 0;

    while (true) {
      if (++iterations_ > opts_.max_iterations)
        throw InternalError("simplex iteration limit exceeded");

      std::vector<double> y = duals();
      int enter = -1;
      double best = -opts_.opt_tol;
      for (int j = 0; j < num_cols_; ++j) {
        if (!enterable(j)) continue;
        double d = reduced_cost(j, y);
        if (d < best) {
          if (bland) {
            enter = j;
            break;
          }
          best = d;
          enter = j;
        }
      }
      if (enter < 0) return Outcome::Optimal;

      // Direction w = B^-1 A_enter.
      std::vector<double> w(m_, 0.0);
      for (const auto& [r, a] : cols_[enter])
        for (int i = 0; i < m_; ++i) w[i] += binv_[idx(i, r)] * a;

      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < m_; ++i) {
        if (w[i] > opts_.feas_tol) {
          double ratio = std::max(xb_[i], 0.0) / w[i];
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (leave < 0 || basis_[i] < basis_[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) {
        if (phase_ == 1) throw InternalError("unbounded phase-1 subproblem");
        return Outcome::Unbounded;
      }

      if (best_ratio < 1e-12) {
        if (++degen_streak > opts_.degenerate_switch) bland = true;
      } else {
        degen_streak = 0;
        bland = false;
      }

      pivot(enter, leave, w, best_ratio);
      if (++since_refactor >= opts_.refactor_every) {
        refactor();
        since_refactor = 0;
      }
    }
  }

  void pivot(int enter, int leave, const std::vector<double>& w, double ratio) {
    in_basis_[basis_[leave]] = false;
    in_basis_[enter] = true;
    basis_[leave] = enter;

    const double piv = w[leave];
    double* lrow = &binv_[idx(leave, 0)];
    for (int c = 0; c < m_; ++c) lrow[c] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == leave || w[i] == 0.0) continue;
      double f = w[i];
      double* row = &binv_[idx(i, 0)];
      for (int c = 0; c < m_; ++c) row[c] -= f * lrow[c];
    }
    for (int i = 0; i < m_; ++i)
      if (i != leave) xb_[i] -= ratio * w[i];
    xb_[leave] = ratio;
  }

  // Rebuild B^-1 from scratch by Gauss-Jordan with partial pivoting.
  void refactor() {
    std::vector<double> mat(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int c = 0; c < m_; ++c)
      for (const auto& [r, a] : cols_[basis_[c]]) mat[idx(r, c)] = a;

    std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) inv[idx(r, r)] = 1.0;

    for (int col = 0; col < m_; ++col) {
      int piv = col;
      for (int r = col + 1; r < m_; ++r)
        if (std::abs(mat[idx(r, col)]) > std::abs(mat[idx(piv, col)])) piv = r;
      if (std::abs(mat[idx(piv, col)]) < 1e-13)
        throw InternalError("singular basis during refactorization");
      if (piv != col)
        for (int c = 0; c < m_; ++c) {
          std::swap(mat[idx(piv, c)], mat[idx(col, c)]);
          std::swap(inv[idx(piv, c)], inv[idx(col, c)]);
        }
      double p = mat[idx(col, col)];
      for (int c = 0; c < m_; ++c) {
        mat[idx(col, c)] /= p;
        inv[idx(col, c)] /= p;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        double f = mat[idx(r, col)];
        if (f == 0.0) continue;
        for (int c = 0; c < m_; ++c) {
          mat[idx(r, c)] -= f * mat[idx(col, c)];
          inv[idx(r, c)] -= f * inv[idx(col, c)];
        }
      }
    }

    // inv now maps row-space: B^-1 = inv with basis column order; but the
    // Gauss-Jordan above worked on B arranged column-per-basis-position, so
    // inv rows correspond to basis positions directly.
    binv_ = std::move(inv);
    xb_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i)
      for (int r = 0; r < m_; ++r) xb_[i] += binv_[idx(i, r)] * b_[r];
  }

  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < art_begin_) continue;
      // Row r of B^-1.
      std::vector<double> rho(m_);
      for (int c = 0; c < m_; ++c) rho[c] = binv_[idx(r, c)];
      int enter = -1;
      for (int j = 0; j < art_begin_ && enter < 0; ++j) {
        if (in_basis_[j]) continue;
        if (j >= n_ && eff_sense_[j - n_] == RowSense::Eq) continue;
        double alpha = 0;
        for (const auto& [rr, a] : cols_[j]) alpha += rho[rr] * a;
        if (std::abs(alpha) > 1e-7) enter = j;
      }
      if (enter < 0) continue;  // redundant row; artificial stays pinned at 0
      std::vector<double> w(m_, 0.0);
      for (const auto& [rr, a] : cols_[enter])
        for (int i = 0; i < m_; ++i) w[i] += binv_[idx(i, rr)] * a;
      pivot(enter, r, w, std::max(xb_[r], 0.0) / w[r]);
    }
  }

  const LinearProgram& lp_;
  SimplexOptions opts_;

  int n_ = 0, m_ = 0, num_cols_ = 0, art_begin_ = 0;
  bool has_artificial_ = false;
  int phase_ = 1;
  int iterations_ = 0;

  std::vector<double> obj_, shift_;
  double obj_const_ = 0;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> b_;
  std::vector<bool> flip_;
  std::vector<RowSense> eff_sense_;
  std::vector<int> start_basis_;

  std::vector<int> basis_;
  std::vector<bool> in_basis_;
  std::vector<double> binv_;
  std::vector<double> xb_;
  std::vector<double> cost_;
};

}  // namespace

SimplexResult solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
  if (lp.num_vars() == 0) throw ValidationError("lp: no variables");
  return Simplex(lp, opts).run();
}

}  // namespace stochround
