#include "battsched/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "battsched/errors.hpp"

namespace battsched::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroTol = 1e-11;

enum class ColState : unsigned char { AtLower, AtUpper, Basic, Locked };

class Simplex {
 public:
  Simplex(const Problem& p, const Options& opts) : p_(p), opts_(opts) {
    m_ = static_cast<int>(p.rows.size());
    n_ = p.n_vars;
    ncols_ = n_ + m_;
    width_ = ncols_;  // artificials appended later if needed
    max_iter_ = opts.max_iterations > 0 ? opts.max_iterations
                                        : 5000 + 200 * (m_ + n_);
  }

  Solution run() {
    build_tableau();
    init_basis();
    compute_values();

    Solution sol;
    if (!primal_feasible()) {
      add_artificials();
      set_phase1_objective();
      const Status st = iterate();
      if (st != Status::Optimal) return finish(st);
      if (phase1_infeasibility() > opts_.tol * 10.0)
        return finish(Status::Infeasible);
      retire_artificials();
    }
    set_phase2_objective();
    const Status st = iterate();
    return finish(st);
  }

 private:
  const Problem& p_;
  Options opts_;
  int m_ = 0, n_ = 0, ncols_ = 0, width_ = 0;
  int max_iter_ = 0;
  int iterations_ = 0;
  bool bland_ = false;
  int degenerate_run_ = 0;

  std::vector<double> tab_;     // m_ x width_, row-major
  std::vector<double> rhs_;     // transformed right-hand sides (init only)
  std::vector<double> obj_;     // reduced-cost row, width_
  std::vector<double> lo_, hi_; // bounds per column
  std::vector<double> xval_;    // current value per column
  std::vector<int> basis_;      // basic column per row
  std::vector<ColState> state_; // per column
  std::vector<double> colbuf_;  // entering column cache

  double* row(int r) { return tab_.data() + static_cast<std::size_t>(r) * width_; }

  void build_tableau() {
    tab_.assign(static_cast<std::size_t>(m_) * width_, 0.0);
    rhs_.assign(static_cast<std::size_t>(m_), 0.0);
    lo_.assign(static_cast<std::size_t>(width_), 0.0);
    hi_.assign(static_cast<std::size_t>(width_), kInf);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = p_.lower[static_cast<std::size_t>(j)];
      hi_[j] = p_.upper[static_cast<std::size_t>(j)];
      if (!(lo_[j] <= hi_[j]) || !std::isfinite(lo_[j]))
        fail(Errc::InvalidSpec, "variable bounds must satisfy finite lo <= hi");
    }
    for (int r = 0; r < m_; ++r) {
      const Row& in = p_.rows[static_cast<std::size_t>(r)];
      const double flip = in.sense == Sense::Ge ? -1.0 : 1.0;
      double* tr = row(r);
      for (const auto& [j, v] : in.coeffs) {
        if (j < 0 || j >= n_) fail(Errc::InvalidSpec, "row references unknown column");
        tr[j] += flip * v;
      }
      rhs_[static_cast<std::size_t>(r)] = flip * in.rhs;
      const int slack = n_ + r;
      tr[slack] = 1.0;
      if (in.sense == Sense::Eq) {
        lo_[slack] = 0.0;
        hi_[slack] = 0.0;
      }
    }
    xval_.assign(static_cast<std::size_t>(width_), 0.0);
    state_.assign(static_cast<std::size_t>(width_), ColState::AtLower);
    for (int j = 0; j < width_; ++j) {
      if (std::isfinite(lo_[j])) {
        xval_[j] = lo_[j];
        state_[j] = ColState::AtLower;
      } else {
        xval_[j] = hi_[j];
        state_[j] = ColState::AtUpper;
      }
    }
  }

  // Installs the crash basis (or all slacks) and canonicalizes the tableau.
  void init_basis() {
    basis_.assign(static_cast<std::size_t>(m_), -1);
    for (int r = 0; r < m_; ++r) {
      int want = n_ + r;
      if (!p_.crash_basis.empty()) {
        const int c = p_.crash_basis[static_cast<std::size_t>(r)];
        // a column can be basic in one row only
        if (c >= 0 && c < n_ &&
            state_[static_cast<std::size_t>(c)] != ColState::Basic)
          want = c;
      }
      basis_[static_cast<std::size_t>(r)] = want;
      state_[static_cast<std::size_t>(want)] = ColState::Basic;
    }
    // Pivot non-slack basis columns into canonical (unit) form.
    for (int r = 0; r < m_; ++r) {
      const int j = basis_[static_cast<std::size_t>(r)];
      if (j == n_ + r) continue;
      double* tr = row(r);
      const double piv = tr[j];
      if (std::abs(piv) < 1e-9) {
        // Unusable crash entry for this row: keep the slack basic instead.
        state_[static_cast<std::size_t>(j)] = ColState::AtLower;
        basis_[static_cast<std::size_t>(r)] = n_ + r;
        state_[static_cast<std::size_t>(n_ + r)] = ColState::Basic;
        continue;
      }
      const double inv = 1.0 / piv;
      for (int k = 0; k < width_; ++k) tr[k] *= inv;
      rhs_[static_cast<std::size_t>(r)] *= inv;
      for (int r2 = 0; r2 < m_; ++r2) {
        if (r2 == r) continue;
        double* t2 = row(r2);
        const double f = t2[j];
        if (std::abs(f) < kZeroTol) continue;
        for (int k = 0; k < width_; ++k) t2[k] -= f * tr[k];
        t2[j] = 0.0;
        rhs_[static_cast<std::size_t>(r2)] -= f * rhs_[static_cast<std::size_t>(r)];
      }
      tr[j] = 1.0;
    }
  }

  // Basic values from the transformed rhs minus nonbasic contributions.
  void compute_values() {
    for (int r = 0; r < m_; ++r) {
      double v = rhs_[static_cast<std::size_t>(r)];
      const double* tr = row(r);
      for (int j = 0; j < width_; ++j) {
        if (state_[static_cast<std::size_t>(j)] == ColState::Basic) continue;
        const double xj = xval_[static_cast<std::size_t>(j)];
        if (xj != 0.0) v -= tr[j] * xj;
      }
      xval_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = v;
    }
  }

  bool primal_feasible() const {
    for (int r = 0; r < m_; ++r) {
      const int j = basis_[static_cast<std::size_t>(r)];
      const double v = xval_[static_cast<std::size_t>(j)];
      if (v < lo_[static_cast<std::size_t>(j)] - opts_.tol ||
          v > hi_[static_cast<std::size_t>(j)] + opts_.tol)
        return false;
    }
    return true;
  }

  void add_artificials() {
    std::vector<int> bad;
    for (int r = 0; r < m_; ++r) {
      const int j = basis_[static_cast<std::size_t>(r)];
      const double v = xval_[static_cast<std::size_t>(j)];
      if (v < lo_[static_cast<std::size_t>(j)] - opts_.tol ||
          v > hi_[static_cast<std::size_t>(j)] + opts_.tol)
        bad.push_back(r);
    }
    const int extra = static_cast<int>(bad.size());
    const int new_width = width_ + extra;
    std::vector<double> nt(static_cast<std::size_t>(m_) * new_width, 0.0);
    for (int r = 0; r < m_; ++r)
      std::copy_n(row(r), width_, nt.data() + static_cast<std::size_t>(r) * new_width);
    tab_ = std::move(nt);
    const int old_width = width_;
    width_ = new_width;
    lo_.resize(static_cast<std::size_t>(width_), 0.0);
    hi_.resize(static_cast<std::size_t>(width_), kInf);
    xval_.resize(static_cast<std::size_t>(width_), 0.0);
    state_.resize(static_cast<std::size_t>(width_), ColState::AtLower);

    for (int k = 0; k < extra; ++k) {
      const int r = bad[static_cast<std::size_t>(k)];
      const int art = old_width + k;
      const int old_basic = basis_[static_cast<std::size_t>(r)];
      double v = xval_[static_cast<std::size_t>(old_basic)];
      // Park the violated basic at its nearest finite bound.
      double parked = 0.0;
      if (v < lo_[static_cast<std::size_t>(old_basic)])
        parked = lo_[static_cast<std::size_t>(old_basic)];
      else
        parked = hi_[static_cast<std::size_t>(old_basic)];
      state_[static_cast<std::size_t>(old_basic)] =
          parked == lo_[static_cast<std::size_t>(old_basic)] ? ColState::AtLower
                                                             : ColState::AtUpper;
      xval_[static_cast<std::size_t>(old_basic)] = parked;
      double resid = v - parked;  // what the artificial must absorb
      double* tr = row(r);
      if (resid < 0.0) {
        for (int j = 0; j < width_; ++j) tr[j] = -tr[j];
        rhs_[static_cast<std::size_t>(r)] = -rhs_[static_cast<std::size_t>(r)];
        resid = -resid;
      }
      tr[art] = 1.0;
      basis_[static_cast<std::size_t>(r)] = art;
      state_[static_cast<std::size_t>(art)] = ColState::Basic;
      xval_[static_cast<std::size_t>(art)] = resid;
    }
    n_art_first_ = old_width;
  }

  void set_phase1_objective() {
    obj_.assign(static_cast<std::size_t>(width_), 0.0);
    // cost 1 on artificials; reduced costs d_j = -sum over artificial rows.
    for (int r = 0; r < m_; ++r) {
      const int b = basis_[static_cast<std::size_t>(r)];
      if (b >= n_art_first_) {
        const double* tr = row(r);
        for (int j = 0; j < width_; ++j) obj_[static_cast<std::size_t>(j)] -= tr[j];
      }
    }
    for (int j = n_art_first_; j < width_; ++j)
      obj_[static_cast<std::size_t>(j)] += 1.0;
    phase1_ = true;
  }

  double phase1_infeasibility() const {
    double s = 0.0;
    for (int r = 0; r < m_; ++r) {
      const int b = basis_[static_cast<std::size_t>(r)];
      if (b >= n_art_first_) s += xval_[static_cast<std::size_t>(b)];
    }
    return s;
  }

  void retire_artificials() {
    for (int r = 0; r < m_; ++r) {
      const int b = basis_[static_cast<std::size_t>(r)];
      if (b < n_art_first_) continue;
      // Try to replace a basic artificial (at value ~0) with a real column.
      const double* tr = row(r);
      int repl = -1;
      for (int j = 0; j < n_art_first_; ++j) {
        if (state_[static_cast<std::size_t>(j)] == ColState::Basic) continue;
        if (lo_[static_cast<std::size_t>(j)] == hi_[static_cast<std::size_t>(j)])
          continue;
        if (std::abs(tr[j]) > 1e-7) {
          repl = j;
          break;
        }
      }
      if (repl >= 0) pivot(r, repl, xval_[static_cast<std::size_t>(repl)]);
    }
    for (int j = n_art_first_; j < width_; ++j)
      if (state_[static_cast<std::size_t>(j)] != ColState::Basic)
        state_[static_cast<std::size_t>(j)] = ColState::Locked;
    phase1_ = false;
  }

  void set_phase2_objective() {
    obj_.assign(static_cast<std::size_t>(width_), 0.0);
    for (int j = 0; j < n_; ++j) obj_[static_cast<std::size_t>(j)] = p_.cost[static_cast<std::size_t>(j)];
    for (int r = 0; r < m_; ++r) {
      const int b = basis_[static_cast<std::size_t>(r)];
      const double cb = b < n_ ? p_.cost[static_cast<std::size_t>(b)] : 0.0;
      if (cb == 0.0) continue;
      const double* tr = row(r);
      for (int j = 0; j < width_; ++j) obj_[static_cast<std::size_t>(j)] -= cb * tr[j];
    }
  }

  // One simplex phase; returns Optimal when priced out.
  Status iterate() {
    colbuf_.assign(static_cast<std::size_t>(m_), 0.0);
    while (true) {
      if (iterations_ >= max_iter_) return Status::IterationLimit;

      int enter = -1;
      double best = opts_.tol;
      for (int j = 0; j < width_; ++j) {
        const ColState st = state_[static_cast<std::size_t>(j)];
        if (st == ColState::Basic || st == ColState::Locked) continue;
        if (lo_[static_cast<std::size_t>(j)] == hi_[static_cast<std::size_t>(j)]) continue;
        const double d = obj_[static_cast<std::size_t>(j)];
        double viol = 0.0;
        if (st == ColState::AtLower && d < -opts_.tol) viol = -d;
        else if (st == ColState::AtUpper && d > opts_.tol) viol = d;
        else continue;
        if (bland_) { enter = j; break; }
        if (viol > best) { best = viol; enter = j; }
      }
      if (enter < 0) return Status::Optimal;

      ++iterations_;
      const double dir =
          state_[static_cast<std::size_t>(enter)] == ColState::AtLower ? 1.0 : -1.0;

      for (int r = 0; r < m_; ++r) colbuf_[static_cast<std::size_t>(r)] = row(r)[enter];

      // Ratio test: how far can the entering variable move?
      double t_max = hi_[static_cast<std::size_t>(enter)] - lo_[static_cast<std::size_t>(enter)];
      int leave_row = -1;
      bool leave_at_upper = false;
      for (int r = 0; r < m_; ++r) {
        const double a = colbuf_[static_cast<std::size_t>(r)];
        if (std::abs(a) < kZeroTol) continue;
        const int b = basis_[static_cast<std::size_t>(r)];
        const double v = xval_[static_cast<std::size_t>(b)];
        const double delta = -a * dir;  // basic change per unit step
        double ratio;
        bool hits_upper;
        if (delta < 0.0) {
          ratio = (v - lo_[static_cast<std::size_t>(b)]) / (-delta);
          hits_upper = false;
        } else {
          if (!std::isfinite(hi_[static_cast<std::size_t>(b)])) continue;
          ratio = (hi_[static_cast<std::size_t>(b)] - v) / delta;
          hits_upper = true;
        }
        if (ratio < 0.0) ratio = 0.0;
        bool better = ratio < t_max - 1e-12;
        if (!better && ratio < t_max + 1e-12 && leave_row >= 0) {
          // tie-break: Bland wants the smallest basic index, otherwise
          // prefer the numerically larger pivot
          if (bland_)
            better = b < basis_[static_cast<std::size_t>(leave_row)];
          else
            better = std::abs(a) >
                     std::abs(colbuf_[static_cast<std::size_t>(leave_row)]);
        }
        if (better) {
          t_max = std::min(t_max, ratio);
          leave_row = r;
          leave_at_upper = hits_upper;
        }
      }

      if (!std::isfinite(t_max)) return Status::Unbounded;

      if (t_max <= 1e-10) {
        if (++degenerate_run_ > 3 * (m_ + 16)) bland_ = true;
      } else {
        degenerate_run_ = 0;
        bland_ = false;
      }

      if (leave_row < 0) {
        // Bound flip: entering jumps to its opposite bound.
        const double t = t_max;
        for (int r = 0; r < m_; ++r) {
          const double a = colbuf_[static_cast<std::size_t>(r)];
          if (a == 0.0) continue;
          const int b = basis_[static_cast<std::size_t>(r)];
          xval_[static_cast<std::size_t>(b)] -= a * dir * t;
        }
        if (dir > 0.0) {
          xval_[static_cast<std::size_t>(enter)] = hi_[static_cast<std::size_t>(enter)];
          state_[static_cast<std::size_t>(enter)] = ColState::AtUpper;
        } else {
          xval_[static_cast<std::size_t>(enter)] = lo_[static_cast<std::size_t>(enter)];
          state_[static_cast<std::size_t>(enter)] = ColState::AtLower;
        }
        continue;
      }

      // Move basics, then pivot the entering column into the basis.
      const double t = t_max;
      for (int r = 0; r < m_; ++r) {
        if (r == leave_row) continue;
        const double a = colbuf_[static_cast<std::size_t>(r)];
        if (a == 0.0) continue;
        const int b = basis_[static_cast<std::size_t>(r)];
        xval_[static_cast<std::size_t>(b)] -= a * dir * t;
      }
      const int leaving = basis_[static_cast<std::size_t>(leave_row)];
      xval_[static_cast<std::size_t>(leaving)] =
          leave_at_upper ? hi_[static_cast<std::size_t>(leaving)]
                         : lo_[static_cast<std::size_t>(leaving)];
      state_[static_cast<std::size_t>(leaving)] =
          leave_at_upper ? ColState::AtUpper : ColState::AtLower;
      const double enter_val = xval_[static_cast<std::size_t>(enter)] + dir * t;
      pivot(leave_row, enter, enter_val);
    }
  }

  // Row operations making `enter` the basic column of row `prow`.
  void pivot(int prow, int enter, double enter_val) {
    double* pr = row(prow);
    const double piv = pr[enter];
    const double inv = 1.0 / piv;
    for (int k = 0; k < width_; ++k) pr[k] *= inv;
    pr[enter] = 1.0;
    for (int r = 0; r < m_; ++r) {
      if (r == prow) continue;
      double* tr = row(r);
      const double f = tr[enter];
      if (std::abs(f) < kZeroTol) { tr[enter] = 0.0; continue; }
      for (int k = 0; k < width_; ++k) tr[k] -= f * pr[k];
      tr[enter] = 0.0;
    }
    if (!obj_.empty()) {
      const double f = obj_[static_cast<std::size_t>(enter)];
      if (std::abs(f) > 0.0) {
        for (int k = 0; k < width_; ++k) obj_[static_cast<std::size_t>(k)] -= f * pr[k];
        obj_[static_cast<std::size_t>(enter)] = 0.0;
      }
    }
    basis_[static_cast<std::size_t>(prow)] = enter;
    state_[static_cast<std::size_t>(enter)] = ColState::Basic;
    xval_[static_cast<std::size_t>(enter)] = enter_val;
  }

  Solution finish(Status st) {
    Solution sol;
    sol.status = st;
    sol.iterations = iterations_;
    sol.x.assign(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) sol.x[static_cast<std::size_t>(j)] = xval_[static_cast<std::size_t>(j)];
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += p_.cost[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
    sol.objective = obj;
    // Residual over the original rows and bounds.
    double viol = 0.0;
    for (const auto& in : p_.rows) {
      double lhs = 0.0;
      for (const auto& [j, v] : in.coeffs) lhs += v * sol.x[static_cast<std::size_t>(j)];
      if (in.sense == Sense::Le) viol = std::max(viol, lhs - in.rhs);
      else if (in.sense == Sense::Ge) viol = std::max(viol, in.rhs - lhs);
      else viol = std::max(viol, std::abs(lhs - in.rhs));
    }
    for (int j = 0; j < n_; ++j) {
      viol = std::max(viol, p_.lower[static_cast<std::size_t>(j)] - sol.x[static_cast<std::size_t>(j)]);
      if (std::isfinite(p_.upper[static_cast<std::size_t>(j)]))
        viol = std::max(viol, sol.x[static_cast<std::size_t>(j)] - p_.upper[static_cast<std::size_t>(j)]);
    }
    sol.max_violation = std::max(viol, 0.0);
    return sol;
  }

  bool phase1_ = false;
  int n_art_first_ = std::numeric_limits<int>::max();
};

}  // namespace

int Problem::add_var(double c, double lo, double hi) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return n_vars++;
}

Solution solve(const Problem& p, const Options& opts) {
  if (p.n_vars == 0) fail(Errc::InvalidSpec, "LP has no variables");
  if (!p.crash_basis.empty() && p.crash_basis.size() != p.rows.size())
    fail(Errc::InvalidSpec, "crash basis must name one column per row");
  Simplex s(p, opts);
  return s.run();
}

}  // namespace battsched::lp
