#ifndef SYMSYNTH_GEOMETRY_LP_HPP
#define SYMSYNTH_GEOMETRY_LP_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace symsynth::geometry {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double value = 0.0;
};

/// Dense two-phase tableau simplex for
///   maximize c.x  subject to  A x <= b,  x >= 0.
/// Bland-style tie breaking keeps it from cycling. Sized for the handful of
/// variables and few dozen rows that show up in low-dimensional set tests.
class DenseSimplex {
 public:
  DenseSimplex(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
               const std::vector<double>& c, double eps = 1e-9)
      : m_(b.size()), n_(c.size()), eps_(eps), basic_(m_), nonbasic_(n_ + 1),
        table_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) table_[i][j] = a[i][j];
      basic_[i] = static_cast<long>(n_ + i);
      table_[i][n_] = -1.0;
      table_[i][n_ + 1] = b[i];
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasic_[j] = static_cast<long>(j);
      table_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;
    table_[m_ + 1][n_] = 1.0;
  }

  LpResult solve() {
    LpResult res;
    if (m_ > 0) {
      std::size_t r = 0;
      for (std::size_t i = 1; i < m_; ++i) {
        if (table_[i][n_ + 1] < table_[r][n_ + 1]) r = i;
      }
      if (table_[r][n_ + 1] < -eps_) {
        pivot(r, n_);
        if (!run(1) || table_[m_ + 1][n_ + 1] < -eps_) {
          res.status = LpStatus::Infeasible;
          return res;
        }
        for (std::size_t i = 0; i < m_; ++i) {
          if (basic_[i] != -1) continue;
          std::size_t s = 0;
          for (std::size_t j = 1; j <= n_; ++j) {
            if (table_[i][j] < table_[i][s] ||
                (table_[i][j] == table_[i][s] && nonbasic_[j] < nonbasic_[s])) {
              s = j;
            }
          }
          pivot(i, s);
        }
      }
    }
    if (!run(2)) {
      res.status = LpStatus::Unbounded;
      return res;
    }
    res.status = LpStatus::Optimal;
    res.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basic_[i] >= 0 && static_cast<std::size_t>(basic_[i]) < n_) {
        res.x[static_cast<std::size_t>(basic_[i])] = table_[i][n_ + 1];
      }
    }
    res.value = table_[m_][n_ + 1];
    return res;
  }

 private:
  void pivot(std::size_t r, std::size_t s) {
    const double inv = 1.0 / table_[r][s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      const double f = table_[i][s] * inv;
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n_ + 2; ++j) {
        if (j != s) table_[i][j] -= table_[r][j] * f;
      }
    }
    for (std::size_t j = 0; j < n_ + 2; ++j) {
      if (j != s) table_[r][j] *= inv;
    }
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i != r) table_[i][s] *= -inv;
    }
    table_[r][s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  bool run(int phase) {
    const std::size_t obj = phase == 1 ? m_ + 1 : m_;
    for (;;) {
      long s = -1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (phase == 2 && nonbasic_[j] == -1) continue;
        if (s == -1 || table_[obj][j] < table_[obj][static_cast<std::size_t>(s)] ||
            (table_[obj][j] == table_[obj][static_cast<std::size_t>(s)] &&
             nonbasic_[j] < nonbasic_[static_cast<std::size_t>(s)])) {
          s = static_cast<long>(j);
        }
      }
      const auto sc = static_cast<std::size_t>(s);
      if (table_[obj][sc] > -eps_) return true;
      long r = -1;
      for (std::size_t i = 0; i < m_; ++i) {
        if (table_[i][sc] < eps_) continue;
        if (r == -1) {
          r = static_cast<long>(i);
          continue;
        }
        const auto rc = static_cast<std::size_t>(r);
        const double lhs = table_[i][n_ + 1] / table_[i][sc];
        const double rhs = table_[rc][n_ + 1] / table_[rc][sc];
        if (lhs < rhs || (lhs == rhs && basic_[i] < basic_[rc])) r = static_cast<long>(i);
      }
      if (r == -1) return false;
      pivot(static_cast<std::size_t>(r), sc);
    }
  }

  std::size_t m_;
  std::size_t n_;
  double eps_;
  std::vector<long> basic_;
  std::vector<long> nonbasic_;
  std::vector<std::vector<double>> table_;
};

inline LpResult solve_lp(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                         const std::vector<double>& c) {
  return DenseSimplex(a, b, c).solve();
}

}  // namespace symsynth::geometry

#endif  // SYMSYNTH_GEOMETRY_LP_HPP
