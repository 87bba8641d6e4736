#include "tcs/linalg.hpp"

#include <cmath>

#include "tcs/errors.hpp"

namespace tcs {

std::vector<std::size_t> rref(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(r, k));
    Rational inv = 1 / m(r, c);
    for (std::size_t k = c; k < m.cols(); ++k) m(r, k) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t k = c; k < m.cols(); ++k)
        if (m(r, k) != 0) m(i, k) -= f * m(r, k);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(RationalMatrix m) { return rref(m).size(); }

std::optional<std::vector<Rational>> solve(const RationalMatrix& a, const std::vector<Rational>& b) {
  if (b.size() != a.rows()) throw DomainError("right-hand side has wrong length");
  RationalMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
  std::vector<Rational> x(a.cols());
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, a.cols());
  return x;
}

std::vector<std::vector<Rational>> nullspace(const RationalMatrix& a) {
  RationalMatrix m = a;
  auto piv = rref(m);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<std::vector<Rational>> out;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(a.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(r, f);
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

template <class T>
struct Num;

template <>
struct Num<Rational> {
  static bool pos(const Rational& x) { return x > 0; }
  static bool neg(const Rational& x) { return x < 0; }
  static bool zero(const Rational& x) { return x == 0; }
  static Rational abs(const Rational& x) { return boost::multiprecision::abs(x); }
};

template <>
struct Num<double> {
  static constexpr double eps = 1e-11;
  static bool pos(double x) { return x > eps; }
  static bool neg(double x) { return x < -eps; }
  static bool zero(double x) { return std::fabs(x) <= eps; }
  static double abs(double x) { return std::fabs(x); }
};

template <class T>
class Simplex {
 public:
  explicit Simplex(const BoundedLP<T>& lp) : lp_(lp), m_(lp.a.rows()), n_(lp.a.cols()), total_(n_ + m_) {
    if (lp.b.size() != m_ || lp.c.size() != n_ || lp.lower.size() != n_ || lp.upper.size() != n_ ||
        lp.has_lower.size() != n_ || lp.has_upper.size() != n_)
      throw DomainError("linear program has inconsistent dimensions");
    lo_.resize(total_);
    hi_.resize(total_);
    has_lo_.assign(total_, true);
    has_hi_.assign(total_, false);
    x_.resize(total_);
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = lp.lower[j];
      hi_[j] = lp.upper[j];
      has_lo_[j] = lp.has_lower[j];
      has_hi_[j] = lp.has_upper[j];
      if (has_lo_[j] && has_hi_[j] && Num<T>::pos(lo_[j] - hi_[j])) throw VerificationError("empty variable box");
      T v = 0;
      if (has_lo_[j] && Num<T>::pos(lo_[j] - v)) v = lo_[j];
      if (has_hi_[j] && Num<T>::pos(v - hi_[j])) v = hi_[j];
      x_[j] = v;
    }
    tab_ = Matrix<T>(m_, total_);
    sign_.assign(m_, 1);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      T r = lp.b[i];
      for (std::size_t j = 0; j < n_; ++j)
        if (!Num<T>::zero(lp.a(i, j))) r -= lp.a(i, j) * x_[j];
      if (Num<T>::neg(r)) sign_[i] = -1;
      for (std::size_t j = 0; j < n_; ++j) tab_(i, j) = sign_[i] * lp.a(i, j);
      tab_(i, n_ + i) = 1;
      basis_[i] = n_ + i;
      x_[n_ + i] = sign_[i] * r;
      lo_[n_ + i] = 0;
    }
  }

  LPResult<T> run() {
    // phase 1: maximize -sum(artificials)
    std::vector<T> cost1(total_);
    for (std::size_t i = 0; i < m_; ++i) cost1[n_ + i] = -1;
    optimize(cost1);
    T infeas = 0;
    for (std::size_t i = 0; i < m_; ++i) infeas += x_[n_ + i];
    if (Num<T>::pos(infeas)) throw VerificationError("linear program is infeasible");
    for (std::size_t i = 0; i < m_; ++i) {
      has_hi_[n_ + i] = true;
      hi_[n_ + i] = 0;
      x_[n_ + i] = 0;
    }
    std::vector<T> cost2(total_);
    for (std::size_t j = 0; j < n_; ++j) cost2[j] = lp_.c[j];
    optimize(cost2);

    LPResult<T> res;
    res.x.assign(x_.begin(), x_.begin() + n_);
    res.objective = 0;
    for (std::size_t j = 0; j < n_; ++j)
      if (!Num<T>::zero(lp_.c[j])) res.objective += lp_.c[j] * res.x[j];
    res.duals.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) res.duals[i] = -d_[n_ + i] * T(sign_[i]);
    res.pivots = pivots_;
    return res;
  }

 private:
  void optimize(const std::vector<T>& cost) {
    d_ = cost;
    for (std::size_t i = 0; i < m_; ++i) {
      const T& cb = cost[basis_[i]];
      if (Num<T>::zero(cb)) continue;
      const T* row = tab_.row(i);
      for (std::size_t j = 0; j < total_; ++j)
        if (!Num<T>::zero(row[j])) d_[j] -= cb * row[j];
    }
    std::vector<bool> basic(total_, false);
    for (auto b : basis_) basic[b] = true;

    for (;;) {
      // Bland: lowest-index improving nonbasic variable
      std::size_t enter = total_;
      int dir = 0;
      for (std::size_t j = 0; j < total_; ++j) {
        if (basic[j]) continue;
        if (Num<T>::pos(d_[j]) && (!has_hi_[j] || Num<T>::pos(hi_[j] - x_[j]))) {
          enter = j;
          dir = 1;
          break;
        }
        if (Num<T>::neg(d_[j]) && (!has_lo_[j] || Num<T>::pos(x_[j] - lo_[j]))) {
          enter = j;
          dir = -1;
          break;
        }
      }
      if (enter == total_) return;

      bool has_step = false;
      T step{};
      std::size_t leave_row = m_;
      bool leave_upper = false;
      if (dir > 0 && has_hi_[enter]) {
        step = hi_[enter] - x_[enter];
        has_step = true;
      } else if (dir < 0 && has_lo_[enter]) {
        step = x_[enter] - lo_[enter];
        has_step = true;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        T a = tab_(i, enter);
        if (Num<T>::zero(a)) continue;
        // basic variable moves by -dir * a * t
        T rate = dir > 0 ? a : -a;
        std::size_t bv = basis_[i];
        T limit;
        bool upper;
        if (Num<T>::pos(rate)) {
          if (!has_lo_[bv]) continue;
          limit = (x_[bv] - lo_[bv]) / rate;
          upper = false;
        } else {
          if (!has_hi_[bv]) continue;
          limit = (hi_[bv] - x_[bv]) / (-rate);
          upper = true;
        }
        if (Num<T>::neg(limit)) limit = 0;
        bool better = !has_step || Num<T>::neg(limit - step);
        bool tie = has_step && !better && !Num<T>::pos(limit - step);
        if (better || (tie && leave_row != m_ && bv < basis_[leave_row])) {
          step = limit;
          has_step = true;
          leave_row = i;
          leave_upper = upper;
        }
      }
      if (!has_step) throw VerificationError("linear program is unbounded");

      const T delta = dir > 0 ? step : T(-step);
      if (!Num<T>::zero(delta)) {
        x_[enter] += delta;
        for (std::size_t i = 0; i < m_; ++i) {
          const T& a = tab_(i, enter);
          if (!Num<T>::zero(a)) x_[basis_[i]] -= a * delta;
        }
      }
      if (leave_row == m_) {
        // bound flip of the entering variable
        x_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
        continue;
      }
      std::size_t leaving = basis_[leave_row];
      x_[leaving] = leave_upper ? hi_[leaving] : lo_[leaving];
      pivot(leave_row, enter);
      basic[leaving] = false;
      basic[enter] = true;
      ++pivots_;
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    T* prow = tab_.row(r);
    const T inv = T(1) / prow[col];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < total_; ++j) {
      if (Num<T>::zero(prow[j])) {
        prow[j] = 0;
        continue;
      }
      prow[j] *= inv;
      nz.push_back(j);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      T* row = tab_.row(i);
      if (Num<T>::zero(row[col])) continue;
      const T f = row[col];
      for (auto j : nz) row[j] -= f * prow[j];
      row[col] = 0;
    }
    if (!Num<T>::zero(d_[col])) {
      const T f = d_[col];
      for (auto j : nz) d_[j] -= f * prow[j];
      d_[col] = 0;
    }
    basis_[r] = col;
  }

  const BoundedLP<T>& lp_;
  std::size_t m_, n_, total_;
  Matrix<T> tab_;
  std::vector<T> lo_, hi_, x_, d_;
  std::vector<bool> has_lo_, has_hi_;
  std::vector<int> sign_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

}  // namespace

template <class T>
BoundedLP<T> BoundedLP<T>::boxed(Matrix<T> a, std::vector<T> b, std::vector<T> c, const T& lo, const T& hi) {
  const std::size_t n = a.cols();
  BoundedLP<T> lp{std::move(a), std::move(b), std::move(c), std::vector<T>(n, lo), std::vector<T>(n, hi),
                  std::vector<bool>(n, true), std::vector<bool>(n, true)};
  return lp;
}

template <class T>
LPResult<T> maximize(const BoundedLP<T>& lp) {
  Simplex<T> s(lp);
  return s.run();
}

template struct BoundedLP<Rational>;
template struct BoundedLP<double>;
template LPResult<Rational> maximize(const BoundedLP<Rational>&);
template LPResult<double> maximize(const BoundedLP<double>&);

}  // namespace tcs
