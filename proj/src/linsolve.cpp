#include "homconf/linsolve.hpp"

#include <stdexcept>

namespace homconf {

void RationalMatrix::append_row(std::vector<Rational> row) {
  if (cols_ == 0 && rows_ == 0) cols_ = row.size();
  if (row.size() != cols_) throw std::logic_error("append_row width mismatch");
  a_.push_back(std::move(row));
  ++rows_;
}

std::vector<std::size_t> rref(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && m.at(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(r, j));
    Rational inv = Rational(1) / m.at(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m.at(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m.at(i, c) == 0) continue;
      Rational f = m.at(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(const RationalMatrix& m) {
  RationalMatrix copy = m;
  return rref(copy).size();
}

std::vector<std::vector<Rational>> nullspace(const RationalMatrix& m) {
  RationalMatrix red = m;
  std::vector<std::size_t> pivots = rref(red);
  std::vector<bool> is_pivot(red.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;

  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < red.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(red.cols(), Rational(0));
    v[f] = 1;
    for (std::size_t p = 0; p < pivots.size(); ++p) v[pivots[p]] = -red.at(p, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool in_span(const std::vector<std::vector<Rational>>& basis, const std::vector<Rational>& v) {
  if (basis.empty()) {
    for (const Rational& x : v)
      if (x != 0) return false;
    return true;
  }
  std::size_t n = basis[0].size();
  if (v.size() != n) throw std::logic_error("in_span dimension mismatch");
  RationalMatrix with(n, basis.size() + 1);
  RationalMatrix without(n, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (basis[j].size() != n) throw std::logic_error("in_span ragged basis");
    for (std::size_t i = 0; i < n; ++i) {
      with.at(i, j) = basis[j][i];
      without.at(i, j) = basis[j][i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) with.at(i, basis.size()) = v[i];
  return rank(with) == rank(without);
}

bool solve(const RationalMatrix& m, const std::vector<Rational>& b, std::vector<Rational>& x) {
  if (b.size() != m.rows()) throw std::logic_error("solve rhs size mismatch");
  RationalMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = b[i];
  }
  std::vector<std::size_t> pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return false; // 0 = 1 row
  x.assign(m.cols(), Rational(0));
  for (std::size_t p = 0; p < pivots.size(); ++p) x[pivots[p]] = aug.at(p, m.cols());
  return true;
}

} // namespace homconf
