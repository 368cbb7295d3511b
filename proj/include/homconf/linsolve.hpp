#pragma once

#include <cstddef>
#include <vector>

#include "homconf/rational.hpp"

namespace homconf {

// Dense matrix over Q. Small systems only (the coefficient-matching systems
// this engine builds are at most a few hundred rows/cols), so plain
// fraction-ful Gauss-Jordan is fine.
class RationalMatrix {
public:
  RationalMatrix() : rows_(0), cols_(0) {}
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows, std::vector<Rational>(cols, Rational(0))) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& at(std::size_t i, std::size_t j) { return a_[i][j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return a_[i][j]; }

  void append_row(std::vector<Rational> row);

private:
  std::size_t rows_, cols_;
  std::vector<std::vector<Rational>> a_;
};

// In-place reduced row echelon form. Pivoting is deterministic: scan rows top
// to bottom, take the first nonzero entry in the leftmost unresolved column.
// Returns the pivot columns in order.
std::vector<std::size_t> rref(RationalMatrix& m);

std::size_t rank(const RationalMatrix& m);

// Basis of the right nullspace {x : m x = 0}, one vector per free column,
// canonical parametrization: free column f gets coefficient 1, pivot columns
// get the negated reduced entries. Order follows ascending free column.
std::vector<std::vector<Rational>> nullspace(const RationalMatrix& m);

// Is v in the column span of the vectors in `basis` (each of size n)?
bool in_span(const std::vector<std::vector<Rational>>& basis, const std::vector<Rational>& v);

// Solve m x = b; empty optional-style result via bool. If solvable, x is the
// particular solution with all free variables set to 0.
bool solve(const RationalMatrix& m, const std::vector<Rational>& b, std::vector<Rational>& x);

} // namespace homconf
