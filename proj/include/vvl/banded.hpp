#pragma once

#include <vector>

#include "vvl/grid.hpp"

namespace vvl {

// Complex banded matrix with LU factorization (LAPACK zgbtrf/zgbtrs).
class BandedLU {
 public:
  BandedLU() = default;
  BandedLU(int n, int kl, int ku);

  int size() const { return n_; }
  void add(int row, int col, cplx value);
  cplx get(int row, int col) const;
  // y = A x; only valid before factor().
  void multiply(const cplx* x, cplx* y) const;
  void factor();
  void solve(cplx* rhs) const;
  bool factored() const { return factored_; }

 private:
  int n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
  std::vector<cplx> ab_;
  std::vector<int> ipiv_;
  bool factored_ = false;
};

}  // namespace vvl
