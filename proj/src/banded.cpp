#include "vvl/banded.hpp"

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include <algorithm>

#include <cstdlib>
#include <string>

#include "vvl/errors.hpp"

namespace vvl {

BandedLU::BandedLU(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
      ab_(static_cast<std::size_t>(ldab_) * n, cplx(0, 0)), ipiv_(n, 0) {}

// Column-major band storage: A(i,j) at ab[kl + ku + i - j + j*ldab].
void BandedLU::add(int row, int col, cplx value) {
  if (std::abs(row - col) > (row > col ? kl_ : ku_))
    throw NumericalError("banded matrix: entry outside band");
  ab_[static_cast<std::size_t>(kl_ + ku_ + row - col) + static_cast<std::size_t>(col) * ldab_] += value;
}

cplx BandedLU::get(int row, int col) const {
  if (row - col > kl_ || col - row > ku_) return {0, 0};
  return ab_[static_cast<std::size_t>(kl_ + ku_ + row - col) + static_cast<std::size_t>(col) * ldab_];
}

void BandedLU::multiply(const cplx* x, cplx* y) const {
  for (int i = 0; i < n_; ++i) {
    cplx s(0, 0);
    const int lo = std::max(0, i - kl_), hi = std::min(n_ - 1, i + ku_);
    for (int j = lo; j <= hi; ++j) s += get(i, j) * x[j];
    y[i] = s;
  }
}

void BandedLU::factor() {
  const lapack_int info = LAPACKE_zgbtrf(
      LAPACK_COL_MAJOR, n_, n_, kl_, ku_,
      reinterpret_cast<lapack_complex_double*>(ab_.data()), ldab_, ipiv_.data());
  if (info != 0)
    throw NumericalError("banded LU failed (zgbtrf info=" + std::to_string(info) + ")");
  factored_ = true;
}

void BandedLU::solve(cplx* rhs) const {
  if (!factored_) throw NumericalError("banded solve before factorization");
  const lapack_int info = LAPACKE_zgbtrs(
      LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1,
      reinterpret_cast<const lapack_complex_double*>(ab_.data()), ldab_, ipiv_.data(),
      reinterpret_cast<lapack_complex_double*>(rhs), n_);
  if (info != 0)
    throw NumericalError("banded solve failed (zgbtrs info=" + std::to_string(info) + ")");
}

}  // namespace vvl
