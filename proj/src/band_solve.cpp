#include "hcg/band_solve.hpp"

#include <stdexcept>

extern "C" void dgbsv_(const int* n, const int* kl, const int* ku,
                       const int* nrhs, double* ab, const int* ldab, int* ipiv,
                       double* b, const int* ldb, int* info);

namespace hcg {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1) {
  ab_.assign(static_cast<std::size_t>(ldab_) * n_, 0.0);
  ipiv_.assign(n_, 0);
}

void BandedMatrix::add(int i, int j, double v) {
  // Entry (i, j) lives at AB(kl + ku + i - j, j) in 0-based band storage.
  ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)] += v;
}

void BandedMatrix::set(int i, int j, double v) {
  ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)] = v;
}

bool BandedMatrix::solve(std::vector<double>& rhs) {
  if (static_cast<int>(rhs.size()) != n_)
    throw std::invalid_argument("rhs size mismatch");
  int info = 0;
  const int nrhs = 1;
  dgbsv_(&n_, &kl_, &ku_, &nrhs, ab_.data(), &ldab_, ipiv_.data(), rhs.data(),
         &n_, &info);
  return info == 0;
}

}  // namespace hcg
