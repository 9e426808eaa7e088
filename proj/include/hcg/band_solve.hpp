#pragma once

#include <vector>

// Thin wrapper over the LAPACK banded LU driver; the Newton systems of both
// solvers are banded once unknowns are numbered row-major.

namespace hcg {

class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku);

  void add(int i, int j, double v);
  void set(int i, int j, double v);

  int size() const { return n_; }

  // Solves in place with partial pivoting; the factorization destroys the
  // stored matrix.  Returns false when the factor is singular.
  bool solve(std::vector<double>& rhs);

 private:
  int n_, kl_, ku_, ldab_;
  std::vector<double> ab_;  // LAPACK band storage, column-major
  std::vector<int> ipiv_;
};

}  // namespace hcg
