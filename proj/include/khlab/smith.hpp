#pragma once

#include <vector>

#include "khlab/sparse.hpp"

namespace khlab::exactalg {

// Nonzero invariant factors d1 | d2 | ... of an integer matrix.
struct SmithForm {
  std::vector<mpz_class> diagonal;
  int rank() const { return static_cast<int>(diagonal.size()); }
};

SmithForm smith_normal_form(const SparseMatrix<IntegerRing>& m);

// Dense variant that also returns unimodular U (n_rows x n_rows) and
// V (n_cols x n_cols) with U*m*V in Smith form; used by the verification tests.
struct SmithDecomposition {
  SmithForm form;
  std::vector<std::vector<mpz_class>> U, V;
};

SmithDecomposition smith_decomposition(const SparseMatrix<IntegerRing>& m);

// d > 1 split into prime-power factors, ascending by prime (trial division).
std::vector<mpz_class> prime_power_factors(const mpz_class& d);

}  // namespace khlab::exactalg
