#pragma once

#include <vector>

#include "bt/matrix.hpp"

namespace bt {

struct JordanChain {
  GQ eigenvalue;
  // vectors[0] is an eigenvector, (A - mu) vectors[k] = vectors[k-1].
  std::vector<CMat> vectors;
};

struct EigenData {
  std::vector<GQ> eigenvalues;  // distinct, canonical order
  std::vector<int> multiplicities;
  std::vector<CMat> eigenspaces;  // columns span ker(A - mu)
  std::vector<JordanChain> chains;
  CMat jordan_basis;  // columns: chains concatenated in order
  CMat semisimple;
  CMat nilpotent;

  bool diagonalizable() const { return nilpotent.is_zero(); }
  int index_of(const GQ& mu) const;
};

// Distinct roots of a polynomial (coefficients low to high) with
// multiplicities; throws CharPolyDoesNotSplit if some root is not in Q(i).
std::vector<std::pair<GQ, int>> roots(const std::vector<GQ>& poly);

EigenData eigen_data(const CMat& a);

}  // namespace bt
