#pragma once

#include <utility>
#include <vector>

#include "bt/matrix.hpp"

namespace bt {

// Full-rank h-submodule of K^n given by basis columns.
struct Lattice {
  SMat basis;

  Lattice() = default;
  explicit Lattice(SMat b);
  static Lattice standard(int n);
  static Lattice diagonal(const std::vector<int>& k);  // span(z^{k_i} e_i)

  int n() const { return basis.rows(); }
  Lattice scaled(int k) const;  // z^k L
};

// Equal iff basis change lies in GL_n(h).
bool operator==(const Lattice& a, const Lattice& b);
inline bool operator!=(const Lattice& a, const Lattice& b) { return !(a == b); }
bool contains(const Lattice& big, const Lattice& small);

// Result of reducing a matrix X (n x m, rank n) over h:
// X = Einv * [z^kappa | 0] * F with Einv in GL_n(h), F in GL_m(h).
struct Reduction {
  std::vector<int> kappa;  // nondecreasing
  SMat einv;
};
Reduction smith_reduce(const SMat& x);

struct SmithData {
  std::vector<int> kappa;  // nondecreasing
  SMat smith_basis;        // basis of lam; scaled by z^kappa it spans M
  SMat coords;             // smith_basis in lam-basis coordinates (in GL_n(h))
  std::vector<std::pair<int, int>> multiplicities;  // (value, count)

  int v() const { return kappa.front(); }
  int d() const { return kappa.back() - kappa.front(); }
  int index() const;
};

SmithData smith_decomposition(const Lattice& lam, const Lattice& m);

// Basis-independent check that smith_basis * z^kappa spans M.
bool reconstructs(const SmithData& sd, const Lattice& m);

// h-span of arbitrary generating columns (rank n).
Lattice span(const SMat& gens);
Lattice sum(const Lattice& a, const Lattice& b);
Lattice intersection(const Lattice& a, const Lattice& b);

struct DistanceIndex {
  int d = 0;
  int index = 0;
  int v = 0;          // v_lam(M)
  int v_reverse = 0;  // v_M(lam)
};
DistanceIndex distance_index(const Lattice& lam, const Lattice& m);

// lam/lam' as a vector space with basis z^j e_i (j < k_i) for a Smith basis e
// of lam relative to lam'.
struct QuotientImage {
  std::vector<int> kappa;  // elementary divisors of lam' in lam
  SMat smith_basis;
  int dim = 0;
  CMat z_action;  // dim x dim nilpotent
  CMat subspace;  // dim x r, columns span the image
  int offset(int i) const;
};
QuotientImage quotient_psi(const Lattice& lam, const Lattice& lamp, const Lattice& nn);
// Coordinates of lam-vectors (columns, as series in lam' Smith coordinates) in lam/lam'.
CMat quotient_coords(const QuotientImage& q, const SMat& smith_coords);

// Flag in an n-dimensional space plus a nondecreasing sequence whose
// multiplicities match the flag's jumps.
struct AdmissiblePair {
  std::vector<CMat> flag;  // nested, last component is the whole space
  std::vector<int> kappa;  // length n, nondecreasing

  std::vector<int> signature() const;
  std::vector<int> distinct() const;
  int spread() const { return kappa.empty() ? 0 : kappa.back() - kappa.front(); }
  int index() const;  // sum(max - k_i)
  bool admissible() const;
};

// Flag of M relative to lam in lam/m lam, in lam-basis coordinates.
AdmissiblePair relative_flag(const Lattice& lam, const Lattice& m);

// Basis adapted to a nested flag: the first dim(F_1) columns span F_1, etc.
CMat flag_basis(const std::vector<CMat>& flag);

bool same_flag(const std::vector<CMat>& a, const std::vector<CMat>& b);

}  // namespace bt
