#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bt/scalar.hpp"
#include "bt/series.hpp"

namespace bt {

// Dense matrix over Q(i).
class CMat {
 public:
  CMat() = default;
  CMat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows * cols)) {}
  CMat(int rows, int cols, std::vector<GQ> data);
  static CMat identity(int n);
  static CMat diag(const std::vector<GQ>& d);
  static CMat permutation(const std::vector<int>& images);  // column j -> e_{images[j]}
  static CMat from_ints(const std::vector<std::vector<long>>& rows);

  int rows() const { return r_; }
  int cols() const { return c_; }
  GQ& operator()(int i, int j) { return a_[static_cast<size_t>(i * c_ + j)]; }
  const GQ& operator()(int i, int j) const { return a_[static_cast<size_t>(i * c_ + j)]; }

  CMat col(int j) const;
  CMat cols_range(int j0, int j1) const;
  CMat block(int i0, int j0, int h, int w) const;
  void set_block(int i0, int j0, const CMat& b);
  CMat transpose() const;
  bool is_zero() const;
  bool is_identity() const;
  bool is_diagonal() const;

  std::string str() const;

  friend bool operator==(const CMat& a, const CMat& b) { return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_; }
  friend bool operator!=(const CMat& a, const CMat& b) { return !(a == b); }

 private:
  int r_ = 0, c_ = 0;
  std::vector<GQ> a_;
};

CMat operator+(const CMat& a, const CMat& b);
CMat operator-(const CMat& a, const CMat& b);
CMat operator-(const CMat& a);
CMat operator*(const CMat& a, const CMat& b);
CMat operator*(const GQ& s, const CMat& a);
CMat hcat(const CMat& a, const CMat& b);

// Exact linear algebra.
int rank(const CMat& a);
GQ det(const CMat& a);
CMat inverse(const CMat& a);  // throws NonUnit when singular
CMat nullspace(const CMat& a);  // columns span the kernel
CMat column_basis(const CMat& a);  // independent columns spanning the column space, reduced
std::optional<CMat> solve(const CMat& a, const CMat& b);  // some X with AX = B
// Extends the independent columns of `a` by standard basis vectors to a basis
// of the ambient space; returns only the added columns.
CMat complete_basis(const CMat& a);
// Basis of the intersection of two column spaces.
CMat intersect(const CMat& a, const CMat& b);
bool contains(const CMat& space, const CMat& vecs);  // col(vecs) within col(space)
bool is_invariant(const CMat& f, const CMat& space);
std::vector<GQ> charpoly(const CMat& a);  // monic, coefficients low to high
CMat mat_pow(const CMat& a, int k);

// Matrix of Laurent series.
class SMat {
 public:
  SMat() = default;
  SMat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows * cols)) {}
  SMat(const CMat& m);  // NOLINT: exact constants
  static SMat identity(int n);
  static SMat zdiag(const std::vector<int>& k);  // diag(z^{k_i})
  static SMat from_coeffs(const std::vector<CMat>& coeffs, int val = 0, int prec = kExact);

  int rows() const { return r_; }
  int cols() const { return c_; }
  Series& operator()(int i, int j) { return a_[static_cast<size_t>(i * c_ + j)]; }
  const Series& operator()(int i, int j) const { return a_[static_cast<size_t>(i * c_ + j)]; }

  SMat col(int j) const;
  SMat block(int i0, int j0, int h, int w) const;
  void set_block(int i0, int j0, const SMat& b);
  SMat transpose() const;

  bool is_exact() const;
  int prec() const;  // weakest entry precision
  // Minimum entry valuation; throws ZeroAtPrecision if no entry has a known
  // nonzero coefficient.
  int valuation() const;
  std::vector<std::vector<std::optional<int>>> valuation_grid() const;
  // Smallest k such that every entry lies in z^k h (uses lower bounds).
  int lower_bound() const;
  int max_degree() const;  // exact only: highest exponent present
  int min_exponent() const;  // exact only: lowest exponent present

  CMat coeff(int e) const;  // coefficient matrix of z^e
  CMat constant_term() const { return coeff(0); }
  CMat eval(const GQ& x) const;  // exact only

  SMat truncated(int prec) const;
  SMat polynomial_part(int below) const;
  SMat shifted(int k) const;
  SMat theta() const;
  SMat derivative() const;
  SMat reflected() const;

  std::string str() const;

 private:
  int r_ = 0, c_ = 0;
  std::vector<Series> a_;
};

SMat operator+(const SMat& a, const SMat& b);
SMat operator-(const SMat& a, const SMat& b);
SMat operator-(const SMat& a);
SMat operator*(const SMat& a, const SMat& b);
SMat operator*(const Series& s, const SMat& a);
SMat hcat(const SMat& a, const SMat& b);
SMat scale_rows(const SMat& a, const std::vector<int>& k);  // z^k a
SMat scale_cols(const SMat& a, const std::vector<int>& k);  // a z^k
SMat conj_zk(const SMat& a, const std::vector<int>& k);      // z^{-k} a z^{k}

Series det(const SMat& a);
SMat adjugate(const SMat& a);
SMat inverse(const SMat& a);  // NonUnit / PrecisionExhausted on failure
Tri equals(const SMat& a, const SMat& b);

// Group membership predicates.
bool in_gl_h(const SMat& p);                 // GL_n(C[[z]])
bool is_unimodular_poly(const SMat& p);      // GL_n(C[z]), det nonzero constant
bool is_unimodular_poly_inv(const SMat& p);  // GL_n(C[z^{-1}])
bool in_lattice_parabolic(const SMat& p, const std::vector<int>& kappa);  // v(P_ij) >= k_i - k_j, unit det
bool in_constant_parabolic(const CMat& p, const std::vector<int>& kappa);  // P_ij != 0 => k_i <= k_j
// Strongly K-parabolic for K nonincreasing.
bool is_strongly_parabolic(const SMat& h, const std::vector<int>& K);
// deg P_ij <= k_i - k_j for polynomial P with unit constant determinant.
bool in_staged_parabolic(const SMat& p, const std::vector<int>& kappa);

}  // namespace bt
