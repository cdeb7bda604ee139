#pragma once

#include <climits>
#include <string>
#include <vector>

#include "bt/scalar.hpp"

namespace bt {

// Absolute precision of an exact (finite) Laurent polynomial.
inline constexpr int kExact = INT_MAX / 4;

int sat_add(int a, int b);

// Relative precision used when an exact operand has to be expanded into an
// infinite series (inverses of non-monomials, rational functions).
int working_precision();
void set_working_precision(int n);

class PrecisionScope {
 public:
  explicit PrecisionScope(int n);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int saved_;
};

enum class Tri { False, True, Unknown };

// sum_{i} c[i] z^{val+i}, known modulo z^prec.  Coefficients past the stored
// list and below prec are zero.  An empty list with prec == kExact is the
// exact zero; an empty list with finite prec is zero-at-precision.
class Series {
 public:
  Series() = default;
  Series(const GQ& c);  // NOLINT: exact constant
  Series(long c) : Series(GQ(c)) {}  // NOLINT

  static Series monomial(const GQ& c, int e);
  static Series z(int e = 1) { return monomial(GQ(1), e); }
  static Series from_coeffs(int val, std::vector<GQ> coeffs, int prec = kExact);
  static Series zero_at(int prec);

  bool is_exact() const { return prec_ >= kExact; }
  bool is_exact_zero() const { return c_.empty() && is_exact(); }
  // No nonzero coefficient known (exact zero or zero-at-precision).
  bool is_zero() const { return c_.empty(); }
  bool is_zero_at_precision() const { return c_.empty() && !is_exact(); }

  int valuation() const;  // throws ZeroAtPrecision when no coefficient is known
  // Largest k with series in z^k h known: valuation, or prec if unknown.
  int lower_bound() const { return c_.empty() ? prec_ : val_; }
  int prec() const { return prec_; }
  int first() const { return val_; }
  const std::vector<GQ>& coeffs() const { return c_; }
  // Highest exponent carrying a nonzero coefficient (throws on zero).
  int top() const;

  GQ coeff(int e) const;
  GQ leading() const;

  Series truncated(int prec) const;     // forget everything at or above prec
  Series polynomial_part(int below) const;  // exact, keeps exponents < below
  Series shifted(int k) const;          // times z^k
  Series theta() const;                 // z d/dz
  Series derivative() const;            // d/dz
  Series inv() const;
  Series scaled(const GQ& a) const;

  // Exact Laurent polynomial evaluation.
  GQ eval(const GQ& x) const;
  // f(z) -> f(1/z) for exact Laurent polynomials.
  Series reflected() const;

  Tri equals(const Series& o) const;
  bool equals_exactly(const Series& o) const;

  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  Series& operator*=(const Series& o);

  std::string str() const;

 private:
  void normalize();

  int val_ = 0;
  std::vector<GQ> c_;
  int prec_ = kExact;
};

Series operator+(const Series& a, const Series& b);
Series operator-(const Series& a, const Series& b);
Series operator-(const Series& a);
Series operator*(const Series& a, const Series& b);
Series operator*(const GQ& a, const Series& b);

// 1/(1 - a z) to working precision (exact 1 when a == 0).
Series geometric(const GQ& a, int prec);

}  // namespace bt
