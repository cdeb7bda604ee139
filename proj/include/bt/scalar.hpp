#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>

namespace bt {

// Exact element of Q(i).
class GQ {
 public:
  mpq_class re;
  mpq_class im;

  GQ() : re(0), im(0) {}
  GQ(long v) : re(v), im(0) {}  // NOLINT: implicit from integers is convenient
  GQ(mpq_class r) : re(std::move(r)), im(0) {}  // NOLINT
  GQ(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

  static GQ frac(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return GQ(q);
  }
  static GQ gauss(long a, long b) { return GQ(mpq_class(a), mpq_class(b)); }
  static GQ i() { return GQ(mpq_class(0), mpq_class(1)); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_one() const { return re == 1 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  bool is_integer() const { return is_real() && re.get_den() == 1; }

  GQ conj() const { return GQ(re, -im); }
  mpq_class norm() const { return re * re + im * im; }
  GQ inv() const;

  GQ& operator+=(const GQ& o);
  GQ& operator-=(const GQ& o);
  GQ& operator*=(const GQ& o);
  GQ& operator/=(const GQ& o);

  std::string str() const;
};

GQ operator+(const GQ& a, const GQ& b);
GQ operator-(const GQ& a, const GQ& b);
GQ operator*(const GQ& a, const GQ& b);
GQ operator/(const GQ& a, const GQ& b);
GQ operator-(const GQ& a);
bool operator==(const GQ& a, const GQ& b);
inline bool operator!=(const GQ& a, const GQ& b) { return !(a == b); }

// Total order used only for canonical sorting (lexicographic on re, im).
bool canonical_less(const GQ& a, const GQ& b);

GQ pow(const GQ& a, int k);

std::ostream& operator<<(std::ostream& os, const GQ& x);

}  // namespace bt
