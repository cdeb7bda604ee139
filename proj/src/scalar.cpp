#include "bt/scalar.hpp"

#include <ostream>

#include "bt/error.hpp"

namespace bt {

GQ GQ::inv() const {
  if (is_zero()) raise(Errc::NonUnit, "GQ::inv", "division by zero");
  mpq_class n = norm();
  return GQ(re / n, -im / n);
}

GQ& GQ::operator+=(const GQ& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GQ& GQ::operator-=(const GQ& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GQ& GQ::operator*=(const GQ& o) {
  if (o.is_real()) {
    re *= o.re;
    im *= o.re;
    return *this;
  }
  mpq_class r = re * o.re - im * o.im;
  mpq_class i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

GQ& GQ::operator/=(const GQ& o) {
  if (o.is_real()) {
    if (sgn(o.re) == 0) raise(Errc::NonUnit, "GQ::operator/", "division by zero");
    re /= o.re;
    im /= o.re;
    return *this;
  }
  return *this *= o.inv();
}

GQ operator+(const GQ& a, const GQ& b) {
  GQ r = a;
  r += b;
  return r;
}
GQ operator-(const GQ& a, const GQ& b) {
  GQ r = a;
  r -= b;
  return r;
}
GQ operator*(const GQ& a, const GQ& b) {
  GQ r = a;
  r *= b;
  return r;
}
GQ operator/(const GQ& a, const GQ& b) {
  GQ r = a;
  r /= b;
  return r;
}
GQ operator-(const GQ& a) { return GQ(-a.re, -a.im); }

bool operator==(const GQ& a, const GQ& b) { return a.re == b.re && a.im == b.im; }

bool canonical_less(const GQ& a, const GQ& b) {
  if (a.re != b.re) return a.re < b.re;
  return a.im < b.im;
}

GQ pow(const GQ& a, int k) {
  if (k < 0) return pow(a.inv(), -k);
  GQ r(1), b = a;
  while (k) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

std::string GQ::str() const {
  if (is_real()) return re.get_str();
  std::string s;
  if (sgn(re) != 0) s = re.get_str() + (sgn(im) > 0 ? "+" : "");
  if (im == 1)
    s += "i";
  else if (im == -1)
    s += "-i";
  else
    s += im.get_str() + "*i";
  return s;
}

std::ostream& operator<<(std::ostream& os, const GQ& x) { return os << x.str(); }

}  // namespace bt
