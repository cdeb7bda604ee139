#include <algorithm>
#include <sstream>

#include "bt/error.hpp"
#include "bt/matrix.hpp"

namespace bt {

SMat::SMat(const CMat& m) : r_(m.rows()), c_(m.cols()), a_(static_cast<size_t>(m.rows() * m.cols())) {
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) (*this)(i, j) = Series(m(i, j));
}

SMat SMat::identity(int n) { return SMat(CMat::identity(n)); }

SMat SMat::zdiag(const std::vector<int>& k) {
  int n = static_cast<int>(k.size());
  SMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Series::z(k[static_cast<size_t>(i)]);
  return m;
}

SMat SMat::from_coeffs(const std::vector<CMat>& coeffs, int val, int prec) {
  if (coeffs.empty()) raise(Errc::InvalidArgument, "SMat::from_coeffs", "no coefficients");
  int r = coeffs[0].rows(), c = coeffs[0].cols();
  SMat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      std::vector<GQ> cs;
      cs.reserve(coeffs.size());
      for (const auto& k : coeffs) cs.push_back(k(i, j));
      m(i, j) = Series::from_coeffs(val, std::move(cs), prec);
    }
  return m;
}

SMat SMat::col(int j) const { return block(0, j, r_, 1); }

SMat SMat::block(int i0, int j0, int h, int w) const {
  SMat b(h, w);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
  return b;
}

void SMat::set_block(int i0, int j0, const SMat& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
}

SMat SMat::transpose() const {
  SMat t(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool SMat::is_exact() const {
  return std::all_of(a_.begin(), a_.end(), [](const Series& s) { return s.is_exact(); });
}

int SMat::prec() const {
  int p = kExact;
  for (const auto& s : a_) p = std::min(p, s.prec());
  return p;
}

int SMat::valuation() const {
  bool found = false;
  int v = 0;
  for (const auto& s : a_) {
    if (s.is_zero()) continue;
    v = found ? std::min(v, s.first()) : s.first();
    found = true;
  }
  if (!found) raise(Errc::ZeroAtPrecision, "SMat::valuation", "matrix has no nonzero coefficient");
  for (const auto& s : a_)
    if (s.is_zero_at_precision() && s.prec() <= v)
      raise(Errc::PrecisionExhausted, "SMat::valuation", "an entry is unknown below the candidate valuation");
  return v;
}

std::vector<std::vector<std::optional<int>>> SMat::valuation_grid() const {
  std::vector<std::vector<std::optional<int>>> g(static_cast<size_t>(r_), std::vector<std::optional<int>>(static_cast<size_t>(c_)));
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) {
      const Series& s = (*this)(i, j);
      if (!s.is_zero()) g[static_cast<size_t>(i)][static_cast<size_t>(j)] = s.first();
    }
  return g;
}

int SMat::lower_bound() const {
  int v = kExact;
  for (const auto& s : a_) v = std::min(v, s.lower_bound());
  return v;
}

int SMat::max_degree() const {
  int d = -kExact;
  for (const auto& s : a_) {
    if (!s.is_exact()) raise(Errc::PrecisionExhausted, "SMat::max_degree", "entry is not an exact polynomial");
    if (!s.is_zero()) d = std::max(d, s.top());
  }
  return d;
}

int SMat::min_exponent() const {
  int d = kExact;
  for (const auto& s : a_) {
    if (!s.is_exact()) raise(Errc::PrecisionExhausted, "SMat::min_exponent", "entry is not an exact polynomial");
    if (!s.is_zero()) d = std::min(d, s.first());
  }
  return d;
}

CMat SMat::coeff(int e) const {
  CMat m(r_, c_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) {
      const Series& s = (*this)(i, j);
      if (s.prec() <= e)
        raise(Errc::PrecisionExhausted, "SMat::coeff", "coefficient of z^" + std::to_string(e) + " unknown at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      m(i, j) = s.coeff(e);
    }
  return m;
}

CMat SMat::eval(const GQ& x) const {
  CMat m(r_, c_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) m(i, j) = (*this)(i, j).eval(x);
  return m;
}

SMat SMat::truncated(int prec) const {
  SMat m = *this;
  for (auto& s : m.a_) s = s.truncated(prec);
  return m;
}

SMat SMat::polynomial_part(int below) const {
  SMat m = *this;
  for (auto& s : m.a_) s = s.polynomial_part(below);
  return m;
}

SMat SMat::shifted(int k) const {
  SMat m = *this;
  for (auto& s : m.a_) s = s.shifted(k);
  return m;
}

SMat SMat::theta() const {
  SMat m = *this;
  for (auto& s : m.a_) s = s.theta();
  return m;
}

SMat SMat::derivative() const {
  SMat m = *this;
  for (auto& s : m.a_) s = s.derivative();
  return m;
}

SMat SMat::reflected() const {
  SMat m = *this;
  for (auto& s : m.a_) s = s.reflected();
  return m;
}

std::string SMat::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < r_; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < c_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
  }
  os << "]";
  return os.str();
}

SMat operator+(const SMat& a, const SMat& b) {
  SMat r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) += b(i, j);
  return r;
}

SMat operator-(const SMat& a, const SMat& b) {
  SMat r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) -= b(i, j);
  return r;
}

SMat operator-(const SMat& a) {
  SMat r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = -a(i, j);
  return r;
}

SMat operator*(const SMat& a, const SMat& b) {
  if (a.cols() != b.rows()) raise(Errc::InvalidArgument, "SMat::operator*", "shape mismatch");
  SMat r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Series acc;
      for (int k = 0; k < a.cols(); ++k) {
        if (a(i, k).is_exact_zero() || b(k, j).is_exact_zero()) continue;
        acc += a(i, k) * b(k, j);
      }
      r(i, j) = acc;
    }
  return r;
}

SMat operator*(const Series& s, const SMat& a) {
  SMat r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

SMat hcat(const SMat& a, const SMat& b) {
  SMat r(a.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(0, a.cols(), b);
  return r;
}

SMat scale_rows(const SMat& a, const std::vector<int>& k) {
  SMat r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).shifted(k[static_cast<size_t>(i)]);
  return r;
}

SMat scale_cols(const SMat& a, const std::vector<int>& k) {
  SMat r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).shifted(k[static_cast<size_t>(j)]);
  return r;
}

SMat conj_zk(const SMat& a, const std::vector<int>& k) {
  SMat r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).shifted(k[static_cast<size_t>(j)] - k[static_cast<size_t>(i)]);
  return r;
}

namespace {

Series det_rec(const SMat& a, std::vector<int>& rows, int col) {
  int n = a.rows();
  if (col == n) return Series(GQ(1));
  Series acc;
  int sign = 1;
  for (size_t idx = 0; idx < rows.size(); ++idx) {
    int r = rows[idx];
    if (!a(r, col).is_exact_zero()) {
      std::vector<int> rest;
      rest.reserve(rows.size() - 1);
      for (size_t q = 0; q < rows.size(); ++q)
        if (q != idx) rest.push_back(rows[q]);
      Series minor = det_rec(a, rest, col + 1);
      Series term = a(r, col) * minor;
      if (sign < 0) term = -term;
      acc += term;
    }
    sign = -sign;
  }
  return acc;
}

SMat minor_of(const SMat& a, int skip_r, int skip_c) {
  int n = a.rows();
  SMat m(n - 1, n - 1);
  for (int i = 0, mi = 0; i < n; ++i) {
    if (i == skip_r) continue;
    for (int j = 0, mj = 0; j < n; ++j) {
      if (j == skip_c) continue;
      m(mi, mj++) = a(i, j);
    }
    ++mi;
  }
  return m;
}

}  // namespace

Series det(const SMat& a) {
  if (a.rows() != a.cols()) raise(Errc::InvalidArgument, "det", "non-square");
  std::vector<int> rows(static_cast<size_t>(a.rows()));
  for (int i = 0; i < a.rows(); ++i) rows[static_cast<size_t>(i)] = i;
  return det_rec(a, rows, 0);
}

SMat adjugate(const SMat& a) {
  int n = a.rows();
  SMat adj(n, n);
  if (n == 1) {
    adj(0, 0) = Series(GQ(1));
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Series c = det(minor_of(a, j, i));
      adj(i, j) = ((i + j) % 2) ? -c : c;
    }
  return adj;
}

SMat inverse(const SMat& a) {
  bool constant = a.is_exact();
  if (constant)
    for (int i = 0; i < a.rows() && constant; ++i)
      for (int j = 0; j < a.cols() && constant; ++j) {
        const Series& s = a(i, j);
        if (!s.is_zero() && (s.first() != 0 || s.top() != 0)) constant = false;
      }
  if (constant) return SMat(inverse(a.coeff(0)));
  Series d = det(a);
  Series dinv = d.inv();
  return dinv * adjugate(a);
}

Tri equals(const SMat& a, const SMat& b) {
  Tri out = Tri::True;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      Tri t = a(i, j).equals(b(i, j));
      if (t == Tri::False) return Tri::False;
      if (t == Tri::Unknown) out = Tri::Unknown;
    }
  return out;
}

bool in_gl_h(const SMat& p) {
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) {
      const Series& s = p(i, j);
      if (!s.is_zero() && s.first() < 0) return false;
      if (s.is_zero() && s.prec() < 0)
        raise(Errc::PrecisionExhausted, "in_gl_h", "entry unknown at negative order");
    }
  return !det(p.coeff(0)).is_zero();
}

bool is_unimodular_poly(const SMat& p) {
  if (!p.is_exact()) return false;
  if (p.min_exponent() < 0) return false;
  Series d = det(p);
  return !d.is_zero() && d.first() == 0 && d.top() == 0;
}

bool is_unimodular_poly_inv(const SMat& p) {
  if (!p.is_exact()) return false;
  if (p.max_degree() > 0) return false;
  Series d = det(p);
  return !d.is_zero() && d.first() == 0 && d.top() == 0;
}

bool in_lattice_parabolic(const SMat& p, const std::vector<int>& kappa) {
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) {
      const Series& s = p(i, j);
      int need = kappa[static_cast<size_t>(i)] - kappa[static_cast<size_t>(j)];
      if (!s.is_zero()) {
        if (s.first() < need) return false;
      } else if (s.prec() < need) {
        raise(Errc::PrecisionExhausted, "in_lattice_parabolic", "entry unknown below required order");
      }
    }
  Series d = det(p);
  if (d.is_zero()) raise(Errc::PrecisionExhausted, "in_lattice_parabolic", "determinant indistinguishable from zero");
  return d.first() == 0;
}

bool in_constant_parabolic(const CMat& p, const std::vector<int>& kappa) {
  if (det(p).is_zero()) return false;
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j)
      if (!p(i, j).is_zero() && kappa[static_cast<size_t>(i)] > kappa[static_cast<size_t>(j)]) return false;
  return true;
}

bool is_strongly_parabolic(const SMat& h, const std::vector<int>& K) {
  int n = h.rows();
  for (int i = 0; i + 1 < n; ++i)
    if (K[static_cast<size_t>(i)] < K[static_cast<size_t>(i + 1)]) return false;
  if (!h.is_exact()) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Series& s = h(i, j);
      int ki = K[static_cast<size_t>(i)], kj = K[static_cast<size_t>(j)];
      if (ki == kj) {
        if (i == j) {
          if (!s.equals_exactly(Series::z(ki))) return false;
        } else if (!s.is_zero()) {
          return false;
        }
      } else if (ki < kj) {
        if (!s.is_zero()) return false;
      } else if (!s.is_zero()) {
        if (s.first() < kj || s.top() >= ki) return false;
      }
    }
  return true;
}

bool in_staged_parabolic(const SMat& p, const std::vector<int>& kappa) {
  if (!p.is_exact()) return false;
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) {
      const Series& s = p(i, j);
      if (s.is_zero()) continue;
      if (s.first() < 0) return false;
      if (s.top() > kappa[static_cast<size_t>(i)] - kappa[static_cast<size_t>(j)]) return false;
    }
  return !det(p.coeff(0)).is_zero();
}

}  // namespace bt
