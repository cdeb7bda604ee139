#include <sstream>

#include "bt/error.hpp"
#include "bt/matrix.hpp"

namespace bt {

CMat::CMat(int rows, int cols, std::vector<GQ> data) : r_(rows), c_(cols), a_(std::move(data)) {
  if (static_cast<int>(a_.size()) != rows * cols) raise(Errc::InvalidArgument, "CMat", "data size mismatch");
}

CMat CMat::identity(int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = GQ(1);
  return m;
}

CMat CMat::diag(const std::vector<GQ>& d) {
  int n = static_cast<int>(d.size());
  CMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[static_cast<size_t>(i)];
  return m;
}

CMat CMat::permutation(const std::vector<int>& images) {
  int n = static_cast<int>(images.size());
  CMat m(n, n);
  for (int j = 0; j < n; ++j) m(images[static_cast<size_t>(j)], j) = GQ(1);
  return m;
}

CMat CMat::from_ints(const std::vector<std::vector<long>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows[0].size()) : 0;
  CMat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = GQ(rows[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  return m;
}

CMat CMat::col(int j) const { return cols_range(j, j + 1); }

CMat CMat::cols_range(int j0, int j1) const { return block(0, j0, r_, j1 - j0); }

CMat CMat::block(int i0, int j0, int h, int w) const {
  CMat b(h, w);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
  return b;
}

void CMat::set_block(int i0, int j0, const CMat& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
}

CMat CMat::transpose() const {
  CMat t(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool CMat::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

bool CMat::is_identity() const {
  if (r_ != c_) return false;
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j)
      if ((*this)(i, j) != GQ(i == j ? 1 : 0)) return false;
  return true;
}

bool CMat::is_diagonal() const {
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j)
      if (i != j && !(*this)(i, j).is_zero()) return false;
  return true;
}

std::string CMat::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < r_; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < c_; ++j) os << (j ? ", " : "") << (*this)(i, j);
  }
  os << "]";
  return os.str();
}

CMat operator+(const CMat& a, const CMat& b) {
  CMat r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) += b(i, j);
  return r;
}

CMat operator-(const CMat& a, const CMat& b) {
  CMat r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) -= b(i, j);
  return r;
}

CMat operator-(const CMat& a) { return GQ(-1) * a; }

CMat operator*(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows()) raise(Errc::InvalidArgument, "CMat::operator*", "shape mismatch");
  CMat r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (int j = 0; j < b.cols(); ++j)
        if (!b(k, j).is_zero()) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

CMat operator*(const GQ& s, const CMat& a) {
  CMat r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) *= s;
  return r;
}

CMat hcat(const CMat& a, const CMat& b) {
  int rows = a.cols() ? a.rows() : b.rows();
  CMat r(rows, a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(0, a.cols(), b);
  return r;
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref(CMat& m) {
  std::vector<int> piv;
  int row = 0;
  for (int c = 0; c < m.cols() && row < m.rows(); ++c) {
    int p = -1;
    for (int i = row; i < m.rows(); ++i)
      if (!m(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    GQ inv = m(row, c).inv();
    for (int j = c; j < m.cols(); ++j) m(row, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, c).is_zero()) continue;
      GQ f = m(i, c);
      for (int j = c; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
    }
    piv.push_back(c);
    ++row;
  }
  return piv;
}

}  // namespace

int rank(const CMat& a) {
  CMat m = a;
  return static_cast<int>(rref(m).size());
}

GQ det(const CMat& a) {
  if (a.rows() != a.cols()) raise(Errc::InvalidArgument, "det", "non-square");
  CMat m = a;
  int n = m.rows();
  GQ d(1);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (!m(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) return GQ();
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    GQ inv = m(c, c).inv();
    for (int i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      GQ f = m(i, c) * inv;
      for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

CMat inverse(const CMat& a) {
  int n = a.rows();
  if (n != a.cols()) raise(Errc::InvalidArgument, "inverse", "non-square");
  CMat aug = hcat(a, CMat::identity(n));
  auto piv = rref(aug);
  if (static_cast<int>(piv.size()) < n || piv[static_cast<size_t>(n - 1)] != n - 1)
    raise(Errc::NonUnit, "inverse", "singular constant matrix");
  return aug.block(0, n, n, n);
}

CMat nullspace(const CMat& a) {
  CMat m = a;
  auto piv = rref(m);
  std::vector<bool> is_piv(static_cast<size_t>(a.cols()), false);
  for (int p : piv) is_piv[static_cast<size_t>(p)] = true;
  std::vector<int> free;
  for (int j = 0; j < a.cols(); ++j)
    if (!is_piv[static_cast<size_t>(j)]) free.push_back(j);
  CMat ns(a.cols(), static_cast<int>(free.size()));
  for (size_t f = 0; f < free.size(); ++f) {
    int fc = free[f];
    ns(fc, static_cast<int>(f)) = GQ(1);
    for (size_t r = 0; r < piv.size(); ++r) ns(piv[r], static_cast<int>(f)) = -m(static_cast<int>(r), fc);
  }
  return ns;
}

CMat column_basis(const CMat& a) {
  CMat t = a.transpose();
  auto piv = rref(t);
  int k = static_cast<int>(piv.size());
  return t.block(0, 0, k, t.cols()).transpose();
}

std::optional<CMat> solve(const CMat& a, const CMat& b) {
  CMat aug = hcat(a, b);
  auto piv = rref(aug);
  CMat x(a.cols(), b.cols());
  for (size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] >= a.cols()) return std::nullopt;
    for (int j = 0; j < b.cols(); ++j) x(piv[r], j) = aug(static_cast<int>(r), a.cols() + j);
  }
  return x;
}

CMat complete_basis(const CMat& a) {
  int n = a.rows();
  CMat cur = column_basis(a);
  int r = cur.cols();
  CMat added(n, 0);
  for (int i = 0; i < n && r < n; ++i) {
    CMat e(n, 1);
    e(i, 0) = GQ(1);
    CMat trial = hcat(cur, e);
    if (rank(trial) > r) {
      cur = trial;
      added = hcat(added, e);
      ++r;
    }
  }
  return added;
}

CMat intersect(const CMat& a, const CMat& b) {
  int n = a.rows();
  if (a.cols() == 0 || b.cols() == 0) return CMat(n, 0);
  CMat m = hcat(a, -b);
  CMat ns = nullspace(m);
  CMat x = ns.block(0, 0, a.cols(), ns.cols());
  CMat v = a * x;
  if (v.cols() == 0) return CMat(n, 0);
  return column_basis(v);
}

bool contains(const CMat& space, const CMat& vecs) {
  if (vecs.cols() == 0) return true;
  return rank(hcat(space, vecs)) == rank(space);
}

bool is_invariant(const CMat& f, const CMat& space) { return contains(space, f * space); }

std::vector<GQ> charpoly(const CMat& a) {
  int n = a.rows();
  std::vector<GQ> c(static_cast<size_t>(n + 1));
  c[static_cast<size_t>(n)] = GQ(1);
  CMat m(n, n);
  for (int k = 1; k <= n; ++k) {
    m = a * m;
    for (int i = 0; i < n; ++i) m(i, i) += c[static_cast<size_t>(n - k + 1)];
    CMat am = a * m;
    GQ tr;
    for (int i = 0; i < n; ++i) tr += am(i, i);
    c[static_cast<size_t>(n - k)] = -tr / GQ(k);
  }
  return c;
}

CMat mat_pow(const CMat& a, int k) {
  CMat r = CMat::identity(a.rows());
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

}  // namespace bt
