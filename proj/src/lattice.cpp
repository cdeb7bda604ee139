#include "bt/lattice.hpp"

#include <algorithm>

#include "bt/error.hpp"

namespace bt {

Lattice::Lattice(SMat b) : basis(std::move(b)) {
  if (basis.rows() != basis.cols()) raise(Errc::InvalidArgument, "Lattice", "basis must be square");
}

Lattice Lattice::standard(int n) { return Lattice(SMat::identity(n)); }

Lattice Lattice::diagonal(const std::vector<int>& k) { return Lattice(SMat::zdiag(k)); }

Lattice Lattice::scaled(int k) const { return Lattice(basis.shifted(k)); }

bool operator==(const Lattice& a, const Lattice& b) {
  if (a.n() != b.n()) return false;
  return in_gl_h(inverse(a.basis) * b.basis);
}

bool contains(const Lattice& big, const Lattice& small) {
  SMat x = inverse(big.basis) * small.basis;
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) {
      const Series& s = x(i, j);
      if (!s.is_zero()) {
        if (s.first() < 0) return false;
      } else if (s.prec() < 0) {
        raise(Errc::PrecisionExhausted, "contains", "entry unknown at negative order");
      }
    }
  return true;
}

Reduction smith_reduce(const SMat& x0) {
  SMat x = x0;
  int n = x.rows(), m = x.cols();
  if (m < n) raise(Errc::InvalidArgument, "smith_reduce", "fewer generators than rows");
  Reduction r;
  r.einv = SMat::identity(n);
  for (int t = 0; t < n; ++t) {
    int vmin = kExact, unknown = kExact, p = -1, q = -1;
    for (int i = t; i < n; ++i)
      for (int j = t; j < m; ++j) {
        const Series& s = x(i, j);
        if (s.is_zero()) {
          if (!s.is_exact()) unknown = std::min(unknown, s.prec());
          continue;
        }
        if (s.first() < vmin) {
          vmin = s.first();
          p = i;
          q = j;
        }
      }
    if (p < 0) {
      if (unknown < kExact) raise(Errc::PrecisionExhausted, "smith_reduce", "no pivot visible at precision " + std::to_string(unknown));
      raise(Errc::InvalidArgument, "smith_reduce", "matrix is not of full rank");
    }
    if (unknown < vmin)
      raise(Errc::PrecisionExhausted, "smith_reduce",
            "entry known only to order " + std::to_string(unknown) + " below pivot valuation " + std::to_string(vmin));
    if (p != t) {
      for (int j = 0; j < m; ++j) std::swap(x(p, j), x(t, j));
      for (int i = 0; i < n; ++i) std::swap(r.einv(i, p), r.einv(i, t));
    }
    if (q != t)
      for (int i = 0; i < n; ++i) std::swap(x(i, q), x(i, t));
    Series piv_inv = x(t, t).inv();
    for (int i = t + 1; i < n; ++i) {
      if (x(i, t).is_exact_zero()) continue;
      Series c = x(i, t) * piv_inv;
      for (int j = t + 1; j < m; ++j)
        if (!x(t, j).is_exact_zero()) x(i, j) -= c * x(t, j);
      x(i, t) = Series();
      for (int k = 0; k < n; ++k)
        if (!r.einv(k, i).is_exact_zero()) r.einv(k, t) += c * r.einv(k, i);
    }
    for (int j = t + 1; j < m; ++j) x(t, j) = Series();
    r.kappa.push_back(vmin);
  }
  return r;
}

int SmithData::index() const {
  int s = 0;
  for (int k : kappa) s += k - kappa.front();
  return s;
}

SmithData smith_decomposition(const Lattice& lam, const Lattice& m) {
  if (lam.n() != m.n()) raise(Errc::InvalidArgument, "smith_decomposition", "dimension mismatch");
  Reduction r = smith_reduce(inverse(lam.basis) * m.basis);
  SmithData sd;
  sd.kappa = r.kappa;
  sd.coords = r.einv;
  sd.smith_basis = lam.basis * r.einv;
  for (int k : sd.kappa) {
    if (sd.multiplicities.empty() || sd.multiplicities.back().first != k)
      sd.multiplicities.emplace_back(k, 1);
    else
      ++sd.multiplicities.back().second;
  }
  return sd;
}

bool reconstructs(const SmithData& sd, const Lattice& m) {
  return Lattice(scale_cols(sd.smith_basis, sd.kappa)) == m;
}

Lattice span(const SMat& gens) {
  Reduction r = smith_reduce(gens);
  return Lattice(scale_cols(r.einv, r.kappa));
}

Lattice sum(const Lattice& a, const Lattice& b) { return span(hcat(a.basis, b.basis)); }

Lattice intersection(const Lattice& a, const Lattice& b) {
  SmithData sd = smith_decomposition(a, b);
  std::vector<int> k = sd.kappa;
  for (int& x : k) x = std::max(x, 0);
  return Lattice(scale_cols(sd.smith_basis, k));
}

DistanceIndex distance_index(const Lattice& lam, const Lattice& m) {
  SmithData sd = smith_decomposition(lam, m);
  SmithData rev = smith_decomposition(m, lam);
  DistanceIndex di;
  di.d = sd.d();
  di.index = sd.index();
  di.v = sd.v();
  di.v_reverse = rev.v();
  return di;
}

int QuotientImage::offset(int i) const {
  int o = 0;
  for (int j = 0; j < i; ++j) o += kappa[static_cast<size_t>(j)];
  return o;
}

CMat quotient_coords(const QuotientImage& q, const SMat& c) {
  CMat out(q.dim, c.cols());
  int n = static_cast<int>(q.kappa.size());
  for (int col = 0; col < c.cols(); ++col)
    for (int i = 0; i < n; ++i) {
      const Series& s = c(i, col);
      for (int j = 0; j < q.kappa[static_cast<size_t>(i)]; ++j) {
        if (s.prec() <= j) raise(Errc::PrecisionExhausted, "quotient_coords", "coordinate unknown at order " + std::to_string(j));
        out(q.offset(i) + j, col) = s.coeff(j);
      }
    }
  return out;
}

QuotientImage quotient_psi(const Lattice& lam, const Lattice& lamp, const Lattice& nn) {
  SmithData sd = smith_decomposition(lam, lamp);
  if (sd.kappa.front() < 0) raise(Errc::NotNested, "quotient_psi", "lam' is not contained in lam");
  QuotientImage q;
  q.kappa = sd.kappa;
  q.smith_basis = sd.smith_basis;
  int n = lam.n();
  for (int k : q.kappa) q.dim += k;
  q.z_action = CMat(q.dim, q.dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j + 1 < q.kappa[static_cast<size_t>(i)]; ++j) q.z_action(q.offset(i) + j + 1, q.offset(i) + j) = GQ(1);
  if (q.dim == 0) {
    q.subspace = CMat(0, 0);
    return q;
  }
  // (N + lam') cap lam = (N cap lam) + lam' since lam' lies in lam.
  SmithData sn = smith_decomposition(lam, nn);
  std::vector<int> k = sn.kappa;
  for (int& x : k) x = std::max(x, 0);
  SMat gens = inverse(q.smith_basis) * scale_cols(sn.smith_basis, k);
  CMat img = quotient_coords(q, gens);
  CMat all = img;
  CMat cur = img;
  for (int j = 1; j < q.kappa.back(); ++j) {
    cur = q.z_action * cur;
    all = hcat(all, cur);
  }
  q.subspace = column_basis(all);
  return q;
}

std::vector<int> AdmissiblePair::signature() const {
  std::vector<int> s;
  int prev = 0;
  for (const auto& f : flag) {
    int r = rank(f);
    s.push_back(r - prev);
    prev = r;
  }
  return s;
}

std::vector<int> AdmissiblePair::distinct() const {
  std::vector<int> d;
  for (int k : kappa)
    if (d.empty() || d.back() != k) d.push_back(k);
  return d;
}

int AdmissiblePair::index() const {
  int s = 0;
  for (int k : kappa) s += kappa.back() - k;
  return s;
}

bool AdmissiblePair::admissible() const {
  if (kappa.empty() || flag.empty()) return false;
  if (!std::is_sorted(kappa.begin(), kappa.end())) return false;
  int n = static_cast<int>(kappa.size());
  for (size_t i = 0; i + 1 < flag.size(); ++i)
    if (!contains(flag[i + 1], flag[i])) return false;
  if (rank(flag.back()) != n) return false;
  std::vector<int> mult;
  for (size_t i = 0; i < kappa.size(); ++i) {
    if (i == 0 || kappa[i] != kappa[i - 1])
      mult.push_back(1);
    else
      ++mult.back();
  }
  return mult == signature();
}

AdmissiblePair relative_flag(const Lattice& lam, const Lattice& m) {
  SmithData sd = smith_decomposition(lam, m);
  CMat e0 = sd.coords.coeff(0);
  AdmissiblePair ap;
  ap.kappa = sd.kappa;
  int upto = 0;
  for (auto& [value, count] : sd.multiplicities) {
    upto += count;
    ap.flag.push_back(e0.cols_range(0, upto));
  }
  return ap;
}

CMat flag_basis(const std::vector<CMat>& flag) {
  int n = flag.empty() ? 0 : flag.back().rows();
  CMat cur(n, 0);
  int r = 0;
  for (const auto& comp : flag)
    for (int j = 0; j < comp.cols(); ++j) {
      CMat trial = hcat(cur, comp.col(j));
      if (rank(trial) > r) {
        cur = trial;
        ++r;
      }
    }
  return cur;
}

bool same_flag(const std::vector<CMat>& a, const std::vector<CMat>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!contains(a[i], b[i]) || !contains(b[i], a[i])) return false;
  return true;
}

}  // namespace bt
