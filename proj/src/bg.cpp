#include "bt/bg.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "bt/error.hpp"

namespace bt {

TypeVector::TypeVector(std::vector<int> v) : values(std::move(v)) {
  std::sort(values.begin(), values.end(), std::greater<>());
}

int TypeVector::degree() const { return std::accumulate(values.begin(), values.end(), 0); }

int TypeVector::triviality_index() const {
  int s = 0;
  for (int a : values) s += values.front() - a;
  return s;
}

std::vector<int> TypeVector::multiplicities() const {
  std::vector<int> m;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i == 0 || values[i] != values[i - 1])
      m.push_back(1);
    else
      ++m.back();
  }
  return m;
}

bool TypeVector::balanced() const { return values.empty() || values.front() == values.back(); }

TypeVector gs_modify_type(const TypeVector& a, const std::vector<CMat>& hn, const CMat& w) {
  auto mult = a.multiplicities();
  if (hn.size() != mult.size()) raise(Errc::SignatureMismatch, "gs_modify_type", "flag length differs from the number of distinct type values");
  int prev_dim = 0;
  for (size_t i = 0; i < hn.size(); ++i) {
    int r = rank(hn[i]);
    if (r - prev_dim != mult[i])
      raise(Errc::SignatureMismatch, "gs_modify_type", "component " + std::to_string(i + 1) + " has the wrong dimension");
    if (i > 0 && !contains(hn[i], hn[i - 1])) raise(Errc::SignatureMismatch, "gs_modify_type", "flag is not nested");
    prev_dim = r;
  }
  std::vector<int> out;
  int prev = 0;
  size_t pos = 0;
  for (size_t i = 0; i < hn.size(); ++i) {
    int cur = w.cols() == 0 ? 0 : rank(intersect(hn[i], w));
    int m = cur - prev;
    prev = cur;
    int value = a.values[pos];
    for (int k = 0; k < m; ++k) out.push_back(value);
    for (int k = m; k < mult[i]; ++k) out.push_back(value - 1);
    pos += static_cast<size_t>(mult[i]);
  }
  return TypeVector(out);
}

BruhatCell bruhat_factor(const CMat& u) {
  int n = u.rows();
  CMat a = u;
  CMat linv = CMat::identity(n);
  std::vector<int> piv_col(static_cast<size_t>(n), -1);
  BruhatCell bc;
  bc.w.assign(static_cast<size_t>(n), -1);
  for (int j = 0; j < n; ++j) {
    for (int r = 0; r < n; ++r) {
      int c = piv_col[static_cast<size_t>(r)];
      if (c < 0 || a(r, j).is_zero()) continue;
      GQ f = a(r, j) / a(r, c);
      for (int i = 0; i < n; ++i) a(i, j) -= f * a(i, c);
    }
    int p = -1;
    for (int i = n - 1; i >= 0; --i)
      if (piv_col[static_cast<size_t>(i)] < 0 && !a(i, j).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) raise(Errc::NonUnit, "bruhat_factor", "constant term is singular");
    for (int i = 0; i < p; ++i) {
      if (a(i, j).is_zero()) continue;
      GQ f = a(i, j) / a(p, j);
      for (int k = 0; k < n; ++k) a(i, k) -= f * a(p, k);
      for (int k = 0; k < n; ++k) linv(k, p) += f * linv(k, i);
    }
    piv_col[static_cast<size_t>(p)] = j;
    bc.w[static_cast<size_t>(j)] = p;
  }
  bc.q = linv;
  for (int r = 0; r < n; ++r) {
    GQ d = a(r, piv_col[static_cast<size_t>(r)]);
    for (int k = 0; k < n; ++k) bc.q(k, r) *= d;
  }
  return bc;
}

namespace {

// Shortest representative of w in the double coset W_rows w W_cols, where
// rows with equal t and columns with equal step are interchangeable.
std::vector<int> reduced_twist(const std::vector<int>& w, const std::vector<int>& t, const std::vector<int>& step) {
  size_t n = w.size();
  std::vector<int> out(n);
  // rows of each t-block that each column block receives
  std::map<std::pair<int, int>, int> count;
  for (size_t j = 0; j < n; ++j) ++count[{t[static_cast<size_t>(w[j])], step[j]}];
  std::map<int, std::vector<int>> rows_by_t;
  for (size_t r = 0; r < n; ++r) rows_by_t[t[r]].push_back(static_cast<int>(r));
  std::map<int, std::vector<int>> cols_by_step;
  for (size_t j = 0; j < n; ++j) cols_by_step[step[j]].push_back(static_cast<int>(j));
  std::map<int, std::vector<int>> given;  // step value -> rows, ascending
  for (auto& [tv, rows] : rows_by_t) {
    size_t next = 0;
    for (auto& [sv, cs] : cols_by_step) {
      int c = count[{tv, sv}];
      for (int k = 0; k < c; ++k) given[sv].push_back(rows[next++]);
    }
  }
  for (auto& [sv, cs] : cols_by_step) {
    auto& rs = given[sv];
    std::sort(rs.begin(), rs.end());
    for (size_t k = 0; k < cs.size(); ++k) out[static_cast<size_t>(cs[k])] = rs[k];
  }
  return out;
}

}  // namespace

BGTrivialisation bg_trivialise(const Lattice& lam, const Form& m) {
  int n = lam.n();
  if (!is_unimodular_poly_inv(m.basis))
    raise(Errc::NotTrivialising, "bg_trivialise", "form basis is not unimodular in z^-1");
  SMat pi = m.basis;
  std::vector<int> t(static_cast<size_t>(n), 0);
  SmithData s0 = smith_decomposition(Lattice(pi), lam);
  BGTrivialisation out;
  out.shift = s0.v();
  Lattice target = lam.scaled(-out.shift);
  int budget = s0.d() + 1;
  while (true) {
    SmithData sd = smith_decomposition(Lattice(scale_cols(pi, t)), target);
    if (sd.kappa.back() == 0) break;
    if (sd.kappa.front() != 0) raise(Errc::NotTrivialising, "bg_trivialise", "walk left the geodesic");
    if (--budget <= 0) raise(Errc::NotTrivialising, "bg_trivialise", "walk did not terminate within the distance");
    BGStep st;
    st.divisors = sd.kappa;
    for (int k : sd.kappa) st.step.push_back(std::min(k, 1));
    BruhatCell bc = bruhat_factor(sd.coords.coeff(0));
    st.cell = bc.w;
    st.w = reduced_twist(bc.w, t, st.step);
    std::vector<int> negt(t.size());
    for (size_t i = 0; i < t.size(); ++i) negt[i] = -t[i];
    pi = pi * conj_zk(SMat(bc.q), negt);
    for (int j = 0; j < n; ++j) t[static_cast<size_t>(bc.w[static_cast<size_t>(j)])] += st.step[static_cast<size_t>(j)];
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return t[static_cast<size_t>(x)] < t[static_cast<size_t>(y)]; });
    SMat sorted(n, n);
    std::vector<int> ts;
    for (int j = 0; j < n; ++j) {
      sorted.set_block(0, j, pi.col(order[static_cast<size_t>(j)]));
      ts.push_back(t[static_cast<size_t>(order[static_cast<size_t>(j)])]);
    }
    pi = sorted;
    t = ts;
    st.sort = order;
    out.steps.push_back(st);
  }
  for (int& x : t) x += out.shift;
  out.divisors = t;
  out.global_form = Form(pi);
  out.trivial_lattice = Lattice(pi);
  out.bg_basis = scale_cols(pi, t);
  std::vector<int> ty;
  for (int x : t) ty.push_back(-x);
  out.type = TypeVector(ty);
  if (!is_unimodular_poly_inv(pi)) raise(Errc::NotTrivialising, "bg_trivialise", "accumulated gauge is not a monopole");
  if (Lattice(out.bg_basis) != lam) raise(Errc::NotTrivialising, "bg_trivialise", "final basis does not span the target");
  return out;
}

BGTrivialisation bg_trivialise(const Lattice& lam) { return bg_trivialise(lam, Form::standard(lam.n())); }

std::vector<CMat> hn_flag(const BGTrivialisation& bg) {
  int n = static_cast<int>(bg.divisors.size());
  std::vector<CMat> flag;
  CMat id = CMat::identity(n);
  for (int j = 0; j < n; ++j)
    if (j + 1 == n || bg.divisors[static_cast<size_t>(j + 1)] != bg.divisors[static_cast<size_t>(j)]) flag.push_back(id.cols_range(0, j + 1));
  return flag;
}

bool PermutationLemma::sigma_identity() const {
  for (size_t i = 0; i < sigma.size(); ++i)
    if (sigma[i] != static_cast<int>(i)) return false;
  return true;
}

PermutationLemma permutation_lemma(const SMat& p, const std::vector<int>& kappa) {
  int n = p.rows();
  if (static_cast<int>(kappa.size()) != n) raise(Errc::InvalidArgument, "permutation_lemma", "kappa has the wrong length");
  std::vector<int> pi_sort(static_cast<size_t>(n));
  std::iota(pi_sort.begin(), pi_sort.end(), 0);
  std::stable_sort(pi_sort.begin(), pi_sort.end(), [&](int a, int b) { return kappa[static_cast<size_t>(a)] > kappa[static_cast<size_t>(b)]; });
  std::vector<int> big_k;
  for (int i : pi_sort) big_k.push_back(kappa[static_cast<size_t>(i)]);
  CMat r = CMat::permutation(pi_sort);
  CMat rinv = r.transpose();
  CMat m0 = p.coeff(0) * r;
  if (det(m0).is_zero()) raise(Errc::NonUnit, "permutation_lemma", "P(0) is singular");
  // rows chosen greedily so that every leading minor is invertible
  std::vector<int> c;
  std::vector<bool> used(static_cast<size_t>(n), false);
  for (int k = 0; k < n; ++k) {
    bool found = false;
    for (int row = 0; row < n && !found; ++row) {
      if (used[static_cast<size_t>(row)]) continue;
      CMat sub(k + 1, k + 1);
      for (int i = 0; i <= k; ++i) {
        int src = i < k ? c[static_cast<size_t>(i)] : row;
        for (int j = 0; j <= k; ++j) sub(i, j) = m0(src, j);
      }
      if (!det(sub).is_zero()) {
        c.push_back(row);
        used[static_cast<size_t>(row)] = true;
        found = true;
      }
    }
    if (!found) raise(Errc::NonUnit, "permutation_lemma", "no row completes the leading minor");
  }
  CMat cmat = CMat::permutation(c);
  SMat h = SMat(cmat.transpose()) * p * SMat(r);
  int lo = big_k.back();
  std::vector<int> kp;
  for (int k : big_k) kp.push_back(k - lo);
  int steps = kp.front();
  SMat hbar = SMat::identity(n);
  for (int i = 1; i <= steps; ++i) {
    int b = 0;
    for (int k : kp) b += k >= i ? 1 : 0;
    SMat bar = SMat::identity(n);
    for (int j = 0; j < b; ++j) bar(j, j) = Series::z(1);
    if (b < n) {
      SMat a = h.block(0, 0, b, b), bb = h.block(0, b, b, n - b), cc = h.block(b, 0, n - b, b), dd = h.block(b, b, n - b, n - b);
      CMat pt = -(inverse(a.coeff(0)) * bb.coeff(0));
      SMat pts(pt);
      SMat nb = (bb + a * pts).shifted(-1);
      SMat nc = cc.shifted(1);
      SMat nd = dd + cc * pts;
      h.set_block(0, b, nb);
      h.set_block(b, 0, nc);
      h.set_block(b, b, nd);
      bar.set_block(0, b, pts);
    }
    hbar = hbar * bar;
  }
  std::vector<int> negk;
  for (int k : kp) negk.push_back(-k);
  SMat pi_p = scale_rows(hbar, negk);
  SMat q_p = scale_cols(hbar, negk);
  PermutationLemma out;
  out.pi = SMat(r) * pi_p * SMat(rinv);
  out.q = SMat(r) * q_p * SMat(rinv);
  out.p_tilde = SMat(cmat) * h * SMat(rinv);
  out.kappa_sigma.assign(static_cast<size_t>(n), 0);
  out.sigma.assign(static_cast<size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    out.kappa_sigma[static_cast<size_t>(c[static_cast<size_t>(j)])] = big_k[static_cast<size_t>(j)];
    out.sigma[static_cast<size_t>(c[static_cast<size_t>(j)])] = pi_sort[static_cast<size_t>(j)];
  }
  return out;
}

PermutationLemmaCheck check_permutation_lemma(const SMat& p, const std::vector<int>& kappa, const PermutationLemma& r) {
  PermutationLemmaCheck ck;
  std::vector<int> negk;
  for (int k : kappa) negk.push_back(-k);
  SMat rhs = scale_rows(inverse(p) * scale_rows(r.p_tilde, r.kappa_sigma), negk);
  ck.first_identity = equals(r.pi, rhs) != Tri::False && in_gl_h(r.p_tilde);
  ck.second_identity = equals(scale_rows(r.pi, kappa), scale_cols(r.q, kappa)) == Tri::True && in_gl_h(r.q);
  ck.unimodular = is_unimodular_poly_inv(r.pi);
  ck.box = true;
  int n = p.rows();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Series& s = r.pi(i, j);
      if (s.is_zero()) continue;
      int lo = kappa[static_cast<size_t>(j)] - kappa[static_cast<size_t>(i)];
      if (s.first() < lo || s.top() > 0) ck.box = false;
    }
  return ck;
}

BirkhoffFactorization birkhoff_factor_oracle(const SMat& g) {
  int n = g.rows();
  if (!g.is_exact()) raise(Errc::NotFactorable, "birkhoff_factor_oracle", "entries must be Laurent polynomials");
  Series dg = det(g);
  if (dg.is_zero()) raise(Errc::NotFactorable, "birkhoff_factor_oracle", "singular matrix");
  SMat x = g;
  SMat einv = SMat::identity(n);  // g = einv * x
  int budget = 4 * n * (dg.top() - dg.first() + 2 + n * (x.max_degree() - x.min_exponent() + 1));
  std::vector<int> o(static_cast<size_t>(n));
  while (true) {
    for (int i = 0; i < n; ++i) {
      int v = kExact;
      for (int j = 0; j < n; ++j)
        if (!x(i, j).is_zero()) v = std::min(v, x(i, j).first());
      if (v == kExact) raise(Errc::NotFactorable, "birkhoff_factor_oracle", "zero row");
      o[static_cast<size_t>(i)] = v;
    }
    CMat y0(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) y0(i, j) = x(i, j).coeff(o[static_cast<size_t>(i)]);
    CMat left = nullspace(y0.transpose());
    if (left.cols() == 0) break;
    if (--budget <= 0) raise(Errc::NotFactorable, "birkhoff_factor_oracle", "reduction did not terminate");
    int p = -1;
    for (int i = 0; i < n; ++i)
      if (!left(i, 0).is_zero() && (p < 0 || o[static_cast<size_t>(i)] < o[static_cast<size_t>(p)])) p = i;
    for (int i = 0; i < n; ++i) {
      if (i == p || left(i, 0).is_zero()) continue;
      Series coef = Series::monomial(left(i, 0) / left(p, 0), o[static_cast<size_t>(p)] - o[static_cast<size_t>(i)]);
      for (int j = 0; j < n; ++j) x(p, j) += coef * x(i, j);
      // einv <- einv * (I - coef E_pi)
      for (int k = 0; k < n; ++k) einv(k, i) -= einv(k, p) * coef;
    }
  }
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return o[static_cast<size_t>(a)] < o[static_cast<size_t>(b)]; });
  BirkhoffFactorization bf;
  bf.g_minus = SMat(n, n);
  bf.g_plus = SMat(n, n);
  for (int r = 0; r < n; ++r) {
    int src = order[static_cast<size_t>(r)];
    bf.kappa.push_back(o[static_cast<size_t>(src)]);
    for (int k = 0; k < n; ++k) {
      bf.g_minus(k, r) = einv(k, src);
      bf.g_plus(r, k) = x(src, k).shifted(-o[static_cast<size_t>(src)]);
    }
  }
  return bf;
}

bool k_staged_parabolic_member(const SMat& p, const std::vector<int>& kappa) { return in_staged_parabolic(p, kappa); }

namespace {

struct Elementary {
  int r = 0, c = 0;
  std::vector<GQ> values;  // one per interpolation point
};

bool leading_minors_nonzero(const CMat& m) {
  for (int k = 1; k <= m.rows(); ++k)
    if (det(m.block(0, 0, k, k)).is_zero()) return false;
  return true;
}

Series lagrange(const std::vector<GQ>& pts, const std::vector<GQ>& ys) {
  Series out;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (ys[i].is_zero()) continue;
    Series term(ys[i]);
    for (size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      GQ inv = (pts[i] - pts[j]).inv();
      term *= Series::from_coeffs(0, {-pts[j] * inv, inv});
    }
    out += term;
  }
  return out;
}

}  // namespace

SMat interpolate_monopole(const std::vector<GQ>& points, const std::vector<CMat>& values, std::uint64_t seed) {
  size_t p = points.size();
  if (p == 0 || values.size() != p) raise(Errc::InvalidArgument, "interpolate_monopole", "need one matrix per point");
  for (size_t i = 0; i < p; ++i)
    for (size_t j = i + 1; j < p; ++j)
      if (points[i] == points[j]) raise(Errc::InvalidArgument, "interpolate_monopole", "points must be distinct");
  int n = values[0].rows();
  GQ delta = det(values[0]);
  if (delta.is_zero()) raise(Errc::DeterminantMismatch, "interpolate_monopole", "singular value");
  for (size_t i = 1; i < p; ++i)
    if (det(values[i]) != delta) raise(Errc::DeterminantMismatch, "interpolate_monopole", "determinant differs at point " + std::to_string(i));
  std::vector<GQ> dd(static_cast<size_t>(n), GQ(1));
  dd[0] = delta;
  CMat d = CMat::diag(dd);
  CMat dinv = inverse(d);
  std::vector<CMat> s;
  for (const auto& c : values) s.push_back(dinv * c);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coef(-3, 3);
  CMat ua = CMat::identity(n);
  for (int attempt = 0;; ++attempt) {
    bool ok = true;
    for (const auto& si : s) ok = ok && leading_minors_nonzero(ua * si);
    if (ok) break;
    if (attempt > 2000) raise(Errc::InvalidArgument, "interpolate_monopole", "no generic unitriangular factor found");
    ua = CMat::identity(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) ua(i, j) = GQ(coef(rng));
  }
  std::vector<Elementary> word;
  auto slot = [&](int r, int c) -> Elementary& {
    word.push_back(Elementary{r, c, {}});
    return word.back();
  };
  // Fix the word shape: L columns, D' blocks, U rows (last to first).
  for (int c = 0; c < n; ++c)
    for (int r = c + 1; r < n; ++r) slot(r, c);
  for (int k = 0; k + 1 < n; ++k) {
    slot(k, k + 1);  // e
    slot(k + 1, k);  // -1/e
    slot(k, k + 1);  // e - 1
    slot(k + 1, k);  // 1
    slot(k, k + 1);  // -1
  }
  for (int c = n - 2; c >= 0; --c)
    for (int r = c + 1; r < n; ++r) slot(c, r);
  for (const auto& si : s) {
    CMat a = ua * si;
    CMat l = CMat::identity(n);
    for (int k = 0; k < n; ++k)
      for (int i = k + 1; i < n; ++i) {
        GQ f = a(i, k) / a(k, k);
        l(i, k) = f;
        for (int j = 0; j < n; ++j) a(i, j) -= f * a(k, j);
      }
    std::vector<GQ> dg;
    for (int k = 0; k < n; ++k) dg.push_back(a(k, k));
    size_t pos = 0;
    for (int c = 0; c < n; ++c)
      for (int r = c + 1; r < n; ++r) word[pos++].values.push_back(l(r, c));
    GQ e(1);
    for (int k = 0; k + 1 < n; ++k) {
      e *= dg[static_cast<size_t>(k)];
      word[pos++].values.push_back(e);
      word[pos++].values.push_back(-e.inv());
      word[pos++].values.push_back(e - GQ(1));
      word[pos++].values.push_back(GQ(1));
      word[pos++].values.push_back(GQ(-1));
    }
    for (int c = n - 2; c >= 0; --c)
      for (int r = c + 1; r < n; ++r) word[pos++].values.push_back(a(c, r) / a(c, c));
  }
  SMat out = SMat(d * inverse(ua));
  for (const auto& el : word) {
    SMat f = SMat::identity(n);
    f(el.r, el.c) += lagrange(points, el.values);
    out = out * f;
  }
  for (size_t i = 0; i < p; ++i)
    if (out.eval(points[i]) != values[i]) raise(Errc::InvalidArgument, "interpolate_monopole", "interpolation check failed");
  return out;
}

}  // namespace bt
