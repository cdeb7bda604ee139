#include "bt/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "bt/error.hpp"

namespace bt {

namespace {

using Poly = std::vector<GQ>;  // low to high

void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Poly derivative(const Poly& p) {
  Poly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * GQ(static_cast<long>(i)));
  trim(d);
  return d;
}

// Returns quotient, sets rem.
Poly divmod(Poly a, const Poly& b, Poly& rem) {
  trim(a);
  int db = degree(b);
  if (db < 0) raise(Errc::InvalidArgument, "poly divmod", "division by zero polynomial");
  Poly q(static_cast<size_t>(std::max(degree(a) - db + 1, 0)));
  GQ lead_inv = b.back().inv();
  while (degree(a) >= db) {
    int shift = degree(a) - db;
    GQ f = a.back() * lead_inv;
    q[static_cast<size_t>(shift)] = f;
    for (int i = 0; i <= db; ++i) a[static_cast<size_t>(shift + i)] -= f * b[static_cast<size_t>(i)];
    a.pop_back();
    trim(a);
  }
  rem = a;
  trim(q);
  return q;
}

Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r;
    divmod(a, b, r);
    a = b;
    b = r;
  }
  if (!a.empty()) {
    GQ inv = a.back().inv();
    for (auto& x : a) x *= inv;
  }
  return a;
}

GQ eval(const Poly& p, const GQ& x) {
  GQ acc;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

using cld = std::complex<long double>;

cld eval_num(const std::vector<cld>& p, cld x) {
  cld acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

std::vector<cld> numeric_roots(const Poly& p) {
  int d = degree(p);
  std::vector<cld> c(p.size());
  GQ lead_inv = p.back().inv();
  for (size_t i = 0; i < p.size(); ++i) {
    GQ q = p[i] * lead_inv;
    c[i] = cld(q.re.get_d(), q.im.get_d());
  }
  std::vector<cld> z(static_cast<size_t>(d));
  cld seed(0.4L, 0.9L);
  for (int i = 0; i < d; ++i) z[static_cast<size_t>(i)] = std::pow(seed, i);
  for (int it = 0; it < 2000; ++it) {
    long double delta = 0;
    for (int i = 0; i < d; ++i) {
      cld den = 1;
      for (int j = 0; j < d; ++j)
        if (j != i) den *= (z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)]);
      if (std::abs(den) == 0) den = cld(1e-12L, 0);
      cld step = eval_num(c, z[static_cast<size_t>(i)]) / den;
      z[static_cast<size_t>(i)] -= step;
      delta = std::max(delta, std::abs(step));
    }
    if (delta < 1e-30L) break;
  }
  return z;
}

std::vector<mpq_class> convergents(long double v) {
  std::vector<mpq_class> out;
  long double x = v;
  mpz_class h0 = 1, h1 = 0, k0 = 0, k1 = 1;
  for (int it = 0; it < 40; ++it) {
    long double a = std::floor(x);
    if (std::fabs(a) > 1e15L) break;
    mpz_class ai(static_cast<long>(a));
    mpz_class h = ai * h0 + h1, k = ai * k0 + k1;
    h1 = h0;
    h0 = h;
    k1 = k0;
    k0 = k;
    mpq_class q(h, k);
    q.canonicalize();
    out.push_back(q);
    if (k > mpz_class("1000000000")) break;
    long double frac = x - a;
    if (std::fabs(frac) < 1e-18L) break;
    x = 1 / frac;
  }
  return out;
}

std::optional<GQ> rationalize(const Poly& q, cld z) {
  auto re = convergents(z.real());
  auto im = convergents(z.imag());
  re.insert(re.begin(), mpq_class(0));
  im.insert(im.begin(), mpq_class(0));
  for (const auto& r : re) {
    if (std::fabs(r.get_d() - static_cast<double>(z.real())) > 1e-6 * (1 + std::fabs(static_cast<double>(z.real())))) continue;
    for (const auto& i : im) {
      if (std::fabs(i.get_d() - static_cast<double>(z.imag())) > 1e-6 * (1 + std::fabs(static_cast<double>(z.imag())))) continue;
      GQ cand(r, i);
      if (eval(q, cand).is_zero()) return cand;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::pair<GQ, int>> roots(const std::vector<GQ>& poly) {
  Poly p = poly;
  trim(p);
  if (degree(p) <= 0) return {};
  Poly g = gcd(p, derivative(p));
  Poly rem;
  Poly sqfree = divmod(p, g, rem);
  std::vector<GQ> found;
  if (degree(sqfree) == 1) {
    found.push_back(-sqfree[0] / sqfree[1]);
  } else {
    for (const cld& z : numeric_roots(sqfree)) {
      auto r = rationalize(sqfree, z);
      if (!r) raise(Errc::CharPolyDoesNotSplit, "roots", "a root is not a Gaussian rational");
      if (std::find(found.begin(), found.end(), *r) == found.end()) found.push_back(*r);
    }
  }
  if (static_cast<int>(found.size()) != degree(sqfree))
    raise(Errc::CharPolyDoesNotSplit, "roots", "could not isolate all roots exactly");
  std::sort(found.begin(), found.end(), canonical_less);
  std::vector<std::pair<GQ, int>> out;
  int total = 0;
  for (const GQ& r : found) {
    int m = 0;
    Poly cur = p;
    Poly lin = {-r, GQ(1)};
    while (true) {
      Poly rr;
      Poly qq = divmod(cur, lin, rr);
      if (!rr.empty()) break;
      cur = qq;
      ++m;
    }
    out.emplace_back(r, m);
    total += m;
  }
  if (total != degree(p)) raise(Errc::CharPolyDoesNotSplit, "roots", "multiplicities do not add up");
  return out;
}

int EigenData::index_of(const GQ& mu) const {
  for (size_t i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues[i] == mu) return static_cast<int>(i);
  return -1;
}

namespace {

EigenData compute_eigen(const CMat& a) {
  int n = a.rows();
  EigenData ed;
  for (auto& [mu, m] : roots(charpoly(a))) {
    ed.eigenvalues.push_back(mu);
    ed.multiplicities.push_back(m);
    CMat nmat = a - mu * CMat::identity(n);
    std::vector<CMat> kernels{CMat(n, 0)};
    CMat power = CMat::identity(n);
    while (kernels.back().cols() < m) {
      power = power * nmat;
      kernels.push_back(nullspace(power));
      if (static_cast<int>(kernels.size()) > n + 1) raise(Errc::InvalidArgument, "eigen_data", "kernel chain did not stabilise");
    }
    ed.eigenspaces.push_back(kernels[1]);
    int s = static_cast<int>(kernels.size()) - 1;
    std::vector<std::pair<CMat, int>> tops;  // vector, level
    for (int k = s; k >= 1; --k) {
      CMat cur = kernels[static_cast<size_t>(k - 1)];
      for (auto& [w, level] : tops) cur = hcat(cur, mat_pow(nmat, level - k) * w);
      int r = rank(cur);
      const CMat& kk = kernels[static_cast<size_t>(k)];
      for (int j = 0; j < kk.cols(); ++j) {
        CMat trial = hcat(cur, kk.col(j));
        if (rank(trial) > r) {
          cur = trial;
          ++r;
          tops.emplace_back(kk.col(j), k);
        }
      }
    }
    for (auto& [w, level] : tops) {
      JordanChain ch;
      ch.eigenvalue = mu;
      for (int k = level - 1; k >= 0; --k) ch.vectors.push_back(mat_pow(nmat, k) * w);
      ed.chains.push_back(std::move(ch));
    }
  }
  CMat basis(n, 0);
  std::vector<GQ> diag;
  for (const auto& ch : ed.chains)
    for (const auto& v : ch.vectors) {
      basis = hcat(basis, v);
      diag.push_back(ch.eigenvalue);
    }
  ed.jordan_basis = basis;
  ed.semisimple = basis * CMat::diag(diag) * inverse(basis);
  ed.nilpotent = a - ed.semisimple;
  return ed;
}

std::shared_mutex g_memo_mutex;
std::map<std::string, EigenData> g_memo;

}  // namespace

EigenData eigen_data(const CMat& a) {
  if (a.rows() != a.cols()) raise(Errc::InvalidArgument, "eigen_data", "non-square");
  std::string key = a.str();
  {
    std::shared_lock lock(g_memo_mutex);
    auto it = g_memo.find(key);
    if (it != g_memo.end()) return it->second;
  }
  EigenData ed = compute_eigen(a);
  std::unique_lock lock(g_memo_mutex);
  if (g_memo.size() > 4096) g_memo.clear();
  g_memo.emplace(key, ed);
  return ed;
}

}  // namespace bt
