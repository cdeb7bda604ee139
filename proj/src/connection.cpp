#include "bt/connection.hpp"

#include <functional>

#include "bt/error.hpp"

namespace bt {

ConnectionGerm::ConnectionGerm(SMat l) : theta(std::move(l)), base(Lattice::standard(theta.rows())) {}

int ConnectionGerm::poincare_rank() const { return std::max(0, -theta.lower_bound()); }

bool ConnectionGerm::is_logarithmic() const { return theta.lower_bound() >= 0; }

CMat ConnectionGerm::residue() const {
  if (!is_logarithmic()) raise(Errc::InvalidArgument, "residue", "germ has a pole of order " + std::to_string(poincare_rank() + 1));
  return theta.coeff(0);
}

ConnectionGerm gauge_transform(const ConnectionGerm& a, const SMat& p) {
  SMat pinv = inverse(p);
  return ConnectionGerm(pinv * (a.theta * p) - pinv * p.theta(), Lattice(a.base.basis * p));
}

LogTest is_logarithmic_lattice(const ConnectionGerm& a, const Lattice& m) {
  LogTest t;
  t.witness = gauge_transform(a, inverse(a.base.basis) * m.basis).theta;
  bool unknown = false;
  for (int i = 0; i < t.witness.rows(); ++i)
    for (int j = 0; j < t.witness.cols(); ++j) {
      const Series& s = t.witness(i, j);
      if (!s.is_zero() && s.first() < 0) return t;
      if (s.is_zero() && s.prec() < 0) unknown = true;
    }
  if (unknown) raise(Errc::PrecisionExhausted, "is_logarithmic_lattice", "polar part of the witness is not known");
  t.logarithmic = true;
  return t;
}

Lattice adjacent_lattice(const ConnectionGerm& a, const CMat& w) {
  int n = a.n();
  if (w.cols() == 0 || rank(w) == 0) return a.base.scaled(1);
  CMat wb = column_basis(w);
  CMat rest = complete_basis(wb);
  CMat b(n, n);
  b.set_block(0, 0, wb);
  if (rest.cols() > 0) b.set_block(0, wb.cols(), rest);
  std::vector<int> ex(static_cast<size_t>(n), 1);
  for (int j = 0; j < wb.cols(); ++j) ex[static_cast<size_t>(j)] = 0;
  return Lattice(scale_cols(a.base.basis * SMat(b), ex));
}

bool adjacent_log_subspace_test(const ConnectionGerm& a, const CMat& w) {
  if (w.cols() == 0) return true;
  return is_invariant(a.residue(), w);
}

CMat solve_sylvester(const CMat& u, const CMat& v, const CMat& q) {
  int n = q.rows(), m = q.cols();
  int N = n * m;
  CMat sys(N, N), rhs(N, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      int row = i * m + j;
      rhs(row, 0) = q(i, j);
      for (int k = 0; k < m; ++k) sys(row, i * m + k) += u(k, j);
      for (int k = 0; k < n; ++k) sys(row, k * m + j) -= v(i, k);
    }
  if (rank(sys) < N) raise(Errc::ResonantResidue, "solve_sylvester", "the two matrices share an eigenvalue");
  CMat x = *solve(sys, rhs);
  CMat out(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) out(i, j) = x(i * m + j, 0);
  return out;
}

SMat birkhoff_gauge(const ConnectionGerm& a, int n_terms) {
  int n = a.n();
  if (!a.is_logarithmic()) raise(Errc::InvalidArgument, "birkhoff_gauge", "germ is not logarithmic");
  std::vector<CMat> ak, pk{CMat::identity(n)};
  for (int k = 0; k < n_terms; ++k) ak.push_back(a.theta.coeff(k));
  for (int k = 1; k < n_terms; ++k) {
    CMat q(n, n);
    for (int i = 1; i <= k; ++i) q = q + ak[static_cast<size_t>(i)] * pk[static_cast<size_t>(k - i)];
    if (q.is_zero()) {
      pk.push_back(q);
      continue;
    }
    CMat shifted = ak[0] - GQ(k) * CMat::identity(n);
    pk.push_back(solve_sylvester(ak[0], shifted, q));
  }
  return SMat::from_coeffs(pk);
}

SMat birkhoff_coordinate_change(const CMat& a0, const Series& u, int n_terms) {
  int n = a0.rows();
  if (u.coeff(0) != GQ(1) || (!u.is_zero() && u.first() < 0))
    raise(Errc::InvalidArgument, "birkhoff_coordinate_change", "u must be a unit with constant term 1");
  std::vector<CMat> pk{CMat::identity(n)};
  for (int k = 1; k < n_terms; ++k) {
    CMat acc(n, n);
    for (int i = 1; i <= k; ++i) {
      GQ ui = u.coeff(i);
      if (!ui.is_zero()) acc = acc + ui * (a0 * pk[static_cast<size_t>(k - i)]);
    }
    pk.push_back(GQ(mpq_class(1, k)) * acc);
  }
  return SMat::from_coeffs(pk);
}

bool is_deligne_normalized(const ConnectionGerm& a) {
  if (!a.is_logarithmic()) return false;
  for (const auto& [mu, m] : roots(charpoly(a.residue())))
    if (mu.re < 0 || mu.re >= 1) return false;
  return true;
}

Lattice log_lattice_from_flag(const ConnectionGerm& a, const StableFlagSpec& spec) {
  int n = a.n();
  AdmissiblePair pair{spec.flag, spec.kappa};
  if (static_cast<int>(spec.kappa.size()) != n || !pair.admissible())
    raise(Errc::FlagNotAdmissible, "log_lattice_from_flag", "flag signature does not match kappa");
  CMat r = a.residue();
  for (size_t i = 0; i < spec.flag.size(); ++i)
    if (!is_invariant(r, spec.flag[i]))
      raise(Errc::FlagNotStable, "log_lattice_from_flag", "component " + std::to_string(i + 1) + " is not stable under the residue");
  CMat c = flag_basis(spec.flag);
  ConnectionGerm adapted = gauge_transform(a, SMat(c));
  int d = *std::max_element(spec.kappa.begin(), spec.kappa.end()) - *std::min_element(spec.kappa.begin(), spec.kappa.end());
  SMat p = d > 0 ? birkhoff_gauge(adapted, d) : SMat::identity(n);
  return Lattice(scale_cols(adapted.base.basis * p, spec.kappa));
}

Lattice log_lattice_from_flag(const ConnectionGerm& a, const StableFlagSpec& spec, const Form& y) {
  SMat g = inverse(a.base.basis) * y.basis;
  if (!in_gl_h(g)) raise(Errc::InvalidArgument, "log_lattice_from_flag", "form is not a basis of the base lattice");
  return log_lattice_from_flag(gauge_transform(a, g), spec);
}

bool is_stable_flag(const CMat& f, const std::vector<CMat>& flag) {
  for (const auto& c : flag)
    if (!is_invariant(f, c)) return false;
  return true;
}

std::vector<std::vector<CMat>> jordan_samples(const CMat& f, const std::vector<int>& signature, size_t limit) {
  int n = f.rows();
  int total = 0;
  for (int s : signature) total += s;
  if (total != n) raise(Errc::SignatureMismatch, "jordan_samples", "signature does not sum to the dimension");
  EigenData ed = eigen_data(f);
  size_t nc = ed.chains.size();
  std::vector<std::vector<CMat>> out;
  std::vector<int> state(nc, 0);
  std::vector<CMat> flag;
  auto component = [&](const std::vector<int>& st) {
    CMat m(n, 0);
    for (size_t c = 0; c < nc; ++c)
      for (int k = 0; k < st[c]; ++k) m = hcat(m, ed.chains[c].vectors[static_cast<size_t>(k)]);
    return m;
  };
  std::function<void(size_t)> level = [&](size_t lv) {
    if (out.size() >= limit) return;
    if (lv == signature.size()) {
      out.push_back(flag);
      return;
    }
    std::vector<int> base = state;
    int need = signature[lv];
    // distribute `need` extra vectors over the chains, respecting chain lengths
    std::function<void(size_t, int)> grow = [&](size_t c, int left) {
      if (out.size() >= limit) return;
      if (c == nc) {
        if (left != 0) return;
        flag.push_back(component(state));
        level(lv + 1);
        flag.pop_back();
        return;
      }
      int room = static_cast<int>(ed.chains[c].vectors.size()) - base[c];
      for (int add = 0; add <= std::min(room, left); ++add) {
        state[c] = base[c] + add;
        grow(c + 1, left - add);
      }
      state[c] = base[c];
    };
    grow(0, need);
    state = base;
  };
  level(0);
  return out;
}

}  // namespace bt
