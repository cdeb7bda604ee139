#include "bt/rh.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "bt/error.hpp"

namespace bt {

namespace {

SMat theta_inf(const FuchsianSystem& sys, const CMat& c, int prec) {
  int n = sys.n();
  SMat l(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Series e;
      if (!c(i, j).is_zero()) e -= Series::monomial(c(i, j), -1);
      for (size_t a = 0; a < sys.poles.size(); ++a) {
        const GQ& r = sys.residues[a](i, j);
        if (!r.is_zero()) e -= r * geometric(sys.poles[a], prec);
      }
      l(i, j) = e;
    }
  return l;
}

std::vector<int> diag_ints(const CMat& b) {
  std::vector<int> out;
  for (int i = 0; i < b.rows(); ++i) out.push_back(static_cast<int>(b(i, i).re.get_num().get_si()));
  return out;
}

std::vector<CMat> coordinate_flag(const std::vector<int>& b) {
  int n = static_cast<int>(b.size());
  CMat id = CMat::identity(n);
  std::vector<CMat> flag;
  for (int j = 0; j < n; ++j)
    if (j + 1 == n || b[static_cast<size_t>(j + 1)] != b[static_cast<size_t>(j)]) flag.push_back(id.cols_range(0, j + 1));
  return flag;
}

std::vector<int> negated(const std::vector<int>& v) {
  std::vector<int> out;
  for (int x : v) out.push_back(-x);
  return out;
}

CMat conj(const CMat& r, const CMat& k, const CMat& kinv) { return kinv * r * k; }

bool same_span(const CMat& a, const CMat& b) {
  if (a.cols() == 0 || b.cols() == 0) return rank(a) == 0 && rank(b) == 0;
  return rank(a) == rank(b) && contains(a, b);
}

std::string charpoly_str(const CMat& m) {
  std::ostringstream os;
  for (const auto& c : charpoly(m)) os << c.str() << ",";
  return os.str();
}

WeakSolutionState state_from_read_off(FuchsianSystem sys, std::vector<Move> log) {
  WeakSolutionState st;
  auto b = diag_ints(sys.residue_at_infinity());
  st.type = TypeVector(negated(b));
  st.hn_flag = coordinate_flag(b);
  st.system = std::move(sys);
  st.log = std::move(log);
  return st;
}

}  // namespace

CMat FuchsianSystem::residue_at_infinity() const { return -moment(0); }

CMat FuchsianSystem::moment(int k) const {
  CMat acc(n(), n());
  for (size_t a = 0; a < poles.size(); ++a) acc = acc + pow(poles[a], k) * residues[a];
  return acc;
}

SMat FuchsianSystem::theta_at_infinity() const { return theta_inf(*this, CMat(n(), n()), working_precision()); }

void validate(const FuchsianSystem& sys) {
  if (sys.poles.size() != sys.residues.size()) raise(Errc::InvalidArgument, "FuchsianSystem", "one residue per pole is required");
  int n = sys.n();
  for (const auto& r : sys.residues)
    if (r.rows() != n || r.cols() != n) raise(Errc::InvalidArgument, "FuchsianSystem", "residues must be square of the same size");
  for (size_t a = 0; a < sys.poles.size(); ++a)
    for (size_t b = a + 1; b < sys.poles.size(); ++b)
      if (sys.poles[a] == sys.poles[b]) raise(Errc::InvalidArgument, "FuchsianSystem", "poles must be distinct");
}

LinearFuchsianModel LinearFuchsianModel::of(const FuchsianSystem& sys) {
  LinearFuchsianModel m;
  m.maps = sys.residues;
  m.at_infinity = sys.residue_at_infinity();
  return m;
}

bool LinearFuchsianModel::sums_to_zero() const {
  CMat acc = at_infinity;
  for (const auto& m : maps) acc = acc + m;
  return acc.is_zero();
}

bool in_read_off_form(const FuchsianSystem& sys) {
  CMat b = sys.residue_at_infinity();
  if (!b.is_diagonal()) return false;
  for (int i = 0; i < b.rows(); ++i) {
    if (!b(i, i).is_integer()) return false;
    if (i > 0 && b(i, i).re < b(i - 1, i - 1).re) return false;
  }
  return true;
}

bool is_apparent_at_infinity(const FuchsianSystem& sys) {
  if (!in_read_off_form(sys)) return false;
  auto b = diag_ints(sys.residue_at_infinity());
  int n = sys.n();
  if (n == 0) return true;
  int spread = b.back() - b.front();
  std::vector<CMat> mom;
  for (int k = 0; k <= spread; ++k) mom.push_back(sys.moment(k));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 1; k <= b[static_cast<size_t>(i)] - b[static_cast<size_t>(j)]; ++k)
        if (!mom[static_cast<size_t>(k)](i, j).is_zero()) return false;
  return true;
}

ReadOff type_and_hn(const FuchsianSystem& sys) {
  validate(sys);
  int n = sys.n();
  ReadOff out;
  out.conjugation = CMat::identity(n);
  out.system = sys;
  if (!in_read_off_form(sys)) {
    CMat b = sys.residue_at_infinity();
    EigenData ed;
    try {
      ed = eigen_data(b);
    } catch (const Error& e) {
      if (e.code() != Errc::CharPolyDoesNotSplit) throw;
      raise(Errc::NotLogarithmicAtInfinity, "type_and_hn", "residue at infinity has eigenvalues outside Q(i)");
    }
    if (!ed.diagonalizable()) raise(Errc::NotLogarithmicAtInfinity, "type_and_hn", "residue at infinity is not semisimple");
    std::vector<size_t> order(ed.eigenvalues.size());
    std::iota(order.begin(), order.end(), 0);
    for (const auto& mu : ed.eigenvalues)
      if (!mu.is_integer()) raise(Errc::NotLogarithmicAtInfinity, "type_and_hn", "residue at infinity has a non-integer eigenvalue " + mu.str());
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return ed.eigenvalues[x].re < ed.eigenvalues[y].re; });
    CMat k(n, 0);
    for (size_t i : order) k = hcat(k, ed.eigenspaces[i]);
    CMat kinv = inverse(k);
    for (auto& r : out.system.residues) r = conj(r, k, kinv);
    out.conjugation = k;
  }
  auto b = diag_ints(out.system.residue_at_infinity());
  out.type = TypeVector(negated(b));
  out.hn_flag = coordinate_flag(b);
  out.apparent = is_apparent_at_infinity(out.system);
  return out;
}

WeakSolutionState make_state(const FuchsianSystem& sys) { return state_from_read_off(type_and_hn(sys).system, {}); }

WeakSolutionState modify_adjacent(const WeakSolutionState& st, int pole, const CMat& w) {
  const FuchsianSystem& sys = st.system;
  int n = sys.n();
  int p = static_cast<int>(sys.poles.size());
  if (pole < 0 || pole >= p) raise(Errc::InvalidArgument, "modify_adjacent", "pole index out of range");
  if (!in_read_off_form(sys)) raise(Errc::NotLogarithmicAtInfinity, "modify_adjacent", "system is not in read-off form");
  if (w.cols() > 0 && w.rows() != n) raise(Errc::InvalidArgument, "modify_adjacent", "subspace has the wrong dimension");
  CMat wb = w.cols() == 0 || rank(w) == 0 ? CMat(n, 0) : column_basis(w);
  const CMat& rs = sys.residues[static_cast<size_t>(pole)];
  if (wb.cols() > 0 && !is_invariant(rs, wb)) raise(Errc::SubspaceNotStable, "modify_adjacent", "subspace is not stable under the residue");
  if (wb.cols() == n) return st;

  // basis adapted to the HN flag and W; T = 1 on vectors outside W
  auto b = diag_ints(sys.residue_at_infinity());
  CMat chosen(n, 0);
  std::vector<int> t;
  auto add_from = [&](const CMat& x, int tag) {
    for (int j = 0; j < x.cols(); ++j) {
      CMat cand = hcat(chosen, x.col(j));
      if (rank(cand) > chosen.cols()) {
        chosen = cand;
        t.push_back(tag);
      }
    }
  };
  for (const auto& f : coordinate_flag(b)) {
    if (wb.cols() > 0) {
      CMat fw = intersect(f, wb);
      if (fw.cols() > 0) add_from(fw, 0);
    }
    add_from(f, 1);
  }
  CMat p0 = chosen, p0inv = inverse(chosen);

  std::vector<CMat> ah;
  for (const auto& r : sys.residues) ah.push_back(conj(r, p0, p0inv));
  std::vector<CMat> r(static_cast<size_t>(p), CMat(n, n));
  CMat c(n, n);
  const GQ& s = sys.poles[static_cast<size_t>(pole)];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int e = t[static_cast<size_t>(j)] - t[static_cast<size_t>(i)];
      for (int a = 0; a < p; ++a) {
        const GQ& x = ah[static_cast<size_t>(a)](i, j);
        GQ d = sys.poles[static_cast<size_t>(a)] - s;
        CMat& ra = r[static_cast<size_t>(a)];
        CMat& rsn = r[static_cast<size_t>(pole)];
        if (e == 0) {
          ra(i, j) += x;
          if (a == pole && i == j) ra(i, j) -= GQ(t[static_cast<size_t>(i)]);
        } else if (e == -1) {
          if (a == pole) {
            if (!x.is_zero()) raise(Errc::SubspaceNotStable, "modify_adjacent", "residue leaves the subspace");
          } else {
            ra(i, j) += x / d;
            rsn(i, j) -= x / d;
          }
        } else {
          c(i, j) += x;
          if (a != pole) ra(i, j) += x * d;
        }
      }
    }

  // new lattice at infinity is t^{b+T}; sort it
  std::vector<int> dp(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) dp[static_cast<size_t>(i)] = b[static_cast<size_t>(i)] + t[static_cast<size_t>(i)];
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return dp[static_cast<size_t>(x)] < dp[static_cast<size_t>(y)]; });
  CMat sp = CMat::permutation(order);  // column k is e_{order[k]}
  CMat spinv = sp.transpose();
  for (auto& ra : r) ra = conj(ra, sp, spinv);
  c = conj(c, sp, spinv);
  std::vector<int> ds;
  for (int k : order) ds.push_back(dp[static_cast<size_t>(k)]);

  int d = ds.back() - ds.front();
  int nterms = d + 2;
  int prec = nterms + d + 2;
  FuchsianSystem sheared{sys.poles, r};
  ConnectionGerm germ(theta_inf(sheared, c, prec));
  ConnectionGerm at_lattice = gauge_transform(germ, SMat::zdiag(ds));
  if (at_lattice.theta.lower_bound() < 1)
    raise(Errc::NotLogarithmicAtInfinity, "modify_adjacent", "lattice at infinity is not apparent for this system");
  SMat psi = birkhoff_gauge(at_lattice, nterms).truncated(nterms);
  PermutationLemma pl = permutation_lemma(inverse(psi), negated(ds));
  if (!pl.pi.is_exact() || !is_unimodular_poly_inv(pl.pi))
    raise(Errc::PrecisionExhausted, "modify_adjacent", "monopole gauge is not a Laurent polynomial");
  SMat mz = pl.pi.reflected();

  std::vector<CMat> r2;
  for (int a = 0; a < p; ++a) {
    CMat m = mz.eval(sys.poles[static_cast<size_t>(a)]);
    r2.push_back(conj(r[static_cast<size_t>(a)], m, inverse(m)));
  }
  FuchsianSystem mid{sys.poles, r2};
  CMat binf = mid.residue_at_infinity();

  // block unitriangular K diagonalising the residue at infinity
  CMat k = CMat::identity(n);
  for (int j = 0; j < n; ++j) {
    GQ mu(ds[static_cast<size_t>(j)]);
    int lo = j;
    while (lo > 0 && ds[static_cast<size_t>(lo - 1)] == ds[static_cast<size_t>(j)]) --lo;
    for (int i = lo; i < n; ++i)
      if (binf(i, j) != (i == j ? mu : GQ(0)))
        raise(Errc::NotLogarithmicAtInfinity, "modify_adjacent", "residue at infinity is not block triangular after the monopole gauge");
    if (lo == 0) continue;
    CMat sub = binf.block(0, 0, lo, lo) - mu * CMat::identity(lo);
    k.set_block(0, j, -(inverse(sub) * binf.block(0, j, lo, 1)));
  }
  CMat kinv = inverse(k);
  for (auto& ra : r2) ra = conj(ra, k, kinv);
  FuchsianSystem out{sys.poles, r2};

  std::vector<GQ> dg;
  for (int x : ds) dg.push_back(GQ(x));
  if (out.residue_at_infinity() != CMat::diag(dg) || !is_apparent_at_infinity(out))
    raise(Errc::NotLogarithmicAtInfinity, "modify_adjacent", "re-normalised system is not apparent at infinity");
  SMat check = gauge_transform(germ, pl.pi * SMat(k)).theta;
  SMat expect = theta_inf(out, CMat(n, n), prec);
  if (check.lower_bound() < 0 || equals(check, expect) == Tri::False)
    raise(Errc::PrecisionExhausted, "modify_adjacent", "gauge at infinity does not reproduce the new residues");

  std::vector<Move> log = st.log;
  log.push_back(Move{Move::Down, pole, wb});
  return state_from_read_off(std::move(out), std::move(log));
}

WeakSolutionState modify_up(const WeakSolutionState& st, int pole) {
  int n = st.system.n();
  if (pole < 0 || pole >= static_cast<int>(st.system.poles.size())) raise(Errc::InvalidArgument, "modify_up", "pole index out of range");
  FuchsianSystem sys = st.system;
  sys.residues[static_cast<size_t>(pole)] = sys.residues[static_cast<size_t>(pole)] + CMat::identity(n);
  std::vector<Move> log = st.log;
  log.push_back(Move{Move::Up, pole, CMat(n, 0)});
  return state_from_read_off(std::move(sys), std::move(log));
}

WeakSolutionState apply(const WeakSolutionState& st, const Move& m) {
  return m.kind == Move::Up ? modify_up(st, m.pole) : modify_adjacent(st, m.pole, m.subspace);
}

WeakSolutionState replay(const FuchsianSystem& sys, const std::vector<Move>& log) {
  WeakSolutionState st = make_state(sys);
  for (const auto& m : log) st = apply(st, m);
  return st;
}

std::string dedup_key(const WeakSolutionState& st) {
  std::ostringstream os;
  for (int v : st.type.values) os << v << " ";
  os << "|";
  for (const auto& r : st.system.residues) os << charpoly_str(r) << "|";
  return os.str();
}

WeakSolutionState plemelj_search(const FuchsianSystem& sys, int pole, const PlemeljOptions& opt) {
  WeakSolutionState root = make_state(sys);
  int n = root.system.n();
  if (pole < 0 || pole >= static_cast<int>(root.system.poles.size())) raise(Errc::InvalidArgument, "plemelj_search", "pole index out of range");
  if (!eigen_data(root.system.residues[static_cast<size_t>(pole)]).diagonalizable())
    raise(Errc::NotDiagonalizable, "plemelj_search", "residue at the pole is not diagonalizable");
  if (root.strong()) return root;
  int bound = opt.max_depth > 0 ? opt.max_depth : root.type.triviality_index() + n;
  std::set<std::string> seen{dedup_key(root)};
  std::vector<WeakSolutionState> layer{root};
  for (int depth = 1; depth <= bound && !layer.empty(); ++depth) {
    std::vector<WeakSolutionState> next;
    for (const auto& st : layer) {
      EigenData ed = eigen_data(st.system.residues[static_cast<size_t>(pole)]);
      if (!ed.diagonalizable()) continue;
      CMat e(n, 0);
      for (const auto& sp : ed.eigenspaces) e = hcat(e, sp);
      for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
        CMat w(n, 0);
        for (int j = 0; j < n; ++j)
          if (mask & (1u << j)) w = hcat(w, e.col(j));
        WeakSolutionState ns;
        try {
          ns = modify_adjacent(st, pole, w);
        } catch (const Error&) {
          continue;
        }
        if (ns.strong()) return ns;
        if (seen.insert(dedup_key(ns)).second) next.push_back(std::move(ns));
      }
    }
    layer = std::move(next);
  }
  raise(Errc::NotFound, "plemelj_search", "no balanced type within depth " + std::to_string(bound));
}

SpreadCertificate spread_certificate(const WeakSolutionState& st) {
  const FuchsianSystem& sys = st.system;
  if (!in_read_off_form(sys)) raise(Errc::InvalidArgument, "spread_certificate", "system is not in read-off form");
  int n = sys.n();
  SpreadCertificate out;
  auto b = diag_ints(sys.residue_at_infinity());
  out.bound = static_cast<int>(sys.poles.size()) - 2;
  out.spread = n == 0 ? 0 : b.back() - b.front();
  out.within_bound = out.spread <= out.bound;
  if (out.within_bound) return out;
  for (int c = 1; c < n; ++c)
    if (b[static_cast<size_t>(c)] - b[static_cast<size_t>(c - 1)] > out.bound) {
      out.cut = c;
      break;
    }
  if (!out.cut) return out;
  int c = *out.cut;
  for (size_t a = 0; a < sys.residues.size(); ++a)
    if (!sys.residues[a].block(c, 0, n - c, c).is_zero())
      raise(Errc::CertificateInconsistent, "spread_certificate", "residue " + std::to_string(a) + " has a nonzero lower-left block");
  out.invariant_subspace = CMat::identity(n).cols_range(0, c);
  return out;
}

std::vector<CMat> stable_subspace_samples(const CMat& f) {
  int n = f.rows();
  std::vector<CMat> out;
  for (int k = 1; k < n; ++k)
    for (const auto& flag : jordan_samples(f, {k, n - k}, 200)) {
      bool dup = false;
      for (const auto& x : out) dup = dup || same_span(x, flag[0]);
      if (!dup) out.push_back(flag[0]);
    }
  return out;
}

std::vector<IndexCandidate> index_reduction_candidates(const WeakSolutionState& st, int pole) {
  std::vector<IndexCandidate> out;
  if (pole < 0 || pole >= static_cast<int>(st.system.poles.size())) raise(Errc::InvalidArgument, "index_reduction_candidates", "pole index out of range");
  const CMat& f1 = st.hn_flag.front();
  int index = st.type.triviality_index();
  for (const auto& w : stable_subspace_samples(st.system.residues[static_cast<size_t>(pole)])) {
    CMat cap = intersect(f1, w);
    if (cap.cols() > 0 && rank(cap) > 0) continue;
    WeakSolutionState ns = modify_adjacent(st, pole, w);
    if (ns.type.triviality_index() != index - rank(w))
      raise(Errc::CertificateInconsistent, "index_reduction_candidates", "triviality index did not drop by dim W");
    out.push_back({w, ns.type});
  }
  return out;
}

ExploreReport explore(const FuchsianSystem& sys, const ExploreBounds& bd) {
  ExploreReport rep;
  rep.universe = "down moves over W = 0 and Jordan-derived stable subspaces of each residue";
  if (bd.up_moves) rep.universe += "; scalar up moves";
  WeakSolutionState root = make_state(sys);
  int n = root.system.n();
  std::set<std::string> seen;
  std::vector<WeakSolutionState> states;
  auto record = [&](WeakSolutionState st, int depth, int parent) {
    ExploreNode node;
    node.depth = depth;
    node.type = st.type;
    node.key = dedup_key(st);
    node.log = st.log;
    node.strong = st.strong();
    node.parent = parent;
    int idx = static_cast<int>(rep.nodes.size());
    if (node.strong && rep.first_strong < 0) rep.first_strong = idx;
    bool zero = std::all_of(st.type.values.begin(), st.type.values.end(), [](int v) { return v == 0; });
    if (zero && rep.first_zero_type < 0) rep.first_zero_type = idx;
    rep.nodes.push_back(std::move(node));
    states.push_back(std::move(st));
  };
  seen.insert(dedup_key(root));
  record(root, 0, -1);
  std::deque<int> queue{0};
  while (!queue.empty() && !rep.budget_exceeded) {
    int cur = queue.front();
    queue.pop_front();
    if (rep.nodes[static_cast<size_t>(cur)].depth >= bd.max_depth) continue;
    std::vector<Move> moves;
    for (int s = 0; s < static_cast<int>(root.system.poles.size()); ++s) {
      moves.push_back(Move{Move::Down, s, CMat(n, 0)});
      try {
        for (auto& w : stable_subspace_samples(states[static_cast<size_t>(cur)].system.residues[static_cast<size_t>(s)]))
          moves.push_back(Move{Move::Down, s, w});
      } catch (const Error&) {
      }
      if (bd.up_moves) moves.push_back(Move{Move::Up, s, CMat(n, 0)});
    }
    for (const auto& m : moves) {
      WeakSolutionState ns;
      try {
        ns = apply(states[static_cast<size_t>(cur)], m);
      } catch (const Error&) {
        continue;
      }
      if (std::any_of(ns.type.values.begin(), ns.type.values.end(), [&](int v) { return std::abs(v) > bd.kappa_box; })) continue;
      if (!seen.insert(dedup_key(ns)).second) continue;
      if (rep.nodes.size() >= bd.max_nodes) {
        rep.budget_exceeded = true;
        break;
      }
      record(std::move(ns), rep.nodes[static_cast<size_t>(cur)].depth + 1, cur);
      queue.push_back(static_cast<int>(rep.nodes.size()) - 1);
    }
  }
  std::set<std::vector<int>> types;
  for (const auto& nd : rep.nodes) types.insert(nd.type.values);
  rep.reached_types.assign(types.begin(), types.end());
  return rep;
}

}  // namespace bt
