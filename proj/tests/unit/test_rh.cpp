#include <catch_amalgamated.hpp>

#include "bt/error.hpp"
#include "bt/rh.hpp"
#include "rhgen.hpp"

using namespace bt;

namespace {

CMat m2(long a, long b, long c, long d) { return CMat::from_ints({{a, b}, {c, d}}); }

CMat col(std::initializer_list<long> v) {
  CMat c(static_cast<int>(v.size()), 1);
  int i = 0;
  for (long x : v) c(i++, 0) = GQ(x);
  return c;
}

CMat scalar(const GQ& x) {
  CMat m(1, 1);
  m(0, 0) = x;
  return m;
}

FuchsianSystem two_pole(const CMat& r0, const CMat& r1) { return FuchsianSystem{{GQ(0), GQ(1)}, {r0, r1}}; }

// type (1,0) system with upper triangular residues at 0 and 1
FuchsianSystem upper_triangular_10() { return two_pole(m2(2, 3, 0, 1), m2(-1, -3, 0, -1)); }

// Start from a zero-sum system, go up and then down along an eigenline at pole 0.
struct Reversed {
  FuchsianSystem start;
  WeakSolutionState weak;
};

Reversed reverse_engineered(std::mt19937_64& rng) {
  while (true) {
    FuchsianSystem sys = testgen::random_zero_sum_system(rng, 2, 2);
    EigenData ed = eigen_data(sys.residues[0]);
    if (!ed.diagonalizable() || ed.eigenvalues.size() < 2) continue;
    WeakSolutionState st = modify_up(make_state(sys), 0);
    return {sys, modify_adjacent(st, 0, ed.eigenspaces[0])};
  }
}

bool is_read_off_state(const WeakSolutionState& st) {
  CMat b = st.system.residue_at_infinity();
  std::vector<GQ> d;
  for (int v : st.type.values) d.push_back(GQ(-v));
  return b == CMat::diag(d) && LinearFuchsianModel::of(st.system).sums_to_zero();
}

}  // namespace

TEST_CASE("type read off at infinity") {
  GQ a = GQ::frac(1, 3);
  FuchsianSystem line{{GQ(0), GQ(1)}, {scalar(a), scalar(GQ(2) - a)}};
  REQUIRE(type_and_hn(line).type.values == std::vector<int>{2});

  FuchsianSystem zero = two_pole(m2(1, 2, 0, 3), m2(-1, -2, 0, -3));
  ReadOff z = type_and_hn(zero);
  REQUIRE(z.type.values == std::vector<int>{0, 0});
  REQUIRE(z.type.balanced());
  REQUIRE(z.apparent);

  ReadOff r = type_and_hn(upper_triangular_10());
  REQUIRE(r.type.values == std::vector<int>{1, 0});
  REQUIRE(r.hn_flag.size() == 2);
  REQUIRE(r.hn_flag[0] == col({1, 0}));
  REQUIRE(r.conjugation.is_identity());
  REQUIRE(r.apparent);
}

TEST_CASE("type_and_hn conjugates to read-off form") {
  // B = [[0,1],[0,-1]]: eigenvalue -1 must come first
  FuchsianSystem sys = two_pole(m2(0, -1, 0, 0), m2(0, 0, 0, 1));
  ReadOff r = type_and_hn(sys);
  REQUIRE(in_read_off_form(r.system));
  REQUIRE(r.type.values == std::vector<int>{1, 0});
  CMat k = r.conjugation;
  for (size_t a = 0; a < 2; ++a) REQUIRE(r.system.residues[a] == inverse(k) * sys.residues[a] * k);
  REQUIRE(r.system.residue_at_infinity() == CMat::diag({GQ(-1), GQ(0)}));
}

TEST_CASE("type_and_hn rejects bad residues at infinity") {
  auto code = [](const FuchsianSystem& s) {
    try {
      type_and_hn(s);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvalidArgument;
  };
  REQUIRE(code(two_pole(m2(0, 1, 0, 0), m2(0, 0, 0, 0))) == Errc::NotLogarithmicAtInfinity);
  FuchsianSystem half{{GQ(0), GQ(1)}, {scalar(GQ::frac(1, 2)), scalar(GQ(0))}};
  REQUIRE(code(half) == Errc::NotLogarithmicAtInfinity);
  // charpoly x^2 - 2
  REQUIRE(code(two_pole(m2(0, 1, 2, 0), m2(0, 0, 0, 0))) == Errc::NotLogarithmicAtInfinity);
}

TEST_CASE("apparent condition at infinity") {
  REQUIRE(is_apparent_at_infinity(upper_triangular_10()));
  // same B, but sum a (R_a)_21 = -1
  FuchsianSystem bad = two_pole(m2(0, 0, 1, 0), m2(1, 0, -1, 0));
  REQUIRE(in_read_off_form(bad));
  REQUIRE_FALSE(is_apparent_at_infinity(bad));
  REQUIRE_THROWS_AS(modify_adjacent(make_state(bad), 0, CMat(2, 0)), Error);
}

TEST_CASE("modify_adjacent basic examples") {
  WeakSolutionState st = make_state(upper_triangular_10());
  WeakSolutionState same = modify_adjacent(st, 0, CMat::identity(2));
  REQUIRE(same.system.residues == st.system.residues);
  REQUIRE(same.log.empty());

  GQ a = GQ::frac(1, 3);
  WeakSolutionState line = make_state(FuchsianSystem{{GQ(0), GQ(1)}, {scalar(a), scalar(GQ(2) - a)}});
  WeakSolutionState down = modify_adjacent(line, 1, CMat(1, 0));
  REQUIRE(down.type.values == std::vector<int>{1});
  REQUIRE(down.system.residues[1] == scalar(GQ(2) - a - GQ(1)));
  REQUIRE(down.system.residues[0] == scalar(a));
  WeakSolutionState up = modify_up(down, 1);
  REQUIRE(up.type.values == std::vector<int>{2});
  REQUIRE(up.system.residues == line.system.residues);

  try {
    modify_adjacent(st, 0, col({1, 1}));
    FAIL("expected SubspaceNotStable");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::SubspaceNotStable);
  }
}

TEST_CASE("modification along an eigenline transversal to the top of the flag") {
  WeakSolutionState st = make_state(upper_triangular_10());
  // residue at 1 is [[-1,-3],[0,-1]]: only e1 is stable; residue at 0 has eigenline (3,-1) for eigenvalue 1
  CMat w = col({3, -1});
  REQUIRE(is_invariant(st.system.residues[0], w));
  WeakSolutionState ns = modify_adjacent(st, 0, w);
  TypeVector predicted = gs_modify_type(st.type, st.hn_flag, w);
  REQUIRE(ns.type.values == predicted.values);
  REQUIRE(ns.type.values == std::vector<int>{0, 0});
  REQUIRE(is_read_off_state(ns));
  REQUIRE(is_apparent_at_infinity(ns.system));
  REQUIRE(charpoly(ns.system.residues[1]) == charpoly(st.system.residues[1]));
  // W inside F1 keeps the top degree: (1,0) -> (1,-1)
  WeakSolutionState other = modify_adjacent(st, 0, col({1, 0}));
  REQUIRE(other.type.values == std::vector<int>{1, -1});
}

TEST_CASE("modify_adjacent invariants on random weak solutions") {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + trial % 3, p = 2 + (trial / 3) % 2;
    WeakSolutionState st = make_state(testgen::random_zero_sum_system(rng, n, p));
    for (int step = 0; step < 3; ++step) {
      auto rm = testgen::random_move(rng, st);
      if (rm.move.kind == Move::Up) {
        st = apply(st, rm.move);
        continue;
      }
      WeakSolutionState ns = apply(st, rm.move);
      const CMat& w = rm.move.subspace;
      int dimw = w.cols() == 0 ? 0 : rank(w);
      if (dimw < n) {
        REQUIRE(ns.type.values == gs_modify_type(st.type, st.hn_flag, w).values);
        REQUIRE(ns.type.degree() == st.type.degree() - (n - dimw));
      }
      REQUIRE(is_read_off_state(ns));
      REQUIRE(is_apparent_at_infinity(ns.system));
      for (int a = 0; a < p; ++a)
        if (a != rm.move.pole) REQUIRE(charpoly(ns.system.residues[static_cast<size_t>(a)]) == charpoly(st.system.residues[static_cast<size_t>(a)]));
      // the residue at s is shifted by T on the quotient: trace drops by codim W
      GQ tr_old, tr_new;
      for (int i = 0; i < n; ++i) {
        tr_old += st.system.residues[static_cast<size_t>(rm.move.pole)](i, i);
        tr_new += ns.system.residues[static_cast<size_t>(rm.move.pole)](i, i);
      }
      REQUIRE(tr_new == tr_old - GQ(n - dimw));
      st = ns;
      ++checked;
    }
  }
  REQUIRE(checked > 80);
}

TEST_CASE("replaying a log reproduces the state") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    FuchsianSystem sys = testgen::random_zero_sum_system(rng, 2 + trial % 2, 2 + trial % 2);
    WeakSolutionState st = make_state(sys);
    for (int m = 0; m < 3; ++m) st = apply(st, testgen::random_move(rng, st).move);
    WeakSolutionState again = replay(sys, st.log);
    REQUIRE(again.system.residues == st.system.residues);
    REQUIRE(again.type.values == st.type.values);
  }
}

TEST_CASE("Plemelj search examples") {
  FuchsianSystem zero = two_pole(m2(1, 2, 0, 3), m2(-1, -2, 0, -3));
  WeakSolutionState done = plemelj_search(zero, 0);
  REQUIRE(done.log.empty());
  REQUIRE(done.strong());

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    Reversed rv = reverse_engineered(rng);
    REQUIRE(rv.weak.type.values == std::vector<int>{1, 0});
    WeakSolutionState got = plemelj_search(rv.weak.system, 0);
    REQUIRE(got.strong());
    REQUIRE(got.log.size() == 1);
    CMat b = got.system.residue_at_infinity();
    REQUIRE(b == b(0, 0) * CMat::identity(2));
  }

  FuchsianSystem nilpotent = two_pole(m2(1, 1, 0, 1), m2(-1, -1, 0, -1));
  try {
    plemelj_search(nilpotent, 0);
    FAIL("expected NotDiagonalizable");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::NotDiagonalizable);
  }
}

TEST_CASE("spread certificate") {
  FuchsianSystem zero = two_pole(m2(1, 2, 0, 3), m2(-1, -2, 0, -3));
  REQUIRE(spread_certificate(make_state(zero)).within_bound);

  SpreadCertificate c = spread_certificate(make_state(upper_triangular_10()));
  REQUIRE_FALSE(c.within_bound);
  REQUIRE(c.spread == 1);
  REQUIRE(c.cut == 1);
  REQUIRE(c.invariant_subspace == col({1, 0}));

  // three poles, type (1,0,0)
  CMat r0 = CMat::from_ints({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  FuchsianSystem three{{GQ(0), GQ(1), GQ(-1)}, {r0, CMat(3, 3), CMat(3, 3)}};
  WeakSolutionState st = make_state(three);
  REQUIRE(st.type.values == std::vector<int>{1, 0, 0});
  SpreadCertificate c3 = spread_certificate(st);
  REQUIRE(c3.within_bound);
  REQUIRE(c3.bound == 1);

  // read-off form but not apparent: the claimed zero block is not zero
  WeakSolutionState bad = make_state(two_pole(m2(0, 0, 1, 0), m2(1, 0, -1, 0)));
  try {
    spread_certificate(bad);
    FAIL("expected CertificateInconsistent");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::CertificateInconsistent);
  }
}

TEST_CASE("index reduction candidates") {
  // residue J2(0) at 0 with F1 = image of J
  FuchsianSystem sys = two_pole(m2(0, 1, 0, 0), m2(1, -1, 0, 0));
  WeakSolutionState st = make_state(sys);
  REQUIRE(st.type.values == std::vector<int>{1, 0});
  REQUIRE(st.hn_flag[0] == col({1, 0}));
  REQUIRE(index_reduction_candidates(st, 0).empty());
  auto c = index_reduction_candidates(st, 1);
  REQUIRE(c.size() == 1);
  REQUIRE(rank(hcat(c[0].subspace, col({1, 1}))) == 1);
  REQUIRE(c[0].new_type.values == std::vector<int>{0, 0});

  // scalar residue: every sampled complement of F1 qualifies
  FuchsianSystem scal = two_pole(CMat::identity(2), m2(0, 0, 0, -1));
  WeakSolutionState ss = make_state(scal);
  REQUIRE(ss.type.values == std::vector<int>{1, 0});
  for (const auto& cand : index_reduction_candidates(ss, 0)) {
    REQUIRE(rank(hcat(cand.subspace, col({1, 0}))) == 2);
    REQUIRE(cand.new_type.triviality_index() == 0);
  }
}

TEST_CASE("stable subspace samples are invariant") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    CMat f = testgen::random_split_residue(rng, 3);
    for (const auto& w : stable_subspace_samples(f)) REQUIRE(is_invariant(f, w));
  }
}

TEST_CASE("explore on a rank-1 system walks the integer line") {
  GQ a = GQ::frac(1, 3);
  FuchsianSystem line{{GQ(0), GQ(1)}, {scalar(a), scalar(GQ(2) - a)}};
  ExploreReport rep = explore(line, {3, 4, 200, true});
  REQUIRE_FALSE(rep.budget_exceeded);
  REQUIRE(rep.first_zero_type >= 0);
  REQUIRE(rep.nodes[static_cast<size_t>(rep.first_zero_type)].depth == 2);
  std::set<int> degs;
  for (const auto& t : rep.reached_types) degs.insert(t[0]);
  for (int k = -1; k <= 4; ++k) REQUIRE(degs.count(k) == 1);
  for (const auto& nd : rep.nodes) {
    WeakSolutionState st = replay(line, nd.log);
    REQUIRE(st.type.values == nd.type.values);
    REQUIRE(dedup_key(st) == nd.key);
  }
}

TEST_CASE("explore finds the Plemelj solution at depth 1") {
  std::mt19937_64 rng(11);
  Reversed rv = reverse_engineered(rng);
  ExploreReport rep = explore(rv.weak.system, {1, 3, 500, true});
  REQUIRE(rep.first_strong >= 0);
  REQUIRE(rep.nodes[static_cast<size_t>(rep.first_strong)].depth == 1);
  REQUIRE_FALSE(rep.universe.empty());
}

TEST_CASE("explore budget gives a partial report") {
  std::mt19937_64 rng(13);
  FuchsianSystem sys = testgen::random_zero_sum_system(rng, 2, 3);
  ExploreReport rep = explore(sys, {4, 6, 5, true});
  REQUIRE(rep.budget_exceeded);
  REQUIRE(rep.nodes.size() == 5);
}

TEST_CASE("explore with nilpotent residues") {
  // B = -(J + J^T) has eigenvalues 1 and -1
  FuchsianSystem sys = two_pole(m2(0, 1, 0, 0), m2(0, 0, 1, 0));
  ExploreReport rep = explore(sys, {2, 2, 500, true});
  REQUIRE(rep.nodes.front().type.values == std::vector<int>{1, -1});
  REQUIRE(rep.first_strong < 0);
  REQUIRE_FALSE(rep.reached_types.empty());
}
