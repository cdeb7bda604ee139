#include <catch_amalgamated.hpp>

#include <algorithm>

#include "bt/bg.hpp"
#include "bt/error.hpp"
#include "gen.hpp"
#include "interval.hpp"

using namespace bt;
using testgen::mat2;

namespace {

CMat cols(int n, std::initializer_list<int> which) {
  CMat id = CMat::identity(n);
  CMat out(n, static_cast<int>(which.size()));
  int j = 0;
  for (int w : which) out.set_block(0, j++, id.cols_range(w, w + 1));
  return out;
}

std::vector<int> neg_sorted(std::vector<int> k) {
  for (int& x : k) x = -x;
  std::sort(k.begin(), k.end(), std::greater<>());
  return k;
}

bool is_identity_perm(const std::vector<int>& w) {
  for (size_t i = 0; i < w.size(); ++i)
    if (w[i] != static_cast<int>(i)) return false;
  return true;
}

// BG property: the trivial lattice sits at distance equal to the spread of the type.
void check_bg(const Lattice& lam, const BGTrivialisation& bg) {
  CHECK(Lattice(bg.bg_basis) == lam);
  CHECK(is_unimodular_poly_inv(bg.global_form.basis));
  CHECK(std::is_sorted(bg.divisors.begin(), bg.divisors.end()));
  SmithData sd = smith_decomposition(bg.trivial_lattice, lam);
  CHECK(sd.kappa == bg.divisors);
}

}  // namespace

TEST_CASE("type vector basics") {
  TypeVector t({0, 2, 2, -1});
  CHECK(t.values == std::vector<int>{2, 2, 0, -1});
  CHECK(t.degree() == 3);
  CHECK(t.triviality_index() == 5);
  CHECK(t.multiplicities() == std::vector<int>{2, 1, 1});
  CHECK(!t.balanced());
  CHECK(TypeVector({1, 1}).balanced());
}

TEST_CASE("type modification examples") {
  TypeVector a({2, 0});
  std::vector<CMat> hn{cols(2, {0}), CMat::identity(2)};
  CHECK(gs_modify_type(a, hn, cols(2, {1})).values == std::vector<int>{1, 0});
  CHECK(gs_modify_type(a, hn, CMat::identity(2)).values == std::vector<int>{2, 0});
  CHECK(gs_modify_type(a, hn, CMat(2, 0)).values == std::vector<int>{1, -1});
  // cross-check the first case with the factorisation oracle on diag(z^-1, 1)
  auto bf = birkhoff_factor_oracle(SMat::zdiag({-1, 0}));
  CHECK(neg_sorted(bf.kappa) == std::vector<int>{1, 0});
  CHECK_THROWS_AS(gs_modify_type(a, {CMat::identity(2)}, cols(2, {1})), Error);
  CHECK_THROWS_AS(gs_modify_type(TypeVector({1, 1}), hn, cols(2, {1})), Error);
}

TEST_CASE("bruhat factorisation") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + trial % 4;
    CMat u = testgen::random_invertible(rng, n);
    if (trial % 3 == 0)  // push some samples into small cells
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i > j) u(i, j) = GQ();
    if (det(u).is_zero()) continue;
    BruhatCell bc = bruhat_factor(u);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) CHECK(bc.q(i, j).is_zero());
    CMat pw = CMat::permutation(bc.w);
    CMat rest = pw.transpose() * inverse(bc.q) * u;  // should be upper unitriangular
    for (int i = 0; i < n; ++i) {
      CHECK(rest(i, i) == GQ(1));
      for (int j = 0; j < i; ++j) CHECK(rest(i, j).is_zero());
    }
  }
  BruhatCell anti = bruhat_factor(CMat::from_ints({{0, 1}, {1, 0}}));
  CHECK(anti.w == std::vector<int>{1, 0});
  CHECK(bruhat_factor(CMat::identity(3)).w == std::vector<int>{0, 1, 2});
}

TEST_CASE("trivialisation examples") {
  Lattice diag = Lattice::diagonal({0, 2, 1});
  BGTrivialisation bg = bg_trivialise(diag);
  CHECK(bg.type.values == std::vector<int>{0, -1, -2});
  for (const auto& st : bg.steps) CHECK(is_identity_perm(st.w));
  check_bg(diag, bg);

  BGTrivialisation same = bg_trivialise(Lattice::standard(3));
  CHECK(same.type.values == std::vector<int>{0, 0, 0});
  CHECK(same.steps.empty());

  // A twisted lattice: elementary divisors (-1, 1) but the bundle is trivial.
  SMat g = mat2(Series(1), Series(), Series::z(-1), Series(1));
  Lattice lam(g);
  CHECK(smith_decomposition(Lattice::standard(2), lam).kappa == std::vector<int>{-1, 1});
  BGTrivialisation tw = bg_trivialise(lam);
  CHECK(tw.type.values == std::vector<int>{0, 0});
  bool twisted = false;
  for (const auto& st : tw.steps) twisted = twisted || !is_identity_perm(st.w);
  CHECK(twisted);
  CHECK(neg_sorted(birkhoff_factor_oracle(g).kappa) == tw.type.values);
  check_bg(lam, tw);

  CHECK_THROWS_AS(bg_trivialise(lam, Form(SMat::zdiag({1, 0}))), Error);
}

TEST_CASE("trivialisation agrees with the factorisation oracle") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + trial % 3;
    int lo = -(trial % 3), hi = trial % 2 + 1;
    SMat g = testgen::random_laurent(rng, n, lo, hi);
    Lattice lam(g);
    BGTrivialisation bg = bg_trivialise(lam);
    BirkhoffFactorization bf = birkhoff_factor_oracle(g);
    CHECK(neg_sorted(bf.kappa) == bg.type.values);
    check_bg(lam, bg);
    CHECK(is_unimodular_poly_inv(bf.g_minus));
    CHECK(in_gl_h(bf.g_plus));
    CHECK(equals(bf.g_minus * SMat::zdiag(bf.kappa) * bf.g_plus, g) == Tri::True);
  }
}

TEST_CASE("trivialisation from a transported trivial lattice") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + trial % 2;
    SMat pi = testgen::random_monopole(rng, n, 2);
    SMat g = testgen::random_laurent(rng, n, -1, 1);
    Lattice lam(g);
    BGTrivialisation a = bg_trivialise(lam);
    BGTrivialisation b = bg_trivialise(lam, Form(pi));
    CHECK(a.type.values == b.type.values);
    check_bg(lam, b);
    // two BG bases of one bundle differ by a staged parabolic matrix
    SMat p = inverse(a.bg_basis) * b.bg_basis;
    std::vector<int> k;
    for (int x : a.divisors) k.push_back(-x);
    CHECK(k_staged_parabolic_member(p, k));
  }
}

TEST_CASE("distance to the BG trivial lattice is minimal") {
  // enumerate trivial lattices Pi h^2 for words in elementary monopoles
  std::vector<SMat> gens;
  for (int k = 0; k <= 2; ++k)
    for (int c : {-1, 1}) {
      gens.push_back(mat2(Series(1), Series::monomial(GQ(c), -k), Series(), Series(1)));
      gens.push_back(mat2(Series(1), Series(), Series::monomial(GQ(c), -k), Series(1)));
    }
  std::vector<SMat> words{SMat::identity(2)};
  for (int depth = 0; depth < 2; ++depth) {
    std::vector<SMat> next;
    for (const auto& w : words)
      for (const auto& e : gens) next.push_back(w * e);
    words.insert(words.end(), next.begin(), next.end());
  }
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 12; ++trial) {
    SMat g = testgen::random_laurent(rng, 2, -1, 1);
    Lattice lam(g);
    BGTrivialisation bg = bg_trivialise(lam);
    int d_bg = smith_decomposition(bg.trivial_lattice, lam).d();
    int i_bg = smith_decomposition(bg.trivial_lattice, lam).index();
    CHECK(d_bg == bg.type.values.front() - bg.type.values.back());
    CHECK(i_bg == bg.type.triviality_index());
    int best_d = 1 << 20, best_i = 1 << 20;
    for (const auto& w : words) {
      SmithData sd = smith_decomposition(Lattice(w), lam);
      best_d = std::min(best_d, sd.d());
      best_i = std::min(best_i, sd.index());
    }
    CHECK(d_bg <= best_d);
    CHECK(i_bg <= best_i);
    // the family contains the BG lattice when it is reached by short words
    bool reached = false;
    for (const auto& w : words) reached = reached || Lattice(w) == bg.trivial_lattice;
    if (reached) {
      CHECK(d_bg == best_d);
      CHECK(i_bg == best_i);
    }
  }
}

TEST_CASE("type modification composes along geodesics") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + trial % 2;
    Lattice target(testgen::random_laurent(rng, n, 0, 2));
    GeodesicPath path = geodesic(Lattice::standard(n), target);
    BGTrivialisation cur = bg_trivialise(path.vertices[0]);
    TypeVector t = cur.type;
    for (int k = 0; k < path.length(); ++k) {
      const Lattice& next = path.vertices[static_cast<size_t>(k + 1)];
      AdmissiblePair rf = relative_flag(Lattice(cur.bg_basis), next);
      CMat w = rf.kappa.front() == 0 ? rf.flag.front() : CMat(n, 0);
      if (rf.kappa.back() == 0) w = CMat::identity(n);
      t = gs_modify_type(t, hn_flag(cur), w);
      cur = bg_trivialise(next);
      CHECK(t.values == cur.type.values);
    }
    CHECK(t.values == bg_trivialise(path.vertices.back()).type.values);
  }
}

TEST_CASE("flag lifted into another form stays trivialising") {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 15; ++trial) {
    int n = 2 + trial % 2;
    Lattice lam(testgen::random_laurent(rng, n, 0, 2));
    BGTrivialisation bg = bg_trivialise(lam);
    AdmissiblePair rf = relative_flag(bg.trivial_lattice, lam);
    Form y(testgen::random_monopole(rng, n, 1));
    Lattice lifted = form_lift(y, rf);
    BGTrivialisation again = bg_trivialise(lifted, y);
    CHECK(again.type.values == bg.type.values);
    CHECK(smith_decomposition(y.lattice(), lifted).kappa == again.divisors);
  }
}

TEST_CASE("permutation lemma examples") {
  PermutationLemma id = permutation_lemma(SMat::identity(3), {2, 0, 1});
  CHECK(id.sigma_identity());
  CHECK(equals(id.pi, SMat::identity(3)) == Tri::True);
  CHECK(equals(id.q, SMat::identity(3)) == Tri::True);

  PermutationLemma one = permutation_lemma(SMat(CMat::from_ints({{5}})), {3});
  CHECK(one.pi.is_exact());
  CHECK(one.pi.max_degree() == 0);
  CHECK(one.pi.min_exponent() == 0);

  PrecisionScope ps(16);
  SMat p = mat2(Series::z(1), Series(1), Series(1), Series());
  std::vector<int> kappa{0, 2};
  PermutationLemma r = permutation_lemma(p, kappa);
  CHECK(r.sigma == std::vector<int>{1, 0});
  CHECK(r.kappa_sigma == std::vector<int>{2, 0});
  PermutationLemmaCheck ck = check_permutation_lemma(p, kappa, r);
  CHECK(ck.first_identity);
  CHECK(ck.second_identity);
  CHECK(ck.unimodular);
  CHECK(ck.box);
}

TEST_CASE("permutation lemma on random inputs") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    PrecisionScope ps(20);
    int n = 2 + trial % 3;
    SMat p = testgen::random_glh(rng, n, 2);
    if (trial % 2 == 0) p = inverse(p);  // infinite tails
    std::vector<int> kappa = testgen::random_ints(rng, n, -1, 3);
    PermutationLemma r = permutation_lemma(p, kappa);
    PermutationLemmaCheck ck = check_permutation_lemma(p, kappa, r);
    CHECK(ck.first_identity);
    CHECK(ck.second_identity);
    CHECK(ck.unimodular);
    CHECK(ck.box);
    std::vector<int> ks = r.kappa_sigma, k = kappa;
    std::sort(ks.begin(), ks.end());
    std::sort(k.begin(), k.end());
    CHECK(ks == k);
    for (int i = 0; i < n; ++i) CHECK(r.kappa_sigma[static_cast<size_t>(i)] == kappa[static_cast<size_t>(r.sigma[static_cast<size_t>(i)])]);
  }
}

TEST_CASE("factorisation oracle examples") {
  auto d = birkhoff_factor_oracle(SMat::zdiag({2, -1}));
  CHECK(d.kappa == std::vector<int>{-1, 2});
  auto u = birkhoff_factor_oracle(mat2(Series(1), Series::z(-1), Series(), Series(1)));
  CHECK(u.kappa == std::vector<int>{0, 0});
  auto h = birkhoff_factor_oracle(mat2(Series(1), Series::z(1), Series::z(2), Series(3)));
  CHECK(h.kappa == std::vector<int>{0, 0});
  auto s = birkhoff_factor_oracle(mat2(Series::z(1), Series(1), Series(), Series::z(-1)));
  CHECK(s.kappa[0] + s.kappa[1] == 0);
  CHECK(equals(s.g_minus * SMat::zdiag(s.kappa) * s.g_plus, mat2(Series::z(1), Series(1), Series(), Series::z(-1))) == Tri::True);
  CHECK_THROWS_AS(birkhoff_factor_oracle(mat2(Series(1), Series(1), Series(1), Series(1))), Error);
}

TEST_CASE("monopole interpolation") {
  CHECK(equals(interpolate_monopole({GQ(0)}, {CMat::identity(2)}), SMat::identity(2)) == Tri::True);
  CMat c = CMat::from_ints({{2, 1}, {1, 1}});
  CHECK(equals(interpolate_monopole({GQ(0), GQ(3)}, {c, c}), SMat(c)) == Tri::True);
  CMat c1 = CMat::from_ints({{1, 1}, {0, 1}}), c2 = CMat::from_ints({{1, 0}, {1, 1}});
  SMat pi = interpolate_monopole({GQ(0), GQ(1)}, {c1, c2});
  CHECK(pi.eval(GQ(0)) == c1);
  CHECK(pi.eval(GQ(1)) == c2);
  CHECK(is_unimodular_poly(pi));
  CHECK(det(pi).equals(Series(1)) == Tri::True);
  CHECK_THROWS_AS(interpolate_monopole({GQ(0), GQ(1)}, {c1, CMat::from_ints({{2, 0}, {0, 2}})}), Error);

  std::mt19937_64 rng(48);
  for (int trial = 0; trial < 15; ++trial) {
    int n = 2 + trial % 3;
    int pts = 1 + trial % 4;
    std::vector<GQ> s;
    std::vector<CMat> vals;
    CMat base = testgen::random_invertible(rng, n);
    GQ dt = det(base);
    for (int i = 0; i < pts; ++i) {
      s.push_back(GQ(i * 2 - 1));
      CMat m = testgen::random_invertible(rng, n);
      // rescale the first row so all determinants agree
      GQ f = dt / det(m);
      for (int j = 0; j < n; ++j) m(0, j) *= f;
      vals.push_back(m);
    }
    SMat out = interpolate_monopole(s, vals, static_cast<std::uint64_t>(trial));
    for (int i = 0; i < pts; ++i) CHECK(out.eval(s[static_cast<size_t>(i)]) == vals[static_cast<size_t>(i)]);
    CHECK(is_unimodular_poly(out));
  }
}

TEST_CASE("staged parabolic membership") {
  CHECK(k_staged_parabolic_member(SMat(CMat::from_ints({{2, 0}, {0, 3}})), {1, 0}));
  CHECK(k_staged_parabolic_member(mat2(Series(1), Series::z(1), Series(), Series(1)), {1, 0}));
  CHECK(!k_staged_parabolic_member(mat2(Series(1), Series(), Series::z(1), Series(1)), {1, 0}));
}
