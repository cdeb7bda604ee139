#include <catch_amalgamated.hpp>

#include "bt/error.hpp"
#include "bt/lattice.hpp"
#include "gen.hpp"
#include "interval.hpp"

using namespace bt;

using testgen::mat2;

namespace {

std::vector<Lattice> interval_lattices() { return testgen::interval_lattices(2); }

}  // namespace

TEST_CASE("smith decomposition of a diagonal pair") {
  Lattice lam = Lattice::standard(2);
  Lattice m = Lattice::diagonal({1, -1});
  SmithData sd = smith_decomposition(lam, m);
  CHECK(sd.kappa == std::vector<int>{-1, 1});
  CHECK(sd.d() == 2);
  CHECK(sd.index() == 2);
  CHECK(reconstructs(sd, m));
}

TEST_CASE("smith decomposition of equal lattices is zero") {
  std::mt19937_64 rng(3);
  Lattice lam(testgen::random_laurent(rng, 3, -1, 1));
  SmithData sd = smith_decomposition(lam, lam);
  CHECK(sd.kappa == std::vector<int>{0, 0, 0});
}

TEST_CASE("smith decomposition of a non-diagonal example") {
  Lattice m(mat2(Series(1), Series(), Series(1), Series::z(2)));
  SmithData sd = smith_decomposition(Lattice::standard(2), m);
  CHECK(sd.kappa == std::vector<int>{0, 2});
  CHECK(det(m.basis).valuation() == 2);
  CHECK(reconstructs(sd, m));
}

TEST_CASE("distance and index examples") {
  Lattice lam = Lattice::standard(3);
  DistanceIndex di = distance_index(lam, Lattice::diagonal({0, 1, 3}));
  CHECK(di.d == 3);
  CHECK(di.index == 4);
  CHECK(distance_index(lam, lam.scaled(1)).d == 0);
  DistanceIndex d2 = distance_index(Lattice::standard(2), Lattice::diagonal({-1, 1}));
  CHECK(d2.d == 2);
  CHECK(d2.d == -d2.v - d2.v_reverse);
}

TEST_CASE("smith reconstruction and invariance on random lattices") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    PrecisionScope ps(24);
    int n = 2 + trial % 3;
    SMat g = testgen::random_laurent(rng, n, -1, 2);
    Lattice lam = Lattice::standard(n);
    Lattice m(g);
    SmithData sd = smith_decomposition(lam, m);
    CHECK(reconstructs(sd, m));
    CHECK(in_gl_h(sd.coords));
    CHECK(std::is_sorted(sd.kappa.begin(), sd.kappa.end()));
    SMat u = testgen::random_glh(rng, n, 1);
    SMat w = testgen::random_glh(rng, n, 1);
    SmithData sd2 = smith_decomposition(Lattice(lam.basis * w), Lattice(g * u));
    CHECK(sd2.kappa == sd.kappa);
    DistanceIndex di = distance_index(lam, m);
    CHECK(di.d == -di.v - di.v_reverse);
    CHECK(di.d == distance_index(m, lam).d);
  }
}

TEST_CASE("triangle inequality on the n = 2 interval") {
  auto ls = interval_lattices();
  CHECK(ls.size() > 10);
  size_t n = ls.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) d[i][j] = smith_decomposition(ls[i], ls[j]).d();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      CHECK(d[i][j] == d[j][i]);
      for (size_t k = 0; k < n; ++k) CHECK(d[i][k] <= d[i][j] + d[j][k]);
    }
}

TEST_CASE("module sum and intersection") {
  Lattice a = Lattice::diagonal({0, 2});
  Lattice b = Lattice::diagonal({1, 1});
  CHECK(sum(a, b) == Lattice::diagonal({0, 1}));
  CHECK(intersection(a, b) == Lattice::diagonal({1, 2}));
}

TEST_CASE("quotient images of the interval endpoints") {
  Lattice lam = Lattice::standard(2);
  Lattice lamp = lam.scaled(1);
  CHECK(quotient_psi(lam, lamp, lam).subspace.cols() == 2);
  CHECK(quotient_psi(lam, lamp, lamp).subspace.cols() == 0);
  QuotientImage q = quotient_psi(lam, lamp, Lattice::diagonal({0, 1}));
  REQUIRE(q.subspace.cols() == 1);
  CMat e1(2, 1);
  e1(0, 0) = GQ(1);
  CHECK(contains(q.subspace, e1));
  CHECK_THROWS_AS(quotient_psi(lamp, lam, lam), Error);
}

TEST_CASE("quotient map is an order isomorphism onto z-stable subspaces") {
  auto ls = interval_lattices();
  Lattice lam = Lattice::standard(2);
  for (const Lattice& lamp : {lam.scaled(2), Lattice::diagonal({0, 2}), Lattice::diagonal({1, 2})}) {
    std::vector<Lattice> inside;
    for (const auto& m : ls)
      if (contains(m, lamp)) inside.push_back(m);
    std::vector<CMat> images;
    for (const auto& m : inside) {
      QuotientImage q = quotient_psi(lam, lamp, m);
      CHECK(is_invariant(q.z_action, q.subspace));
      int colen = 0;
      for (int k : smith_decomposition(m, lamp).kappa) colen += k;
      CHECK(q.subspace.cols() == colen);
      images.push_back(q.subspace);
    }
    for (size_t i = 0; i < inside.size(); ++i)
      for (size_t j = 0; j < inside.size(); ++j) {
        bool lat = contains(inside[j], inside[i]);
        bool sub = contains(images[j], images[i]);
        CHECK(lat == sub);
      }
  }
}

TEST_CASE("relative flag examples") {
  Lattice lam = Lattice::standard(2);
  AdmissiblePair ap = relative_flag(lam, Lattice::diagonal({0, 2}));
  REQUIRE(ap.flag.size() == 2);
  CHECK(ap.signature() == std::vector<int>{1, 1});
  CMat e1(2, 1);
  e1(0, 0) = GQ(1);
  CHECK(contains(ap.flag[0], e1));
  CHECK(rank(ap.flag[0]) == 1);
  CHECK(ap.admissible());

  AdmissiblePair triv = relative_flag(Lattice::standard(3), Lattice::standard(3));
  CHECK(triv.flag.size() == 1);
  CHECK(triv.signature() == std::vector<int>{3});

  AdmissiblePair three = relative_flag(Lattice::standard(3), Lattice::diagonal({0, 0, 2}));
  CHECK(three.signature() == std::vector<int>{2, 1});
  CHECK(three.index() == 4);
}
