#pragma once

#include <cstdint>
#include <vector>

#include "bt/building.hpp"

namespace bt {

// Nonincreasing integer type of a bundle on the projective line.
struct TypeVector {
  std::vector<int> values;

  TypeVector() = default;
  explicit TypeVector(std::vector<int> v);  // sorts nonincreasing
  int degree() const;
  int triviality_index() const;  // sum(a_1 - a_i)
  std::vector<int> multiplicities() const;
  bool balanced() const;
};

// Type after modifying the stalk to the lattice whose image in the fiber is W.
// hn_flag components are nested subspaces with dims n_1, n_1+n_2, ...
TypeVector gs_modify_type(const TypeVector& a, const std::vector<CMat>& hn_flag, const CMat& w);

struct BGStep {
  std::vector<int> divisors;  // elementary divisors of the target relative to the current vertex
  std::vector<int> step;      // the 0/1 part consumed at this step
  std::vector<int> cell;      // Bruhat cell of the constant gauge: column j pivots in row w[j]
  std::vector<int> w;         // the same cell modulo equal divisors and equal steps (the twist)
  std::vector<int> sort;      // permutation applied to re-sort afterwards
};

struct BGTrivialisation {
  Lattice trivial_lattice;     // Pi h^n
  Form global_form;            // Pi C^n
  SMat bg_basis;               // Pi z^divisors, a basis of the target lattice
  std::vector<int> divisors;   // nondecreasing
  TypeVector type;             // -divisors
  int shift = 0;               // v_M(lam)
  std::vector<BGStep> steps;
};

// Walks from the trivial lattice spanned by `m` (a basis unimodular in z^{-1})
// toward lam, keeping a trivialisation at every vertex.
BGTrivialisation bg_trivialise(const Lattice& lam, const Form& m);
BGTrivialisation bg_trivialise(const Lattice& lam);

// HN flag of the bundle in the fiber lam/m lam, in coordinates of the BG basis.
std::vector<CMat> hn_flag(const BGTrivialisation& bg);

// U = Q P_w Q'^{-1} with Q, Q' upper triangular; returns Q and w.
struct BruhatCell {
  CMat q;
  std::vector<int> w;  // column j -> row w[j]
};
BruhatCell bruhat_factor(const CMat& u);

struct PermutationLemma {
  std::vector<int> sigma;  // kappa_sigma(i) = kappa(sigma(i))
  std::vector<int> kappa_sigma;
  SMat pi;       // polynomial in t^{-1}
  SMat q;        // in GL_n(h)
  SMat p_tilde;  // in GL_n(h)
  bool sigma_identity() const;
};

PermutationLemma permutation_lemma(const SMat& p, const std::vector<int>& kappa);

struct PermutationLemmaCheck {
  bool first_identity = false;
  bool second_identity = false;
  bool unimodular = false;
  bool box = false;
  bool ok() const { return first_identity && second_identity && unimodular && box; }
};
PermutationLemmaCheck check_permutation_lemma(const SMat& p, const std::vector<int>& kappa, const PermutationLemma& r);

// Independent factorisation G = G_minus z^kappa G_plus by row reduction.
struct BirkhoffFactorization {
  SMat g_minus;  // unimodular in z^{-1}
  std::vector<int> kappa;  // nondecreasing
  SMat g_plus;   // in GL_n(h)
};
BirkhoffFactorization birkhoff_factor_oracle(const SMat& g);

// Polynomial matrix with constant determinant taking the value C_i at s_i.
SMat interpolate_monopole(const std::vector<GQ>& points, const std::vector<CMat>& values, std::uint64_t seed = 1);

bool k_staged_parabolic_member(const SMat& p, const std::vector<int>& kappa);

}  // namespace bt
