#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bt/bg.hpp"
#include "bt/connection.hpp"

namespace bt {

// dY/dz = sum_a R_a / (z - a) Y, with infinity as the apparent point.
struct FuchsianSystem {
  std::vector<GQ> poles;
  std::vector<CMat> residues;

  int n() const { return residues.empty() ? 0 : residues.front().rows(); }
  CMat residue_at_infinity() const;  // -sum R_a
  CMat moment(int k) const;          // sum a^k R_a
  // theta-matrix in t = 1/z around infinity, to the working precision
  SMat theta_at_infinity() const;
};

void validate(const FuchsianSystem& sys);

struct LinearFuchsianModel {
  std::vector<CMat> maps;  // one per pole
  CMat at_infinity;        // minus the sum
  static LinearFuchsianModel of(const FuchsianSystem& sys);
  bool sums_to_zero() const;
};

struct ReadOff {
  FuchsianSystem system;    // residue at infinity diagonal, nondecreasing
  TypeVector type;
  std::vector<CMat> hn_flag;
  CMat conjugation;         // new residues are K^{-1} R K
  bool apparent = false;    // infinity is a regular point of the lattice diag(t^b)
};

// Type and HN flag from the residue at infinity; conjugates to read-off form.
ReadOff type_and_hn(const FuchsianSystem& sys);

bool in_read_off_form(const FuchsianSystem& sys);
// sum_a a^k (R_a)_ij = 0 for 1 <= k <= b_i - b_j: infinity carries no singularity
// on the lattice diag(t^b).
bool is_apparent_at_infinity(const FuchsianSystem& sys);

struct Move {
  enum Kind { Down, Up } kind = Down;
  int pole = 0;
  CMat subspace;  // Down only, in the coordinates before the move
};

struct WeakSolutionState {
  FuchsianSystem system;
  TypeVector type;
  std::vector<CMat> hn_flag;
  std::vector<Move> log;
  bool strong() const { return type.balanced(); }
};

WeakSolutionState make_state(const FuchsianSystem& sys);

// Replaces the stalk at the pole by (z - s) lam + W and restores read-off form.
WeakSolutionState modify_adjacent(const WeakSolutionState& st, int pole, const CMat& w);
// Replaces the stalk at the pole by (z - s)^{-1} lam.
WeakSolutionState modify_up(const WeakSolutionState& st, int pole);
WeakSolutionState apply(const WeakSolutionState& st, const Move& m);
WeakSolutionState replay(const FuchsianSystem& sys, const std::vector<Move>& log);

struct PlemeljOptions {
  int max_depth = 0;  // 0: derive from the type
};
WeakSolutionState plemelj_search(const FuchsianSystem& sys, int pole, const PlemeljOptions& opt = {});

struct SpreadCertificate {
  int spread = 0;
  int bound = 0;  // p - 2
  bool within_bound = false;
  std::optional<int> cut;  // invariant span(e_1..e_cut) when a gap exceeds the bound
  CMat invariant_subspace;
};
SpreadCertificate spread_certificate(const WeakSolutionState& st);

struct IndexCandidate {
  CMat subspace;
  TypeVector new_type;
};
std::vector<IndexCandidate> index_reduction_candidates(const WeakSolutionState& st, int pole);

// Invariant subspaces of f spanned by closed sets of Jordan vectors, all dimensions.
std::vector<CMat> stable_subspace_samples(const CMat& f);

struct ExploreBounds {
  int max_depth = 3;
  int kappa_box = 4;    // prune states with |type entry| above this
  size_t max_nodes = 2000;
  bool up_moves = true;
};

struct ExploreNode {
  int depth = 0;
  TypeVector type;
  std::string key;
  std::vector<Move> log;
  bool strong = false;
  int parent = -1;
};

struct ExploreReport {
  std::vector<ExploreNode> nodes;
  std::vector<std::vector<int>> reached_types;
  int first_strong = -1;       // node index
  int first_zero_type = -1;    // node index of the first type (0, ..., 0)
  bool budget_exceeded = false;
  std::string universe;        // how stable subspaces were sampled
};

ExploreReport explore(const FuchsianSystem& sys, const ExploreBounds& b);

std::string dedup_key(const WeakSolutionState& st);

}  // namespace bt
