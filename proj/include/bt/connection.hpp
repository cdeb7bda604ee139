#pragma once

#include <vector>

#include "bt/building.hpp"
#include "bt/eigen.hpp"

namespace bt {

// Matrix of nabla_theta (theta = z d/dz) in the basis base.basis.
struct ConnectionGerm {
  SMat theta;
  Lattice base;

  ConnectionGerm() = default;
  explicit ConnectionGerm(SMat l);  // standard basis
  ConnectionGerm(SMat l, Lattice b) : theta(std::move(l)), base(std::move(b)) {}
  int n() const { return theta.rows(); }
  int poincare_rank() const;  // max(0, -v)
  bool is_logarithmic() const;
  CMat residue() const;  // constant term; InvalidArgument when there is a pole
};

// P^{-1} A P - P^{-1} theta(P); the new base is spanned by base.basis * P.
ConnectionGerm gauge_transform(const ConnectionGerm& a, const SMat& p);

struct LogTest {
  bool logarithmic = false;
  SMat witness;  // the matrix in a basis of the tested lattice
};
LogTest is_logarithmic_lattice(const ConnectionGerm& a, const Lattice& m);

// Lattice z*base + (lift of W), W given in base coordinates of the fiber.
Lattice adjacent_lattice(const ConnectionGerm& a, const CMat& w);
bool adjacent_log_subspace_test(const ConnectionGerm& a, const CMat& w);

// P = I + P_1 z + ... + P_{N-1} z^{N-1} with A_[P] = A(0) mod z^N.
SMat birkhoff_gauge(const ConnectionGerm& a, int n_terms);

// Solves X U - V X = Q; throws ResonantResidue when U and V share an eigenvalue.
CMat solve_sylvester(const CMat& u, const CMat& v, const CMat& q);

// Gauge taking the theta-matrix A0 u(t) to A0, to order n_terms.
SMat birkhoff_coordinate_change(const CMat& a0, const Series& u, int n_terms);

bool is_deligne_normalized(const ConnectionGerm& a);

struct StableFlagSpec {
  std::vector<CMat> flag;  // nested, last component the whole fiber
  std::vector<int> kappa;
};

// Lattice with relative flag (F, kappa) with respect to the base lattice.
Lattice log_lattice_from_flag(const ConnectionGerm& a, const StableFlagSpec& spec);
// Same, with the flag given in the fiber coordinates of the form y.
Lattice log_lattice_from_flag(const ConnectionGerm& a, const StableFlagSpec& spec, const Form& y);

bool is_stable_flag(const CMat& f, const std::vector<CMat>& flag);
// Flags with the given signature spanned by sets of Jordan vectors closed
// under the nilpotent part. A sample of the stable flags, not all of them.
std::vector<std::vector<CMat>> jordan_samples(const CMat& f, const std::vector<int>& signature, size_t limit = 10000);

}  // namespace bt
