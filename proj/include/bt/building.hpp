#pragma once

#include <optional>
#include <vector>

#include "bt/lattice.hpp"

namespace bt {

struct GeodesicPath {
  std::vector<Lattice> vertices;             // L_0 = L, ..., L_d homothetic to L'
  std::vector<std::vector<int>> splitting;   // T_1, ..., T_d in the Smith basis order
  std::vector<int> kappa;                    // normalised elementary divisors (min 0)
  int shift = 0;                             // v_L(L'), removed before walking
  int length() const { return static_cast<int>(vertices.size()) - 1; }
};

GeodesicPath geodesic(const Lattice& l, const Lattice& lp);

// T_k = [k_i >= k] for k = 1..max(kappa); kappa must have minimum 0.
std::vector<std::vector<int>> elementary_splitting(const std::vector<int>& kappa);

// Constant-coefficient span of an h-basis.
struct Form {
  SMat basis;
  Form() = default;
  explicit Form(SMat b) : basis(std::move(b)) {}
  static Form standard(int n) { return Form(SMat::identity(n)); }
  Lattice lattice() const { return Lattice(basis); }
};

// Lattice spanned by z^{k_i} times a flag-respecting basis of Y; the flag is
// given in Y-coordinates.
Lattice form_lift(const Form& y, const AdmissiblePair& pair);

// min(deg P, deg P^{-1}); nullopt when neither is a polynomial.
std::optional<int> z_distance(const SMat& p);

struct TruncatedSmithForm {
  Form form;
  SMat gauge;  // polynomial of degree < d taking Y to the new form
  std::vector<int> kappa;
  int d = 0;
  std::optional<int> distance;
};

TruncatedSmithForm truncated_smith_form(const Form& y, const Lattice& m);

struct AbacusDiagram {
  std::vector<std::vector<int>> columns;  // chosen rows per column (column 1 first)
  std::vector<int> rows;                  // boxes per row
  int delta = 0;
  int index = 0;
};

struct AbacusOptions {
  long limit = 200000;
  bool dedup_rows = false;
  bool fix_first_column = true;
};

struct AbacusResult {
  std::vector<int> rows;  // kappa sorted nonincreasing
  std::vector<int> column_heights;
  long count = 0;  // product of binomials over movable columns
  std::vector<AbacusDiagram> diagrams;
  int delta = 0;
  int index = 0;
};

long abacus_count(const std::vector<int>& kappa, bool fix_first_column = true);
AbacusResult abacus(const std::vector<int>& kappa, const AbacusOptions& opt = {});

// Frame of n independent K-lines, each given by a spanning column.
struct Frame {
  std::vector<SMat> lines;
};

Frame standard_frame(int n);
Frame frame_from_basis(const SMat& basis);
Lattice apartment_lattice(const Frame& f, const std::vector<int>& m);
// Exponents m with L cap K d_i = h z^{m_i} d_i.
std::vector<int> frame_exponents(const Lattice& l, const Frame& f);
bool in_apartment(const Lattice& l, const Frame& f);

}  // namespace bt
