#include "bt/building.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "bt/error.hpp"

namespace bt {

std::vector<std::vector<int>> elementary_splitting(const std::vector<int>& kappa) {
  if (kappa.empty()) return {};
  int lo = *std::min_element(kappa.begin(), kappa.end());
  if (lo != 0) raise(Errc::NotNormalized, "elementary_splitting", "minimum is " + std::to_string(lo) + ", expected 0");
  int hi = *std::max_element(kappa.begin(), kappa.end());
  std::vector<std::vector<int>> out;
  for (int k = 1; k <= hi; ++k) {
    std::vector<int> t;
    for (int x : kappa) t.push_back(x >= k ? 1 : 0);
    out.push_back(t);
  }
  return out;
}

GeodesicPath geodesic(const Lattice& l, const Lattice& lp) {
  SmithData sd = smith_decomposition(l, lp);
  GeodesicPath g;
  g.shift = sd.v();
  Lattice lam_p = lp.scaled(-g.shift);
  for (int k : sd.kappa) g.kappa.push_back(k - g.shift);
  int d = sd.d();
  g.vertices.push_back(l);
  for (int k = 1; k < d; ++k) g.vertices.push_back(sum(lam_p, l.scaled(k)));
  if (d > 0) g.vertices.push_back(lam_p);
  g.splitting = elementary_splitting(g.kappa);
  return g;
}

Lattice form_lift(const Form& y, const AdmissiblePair& pair) {
  int n = y.basis.rows();
  if (static_cast<int>(pair.kappa.size()) != n) raise(Errc::FlagNotAdmissible, "form_lift", "kappa has the wrong length");
  if (!pair.admissible())
    raise(Errc::FlagNotAdmissible, "form_lift", "flag signature does not match the multiplicities of kappa");
  CMat c = flag_basis(pair.flag);
  return Lattice(scale_cols(y.basis * SMat(c), pair.kappa));
}

std::optional<int> z_distance(const SMat& p) {
  std::optional<int> out;
  auto poly_degree = [](const SMat& m) -> std::optional<int> {
    if (!m.is_exact()) return std::nullopt;
    if (m.min_exponent() < 0) return std::nullopt;
    return std::max(m.max_degree(), 0);
  };
  out = poly_degree(p);
  SMat inv = inverse(p);
  auto di = poly_degree(inv);
  if (di && (!out || *di < *out)) out = di;
  return out;
}

TruncatedSmithForm truncated_smith_form(const Form& y, const Lattice& m) {
  SmithData sd = smith_decomposition(y.lattice(), m);
  TruncatedSmithForm t;
  t.kappa = sd.kappa;
  t.d = sd.d();
  int n = y.basis.rows();
  if (t.d == 0) {
    t.form = y;
    t.gauge = SMat::identity(n);
    t.distance = 0;
    return t;
  }
  const SMat& p = sd.coords;
  if (p.prec() < t.d)
    raise(Errc::PrecisionExhausted, "truncated_smith_form",
          "gauge known to order " + std::to_string(p.prec()) + ", need " + std::to_string(t.d));
  t.gauge = p.polynomial_part(t.d);
  t.form = Form(y.basis * t.gauge);
  t.distance = z_distance(t.gauge);
  return t;
}

namespace {

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct Shape {
  std::vector<int> rows;
  std::vector<int> heights;
};

Shape shape_of(const std::vector<int>& kappa) {
  if (kappa.empty()) return {};
  int lo = *std::min_element(kappa.begin(), kappa.end());
  if (lo != 0) raise(Errc::NotNormalized, "abacus", "minimum is " + std::to_string(lo) + ", expected 0");
  Shape s;
  s.rows = kappa;
  std::sort(s.rows.begin(), s.rows.end(), std::greater<>());
  for (int j = 1; j <= s.rows.front(); ++j) {
    int h = 0;
    for (int r : s.rows) h += r >= j ? 1 : 0;
    s.heights.push_back(h);
  }
  return s;
}

void stats(AbacusDiagram& d) {
  int hi = *std::max_element(d.rows.begin(), d.rows.end());
  int lo = *std::min_element(d.rows.begin(), d.rows.end());
  d.delta = hi - lo;
  d.index = 0;
  for (int r : d.rows) d.index += hi - r;
}

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace

long abacus_count(const std::vector<int>& kappa, bool fix_first_column) {
  Shape s = shape_of(kappa);
  int n = static_cast<int>(kappa.size());
  long c = 1;
  for (size_t j = fix_first_column ? 1 : 0; j < s.heights.size(); ++j) c *= binom(n, s.heights[j]);
  return c;
}

AbacusResult abacus(const std::vector<int>& kappa, const AbacusOptions& opt) {
  Shape s = shape_of(kappa);
  int n = static_cast<int>(kappa.size());
  AbacusResult res;
  res.rows = s.rows;
  res.column_heights = s.heights;
  res.count = abacus_count(kappa, opt.fix_first_column);
  if (res.count > opt.limit)
    raise(Errc::CombinatorialBlowup, "abacus", std::to_string(res.count) + " diagrams exceed the limit " + std::to_string(opt.limit));
  if (!s.rows.empty()) {
    res.delta = s.rows.front() - s.rows.back();
    for (int r : s.rows) res.index += s.rows.front() - r;
  }
  std::vector<std::vector<std::vector<int>>> choices;
  for (size_t j = 0; j < s.heights.size(); ++j) {
    if (j == 0 && opt.fix_first_column) {
      std::vector<int> top;
      for (int i = 0; i < s.heights[0]; ++i) top.push_back(i);
      choices.push_back({top});
    } else {
      choices.push_back(subsets(n, s.heights[j]));
    }
  }
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> cols;
  std::function<void(size_t)> rec = [&](size_t j) {
    if (j == choices.size()) {
      AbacusDiagram d;
      d.columns = cols;
      d.rows.assign(static_cast<size_t>(n), 0);
      for (const auto& c : cols)
        for (int r : c) ++d.rows[static_cast<size_t>(r)];
      if (opt.dedup_rows && !seen.insert(d.rows).second) return;
      stats(d);
      res.diagrams.push_back(std::move(d));
      return;
    }
    for (const auto& c : choices[j]) {
      cols.push_back(c);
      rec(j + 1);
      cols.pop_back();
    }
  };
  if (n > 0) rec(0);
  return res;
}

Frame standard_frame(int n) { return frame_from_basis(SMat::identity(n)); }

Frame frame_from_basis(const SMat& basis) {
  Frame f;
  for (int j = 0; j < basis.cols(); ++j) f.lines.push_back(basis.col(j));
  return f;
}

Lattice apartment_lattice(const Frame& f, const std::vector<int>& m) {
  int n = static_cast<int>(f.lines.size());
  SMat b(f.lines.front().rows(), n);
  for (int j = 0; j < n; ++j) b.set_block(0, j, f.lines[static_cast<size_t>(j)].shifted(m[static_cast<size_t>(j)]));
  return Lattice(b);
}

std::vector<int> frame_exponents(const Lattice& l, const Frame& f) {
  SMat binv = inverse(l.basis);
  std::vector<int> m;
  for (const auto& d : f.lines) m.push_back(-(binv * d).valuation());
  return m;
}

bool in_apartment(const Lattice& l, const Frame& f) { return apartment_lattice(f, frame_exponents(l, f)) == l; }

}  // namespace bt
