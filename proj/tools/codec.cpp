#include "codec.hpp"

namespace btcli {

namespace {

json enc_mpz(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

mpz_class dec_mpz(const json& j, const std::string& where) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) == 0) return z;
  }
  schema_fail(where, "expected an integer");
}

mpq_class dec_mpq(const json& num, const json& den, const std::string& where) {
  mpz_class d = dec_mpz(den, where);
  if (d == 0) schema_fail(where, "zero denominator");
  mpq_class q(dec_mpz(num, where), d);
  q.canonicalize();
  return q;
}

std::string at(const std::string& where, size_t i) { return where + "/" + std::to_string(i); }

}  // namespace

void schema_fail(const std::string& where, const std::string& msg) { throw SchemaError(where.empty() ? "/" : where, msg); }

const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) schema_fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(where + "/" + key, "missing field");
  return *it;
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_fail(where, "expected an integer");
  return j.get<int>();
}

std::vector<int> as_ints(const json& j, const std::string& where) {
  if (!j.is_array()) schema_fail(where, "expected an array of integers");
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], at(where, i)));
  return out;
}

json enc(const GQ& x) {
  return json::array({enc_mpz(x.re.get_num()), enc_mpz(x.re.get_den()), enc_mpz(x.im.get_num()), enc_mpz(x.im.get_den())});
}

GQ dec_gq(const json& j, const std::string& where) {
  if (j.is_number_integer() || j.is_string()) return GQ(mpq_class(dec_mpz(j, where)));
  if (!j.is_array()) schema_fail(where, "expected a scalar [num, den, inum, iden]");
  if (j.size() == 2) return GQ(dec_mpq(j[0], j[1], where));
  if (j.size() == 4) return GQ(dec_mpq(j[0], j[1], where), dec_mpq(j[2], j[3], where));
  schema_fail(where, "a scalar has 4 entries");
}

json enc(const Series& s) {
  json c = json::array();
  for (const auto& x : s.coeffs()) c.push_back(enc(x));
  json out;
  out["val"] = s.is_zero() ? 0 : s.first();
  out["coeffs"] = c;
  out["prec"] = s.is_exact() ? json(nullptr) : json(s.prec());
  return out;
}

Series dec_series(const json& j, const std::string& where) {
  if (!j.is_object()) return Series(dec_gq(j, where));
  int val = as_int(field(j, "val", where), where + "/val");
  const json& cj = field(j, "coeffs", where);
  if (!cj.is_array()) schema_fail(where + "/coeffs", "expected an array");
  std::vector<GQ> c;
  for (size_t i = 0; i < cj.size(); ++i) c.push_back(dec_gq(cj[i], at(where + "/coeffs", i)));
  int prec = kExact;
  auto it = j.find("prec");
  if (it != j.end() && !it->is_null()) {
    prec = as_int(*it, where + "/prec");
    if (prec < val + static_cast<int>(c.size())) schema_fail(where + "/prec", "precision below the last coefficient");
  }
  return Series::from_coeffs(val, std::move(c), prec);
}

json enc(const CMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(enc(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

CMat dec_cmat(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) schema_fail(where, "expected a nonempty array of rows");
  int rows = static_cast<int>(j.size());
  int cols = -1;
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array()) schema_fail(at(where, i), "expected a row");
    if (cols < 0) cols = static_cast<int>(j[i].size());
    if (static_cast<int>(j[i].size()) != cols) schema_fail(at(where, i), "ragged matrix");
  }
  CMat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = dec_gq(j[static_cast<size_t>(r)][static_cast<size_t>(c)], at(at(where, static_cast<size_t>(r)), static_cast<size_t>(c)));
  return m;
}

json enc(const SMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(enc(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

SMat dec_smat(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) schema_fail(where, "expected a nonempty array of rows");
  int rows = static_cast<int>(j.size());
  int cols = -1;
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array()) schema_fail(at(where, i), "expected a row");
    if (cols < 0) cols = static_cast<int>(j[i].size());
    if (static_cast<int>(j[i].size()) != cols) schema_fail(at(where, i), "ragged matrix");
  }
  SMat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      m(r, c) = dec_series(j[static_cast<size_t>(r)][static_cast<size_t>(c)], at(at(where, static_cast<size_t>(r)), static_cast<size_t>(c)));
  return m;
}

json enc_flag(const std::vector<CMat>& flag) {
  json out = json::array();
  for (const auto& c : flag) out.push_back(enc(c));
  return out;
}

std::vector<CMat> dec_flag(const json& j, const std::string& where) {
  if (!j.is_array()) schema_fail(where, "expected a list of subspaces");
  std::vector<CMat> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(dec_cmat(j[i], at(where, i)));
  return out;
}

json enc(const FuchsianSystem& sys) {
  json poles = json::array(), res = json::array();
  for (const auto& p : sys.poles) poles.push_back(enc(p));
  for (const auto& r : sys.residues) res.push_back(enc(r));
  return json{{"dim", sys.n()}, {"poles", poles}, {"residues", res}};
}

FuchsianSystem dec_system(const json& j, const std::string& where) {
  FuchsianSystem sys;
  int n = as_int(field(j, "dim", where), where + "/dim");
  const json& poles = field(j, "poles", where);
  const json& res = field(j, "residues", where);
  if (!poles.is_array() || !res.is_array()) schema_fail(where, "poles and residues must be arrays");
  if (poles.size() != res.size()) schema_fail(where + "/residues", "one residue per pole is required");
  for (size_t i = 0; i < poles.size(); ++i) sys.poles.push_back(dec_gq(poles[i], at(where + "/poles", i)));
  for (size_t i = 0; i < res.size(); ++i) {
    CMat r = dec_cmat(res[i], at(where + "/residues", i));
    if (r.rows() != n || r.cols() != n) schema_fail(at(where + "/residues", i), "residue is not dim x dim");
    sys.residues.push_back(r);
  }
  return sys;
}

json enc(const Move& m) {
  json out{{"kind", m.kind == Move::Up ? "up" : "down"}, {"pole", m.pole}};
  out["subspace"] = m.subspace.cols() == 0 ? json::array() : enc(m.subspace);
  return out;
}

Move dec_move(const json& j, int n, const std::string& where) {
  Move m;
  const json& kind = field(j, "kind", where);
  if (kind != "up" && kind != "down") schema_fail(where + "/kind", "kind is up or down");
  m.kind = kind == "up" ? Move::Up : Move::Down;
  m.pole = as_int(field(j, "pole", where), where + "/pole");
  m.subspace = CMat(n, 0);
  auto it = j.find("subspace");
  if (it != j.end() && !(it->is_array() && it->empty())) {
    m.subspace = dec_cmat(*it, where + "/subspace");
    if (m.subspace.rows() != n) schema_fail(where + "/subspace", "subspace rows must equal dim");
  }
  return m;
}

json enc_log(const std::vector<Move>& log) {
  json out = json::array();
  for (const auto& m : log) out.push_back(enc(m));
  return out;
}

std::vector<Move> dec_log(const json& j, int n, const std::string& where) {
  if (!j.is_array()) schema_fail(where, "expected a list of moves");
  std::vector<Move> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(dec_move(j[i], n, at(where, i)));
  return out;
}

json enc(const WeakSolutionState& st) {
  return json{{"system", enc(st.system)},
              {"type", st.type.values},
              {"hn_flag", enc_flag(st.hn_flag)},
              {"strong", st.strong()},
              {"key", dedup_key(st)},
              {"log", enc_log(st.log)}};
}

json enc_or_identity(const SMat& m) {
  if (m.rows() == m.cols() && equals(m, SMat::identity(m.rows())) == Tri::True) return "I";
  return enc(m);
}

}  // namespace btcli
