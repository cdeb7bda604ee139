#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "bt/connection.hpp"
#include "bt/error.hpp"
#include "codec.hpp"

using namespace btcli;

namespace {

struct Options {
  std::string command;
  std::string input;
  int precision = 32;
  std::string format = "json";
  bool full = false;
  std::uint64_t seed = 1;
  // rh
  int pole = -1;
  std::string subspace;
  bool up = false;
  int depth = 3;
  int plemelj_depth = 0;
  int box = 4;
  size_t max_nodes = 2000;
  bool no_up = false;
  std::string point;
  // fixtures
  std::string kind = "system";
  int n = 2;
  int poles = 2;
  int moves = 0;
  bool jordan = false;
  bool triangular = false;
  int count = 0;
};

json read_input(const Options& o) {
  std::string text;
  if (o.input.empty() || o.input == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(o.input);
    if (!f) schema_fail("", "cannot read " + o.input);
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    schema_fail("", std::string("invalid JSON: ") + e.what());
  }
}

json parse_inline(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    schema_fail(where, "invalid JSON");
  }
}

Lattice lattice_or_standard(const json& in, const std::string& key, int n) {
  if (in.contains(key)) return Lattice(dec_smat(in[key], "/" + key));
  return Lattice::standard(n);
}

// ---- building commands

json cmd_smith(const Options& o, const json& in) {
  SMat m = dec_smat(field(in, "m", ""), "/m");
  Lattice lam = lattice_or_standard(in, "lambda", m.rows());
  SmithData sd = smith_decomposition(lam, Lattice(m));
  json out{{"kappa", sd.kappa}, {"d", sd.d()}, {"index", sd.index()}};
  if (o.full) {
    out["v"] = sd.v();
    out["smith_basis"] = enc(sd.smith_basis);
  }
  return out;
}

json cmd_geodesic(const Options&, const json& in) {
  SMat lp = dec_smat(field(in, "lp", ""), "/lp");
  Lattice l = lattice_or_standard(in, "l", lp.rows());
  GeodesicPath g = geodesic(l, Lattice(lp));
  json verts = json::array();
  for (const auto& v : g.vertices) verts.push_back(enc(v.basis));
  return json{{"length", g.length()}, {"kappa", g.kappa}, {"shift", g.shift}, {"splitting", g.splitting}, {"vertices", verts}};
}

json cmd_abacus(const Options& o, const json& in) {
  std::vector<int> kappa = as_ints(field(in, "kappa", ""), "/kappa");
  AbacusOptions opt;
  if (in.contains("fix_first_column")) opt.fix_first_column = in["fix_first_column"].get<bool>();
  AbacusResult r = abacus(kappa, opt);
  json out{{"rows", r.rows}, {"column_heights", r.column_heights}, {"count", r.count}, {"delta", r.delta}, {"index", r.index}};
  json ds = json::array();
  for (const auto& d : r.diagrams) ds.push_back(json{{"columns", d.columns}, {"rows", d.rows}, {"delta", d.delta}, {"index", d.index}});
  if (o.full || r.diagrams.size() <= 64) out["diagrams"] = ds;
  return out;
}

json cmd_type(const Options& o, const json& in) {
  Lattice lam(dec_smat(field(in, "lambda", ""), "/lambda"));
  BGTrivialisation bg = in.contains("form") ? bg_trivialise(lam, Form(dec_smat(in["form"], "/form"))) : bg_trivialise(lam);
  json steps = json::array();
  for (const auto& s : bg.steps)
    steps.push_back(json{{"divisors", s.divisors}, {"step", s.step}, {"cell", s.cell}, {"w", s.w}, {"sort", s.sort}});
  json out{{"type", bg.type.values}, {"divisors", bg.divisors}, {"shift", bg.shift}, {"hn_flag", enc_flag(hn_flag(bg))}, {"steps", steps}};
  if (o.full) {
    out["bg_basis"] = enc(bg.bg_basis);
    out["global_form"] = enc(bg.global_form.basis);
  }
  return out;
}

json cmd_permlemma(const Options& o, const json& in) {
  SMat p = dec_smat(field(in, "P", ""), "/P");
  std::vector<int> kappa = as_ints(field(in, "kappa", ""), "/kappa");
  PermutationLemma r = permutation_lemma(p, kappa);
  json out;
  out["sigma"] = r.sigma_identity() ? json("id") : json(r.sigma);
  out["Pi"] = enc_or_identity(r.pi);
  out["Q"] = enc_or_identity(r.q);
  if (o.full) {
    PermutationLemmaCheck ck = check_permutation_lemma(p, kappa, r);
    out["kappa_sigma"] = r.kappa_sigma;
    out["P_tilde"] = enc_or_identity(r.p_tilde);
    out["check"] = json{{"first_identity", ck.first_identity}, {"second_identity", ck.second_identity}, {"unimodular", ck.unimodular}, {"box", ck.box}};
  }
  return out;
}

json cmd_birkhoff(const Options& o, const json& in) {
  ConnectionGerm a(dec_smat(field(in, "theta", ""), "/theta"));
  int terms = in.contains("terms") ? as_int(in["terms"], "/terms") : o.precision;
  SMat p = birkhoff_gauge(a, terms);
  return json{{"P", enc(p)}, {"residue", enc(a.residue())}, {"deligne_normalized", is_deligne_normalized(a)}};
}

json cmd_loglattices(const Options&, const json& in) {
  ConnectionGerm a(dec_smat(field(in, "theta", ""), "/theta"));
  std::vector<int> kappa = as_ints(field(in, "kappa", ""), "/kappa");
  auto one = [&](const std::vector<CMat>& flag) {
    Lattice l = log_lattice_from_flag(a, StableFlagSpec{flag, kappa});
    return json{{"flag", enc_flag(flag)}, {"lattice", enc(l.basis)}, {"logarithmic", is_logarithmic_lattice(a, l).logarithmic}};
  };
  if (in.contains("flag")) return one(dec_flag(in["flag"], "/flag"));
  std::vector<int> sig;
  for (size_t i = 0; i < kappa.size(); ++i) {
    if (i == 0 || kappa[i] != kappa[i - 1]) sig.push_back(0);
    ++sig.back();
  }
  json ls = json::array();
  for (const auto& flag : jordan_samples(a.residue(), sig, 100)) ls.push_back(one(flag));
  return json{{"universe", "flags spanned by Jordan vectors closed under the nilpotent part"}, {"lattices", ls}};
}

// ---- rh commands

struct SystemInput {
  FuchsianSystem system;
  std::vector<Move> log;
};

SystemInput read_system(const json& in) {
  SystemInput si;
  const json& sj = in.contains("system") ? in["system"] : in;
  std::string where = in.contains("system") ? "/system" : "";
  si.system = dec_system(sj, where);
  if (in.contains("log")) si.log = dec_log(in["log"], si.system.n(), "/log");
  return si;
}

json cmd_rh_type(const Options&, const json& in) {
  FuchsianSystem sys = read_system(in).system;
  ReadOff r = type_and_hn(sys);
  return json{{"type", r.type.values}, {"hn_flag", enc_flag(r.hn_flag)}, {"conjugation", enc(r.conjugation)}, {"apparent", r.apparent}, {"system", enc(r.system)}};
}

json cmd_rh_modify(const Options& o, const json& in) {
  SystemInput si = read_system(in);
  WeakSolutionState st = replay(si.system, si.log);
  if (o.pole >= 0) {
    int n = si.system.n();
    if (o.up) {
      st = modify_up(st, o.pole);
    } else {
      CMat w(n, 0);
      if (!o.subspace.empty()) {
        json wj = parse_inline(o.subspace, "--subspace");
        if (!(wj.is_array() && wj.empty())) w = dec_cmat(wj, "--subspace");
        if (w.rows() != n) schema_fail("--subspace", "subspace rows must equal dim");
      }
      st = modify_adjacent(st, o.pole, w);
    }
  }
  return enc(st);
}

json cmd_rh_plemelj(const Options& o, const json& in) {
  if (o.pole < 0) schema_fail("--pole", "a pole index is required");
  PlemeljOptions opt;
  opt.max_depth = o.plemelj_depth;
  return enc(plemelj_search(read_system(in).system, o.pole, opt));
}

json cmd_rh_explore(const Options& o, const json& in, bool& budget) {
  FuchsianSystem sys = read_system(in).system;
  ExploreBounds b;
  b.max_depth = o.depth;
  b.kappa_box = o.box;
  b.max_nodes = o.max_nodes;
  b.up_moves = !o.no_up;
  ExploreReport rep = explore(sys, b);
  json nodes = json::array();
  for (const auto& nd : rep.nodes)
    nodes.push_back(json{{"depth", nd.depth}, {"type", nd.type.values}, {"key", nd.key}, {"strong", nd.strong}, {"parent", nd.parent}, {"log", enc_log(nd.log)}});
  budget = rep.budget_exceeded;
  return json{{"system", enc(sys)},
              {"universe", rep.universe},
              {"bounds", json{{"depth", b.max_depth}, {"box", b.kappa_box}, {"max_nodes", b.max_nodes}}},
              {"budget_exceeded", rep.budget_exceeded},
              {"first_strong", rep.first_strong},
              {"first_zero_type", rep.first_zero_type},
              {"reached_types", rep.reached_types},
              {"nodes", nodes}};
}

json cmd_rh_spread(const Options&, const json& in) {
  SystemInput si = read_system(in);
  SpreadCertificate c = spread_certificate(replay(si.system, si.log));
  json out{{"spread", c.spread}, {"bound", c.bound}, {"within_bound", c.within_bound}};
  out["cut"] = c.cut ? json(*c.cut) : json(nullptr);
  if (c.cut) out["invariant_subspace"] = enc(c.invariant_subspace);
  return out;
}

json cmd_rh_index(const Options& o, const json& in) {
  if (o.pole < 0) schema_fail("--pole", "a pole index is required");
  SystemInput si = read_system(in);
  json cs = json::array();
  for (const auto& c : index_reduction_candidates(replay(si.system, si.log), o.pole))
    cs.push_back(json{{"subspace", enc(c.subspace)}, {"new_type", c.new_type.values}});
  return json{{"candidates", cs}, {"universe", "Jordan-derived stable subspaces"}, {"conclusive", !cs.empty()}};
}

// Substitution z = c + 1/w: the apparent point moves to z = c, old infinity becomes w = 0.
json cmd_rh_transport(const Options& o, const json& in) {
  FuchsianSystem sys = read_system(in).system;
  if (o.point.empty()) schema_fail("--point", "a point is required");
  GQ c = dec_gq(parse_inline(o.point, "--point"), "--point");
  FuchsianSystem out;
  for (size_t a = 0; a < sys.poles.size(); ++a) {
    if (sys.poles[a] == c) raise(Errc::InvalidArgument, "rh transport", "the new apparent point is a pole");
    out.poles.push_back((sys.poles[a] - c).inv());
    out.residues.push_back(sys.residues[a]);
  }
  CMat b = sys.residue_at_infinity();
  if (!b.is_zero()) {
    out.poles.push_back(GQ(0));
    out.residues.push_back(b);
  }
  return enc(out);
}

// ---- fixtures

const std::vector<GQ>& pool() {
  static const std::vector<GQ> p{GQ(0), GQ(1), GQ(-1), GQ::frac(1, 2), GQ::frac(-1, 2), GQ(2), GQ::i(), -GQ::i(), GQ::gauss(1, 1)};
  return p;
}

CMat random_basis(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<long> d(-2, 2);
  while (true) {
    CMat k(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) k(i, j) = GQ(d(rng));
    if (!det(k).is_zero()) return k;
  }
}

CMat pool_residue(std::mt19937_64& rng, int n, const Options& o, const CMat& k) {
  std::uniform_int_distribution<size_t> pick(0, pool().size() - 1);
  std::uniform_int_distribution<long> d(-2, 2);
  CMat m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = o.jordan && i > 0 && pick(rng) % 2 == 0 ? m(i - 1, i - 1) : pool()[pick(rng)];
    if (o.jordan && i > 0 && m(i, i) == m(i - 1, i - 1)) m(i - 1, i) = GQ(1);
    if (o.triangular)
      for (int j = i + 1; j < n; ++j) m(i, j) = GQ(d(rng));
  }
  return k * m * inverse(k);
}

json cmd_gen_fixture(const Options& o) {
  std::mt19937_64 rng(o.seed);
  if (o.n < 1 || o.n > 6) schema_fail("--n", "dimension must be between 1 and 6");
  if (o.kind == "laurent") {
    // A(z^-1) z^kappa B(z) with A unimodular in z^-1 and B in GL_n(h)
    std::uniform_int_distribution<long> d(-2, 2);
    std::uniform_int_distribution<int> kd(-2, 2), idx(0, o.n - 1);
    SMat a(random_basis(rng, o.n)), b(random_basis(rng, o.n));
    for (int f = 0; f < 3 * o.n; ++f) {
      int i = idx(rng), j = idx(rng);
      if (i == j) continue;
      SMat e = SMat::identity(o.n), g = SMat::identity(o.n);
      e(i, j) = Series::monomial(GQ(d(rng)), -1 - f % 2);
      g(j, i) = Series::monomial(GQ(d(rng)), 1 + f % 2);
      a = a * e;
      b = g * b;
    }
    std::vector<int> kappa;
    for (int i = 0; i < o.n; ++i) kappa.push_back(kd(rng));
    return json{{"G", enc(a * SMat::zdiag(kappa) * b)}};
  }
  if (o.kind == "glh") {
    std::uniform_int_distribution<long> d(-2, 2);
    std::uniform_int_distribution<int> kd(0, 4);
    std::vector<CMat> c{random_basis(rng, o.n)};
    for (int k = 1; k < 4; ++k) {
      CMat m(o.n, o.n);
      for (int i = 0; i < o.n; ++i)
        for (int j = 0; j < o.n; ++j) m(i, j) = GQ(d(rng));
      c.push_back(m);
    }
    std::vector<int> kappa;
    for (int i = 0; i < o.n; ++i) kappa.push_back(kd(rng));
    return json{{"P", enc(SMat::from_coeffs(c))}, {"kappa", kappa}};
  }
  if (o.kind != "system") schema_fail("--kind", "kind is system, laurent or glh");
  if (o.poles < 1) schema_fail("--poles", "at least one pole");
  FuchsianSystem sys;
  CMat acc(o.n, o.n);
  CMat common = random_basis(rng, o.n);
  for (int a = 0; a < o.poles; ++a) {
    sys.poles.push_back(GQ(a % 2 ? (a + 1) / 2 : -(a / 2)));
    if (a + 1 < o.poles) {
      sys.residues.push_back(pool_residue(rng, o.n, o, o.triangular ? common : random_basis(rng, o.n)));
      acc = acc + sys.residues.back();
    } else {
      sys.residues.push_back(-acc);
    }
  }
  WeakSolutionState st = make_state(sys);
  std::uniform_int_distribution<int> coin(0, 3);
  for (int m = 0; m < o.moves; ++m) {
    int s = static_cast<int>(rng() % static_cast<std::uint64_t>(o.poles));
    if (coin(rng) == 0) {
      st = modify_up(st, s);
      continue;
    }
    std::vector<CMat> ws{CMat(o.n, 0)};
    try {
      for (auto& w : stable_subspace_samples(st.system.residues[static_cast<size_t>(s)])) ws.push_back(w);
    } catch (const Error&) {
    }
    st = modify_adjacent(st, s, ws[rng() % ws.size()]);
  }
  return enc(st.system);
}

json cmd_oracle_check(const Options& o) {
  std::vector<SMat> gs;
  if (o.count > 0) {
    Options g = o;
    g.kind = "laurent";
    for (int c = 0; c < o.count; ++c) {
      g.seed = o.seed + static_cast<std::uint64_t>(c);
      g.n = 2 + c % 3;
      gs.push_back(dec_smat(cmd_gen_fixture(g)["G"], "/G"));
    }
  } else {
    gs.push_back(dec_smat(field(read_input(o), "G", ""), "/G"));
  }
  int mismatches = 0;
  json results = json::array();
  for (const auto& g : gs) {
    TypeVector bg = bg_trivialise(Lattice(g)).type;
    std::vector<int> neg;
    for (int k : birkhoff_factor_oracle(g).kappa) neg.push_back(-k);
    TypeVector oracle(neg);
    bool match = bg.values == oracle.values;
    mismatches += match ? 0 : 1;
    results.push_back(json{{"bg_type", bg.values}, {"oracle_type", oracle.values}, {"match", match}});
  }
  return json{{"cases", gs.size()}, {"mismatches", mismatches}, {"results", results}};
}

void emit(const Options& o, const json& out) {
  if (o.format == "text" && out.is_object()) {
    for (const auto& [k, v] : out.items()) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    return;
  }
  std::cout << out.dump() << "\n";
}

json error_json(const std::string& name, const std::string& where, const std::string& msg) {
  return json{{"error", name}, {"where", where}, {"message", msg}};
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  if (const char* env = std::getenv("BT_PRECISION")) o.precision = std::atoi(env);

  CLI::App app{"Exact lattices in the affine building of SL_n and Fuchsian systems on the projective line"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* c) {
    c->add_option("input", o.input, "JSON input file (stdin when absent or -)");
    c->add_option("--precision", o.precision, "working precision in coefficients (env BT_PRECISION, default 32)");
    c->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    c->add_option("--seed", o.seed, "PRNG seed");
    c->add_flag("--full", o.full, "emit auxiliary fields");
  };
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, const std::string& cmd) {
    CLI::App* c = parent->add_subcommand(name, help);
    common(c);
    c->callback([&o, cmd] { o.command = cmd; });
    return c;
  };

  leaf(&app, "smith", "elementary divisors of m relative to lambda", "smith");
  leaf(&app, "geodesic", "geodesic from l to lp", "geodesic");
  leaf(&app, "abacus", "abacus diagrams of kappa", "abacus");
  leaf(&app, "type", "Birkhoff-Grothendieck trivialisation and type", "type");
  leaf(&app, "permlemma", "permutation lemma for P and kappa", "permlemma");
  leaf(&app, "birkhoff", "Birkhoff gauge of a logarithmic germ", "birkhoff");
  leaf(&app, "loglattices", "logarithmic lattices from stable flags", "loglattices");

  CLI::App* rh = app.add_subcommand("rh", "Fuchsian systems and weak solutions");
  rh->require_subcommand(1);
  leaf(rh, "type", "type and HN flag read at infinity", "rh type");
  CLI::App* mod = leaf(rh, "modify", "replay a log and apply one move", "rh modify");
  mod->add_option("--pole", o.pole, "pole index");
  mod->add_option("--subspace", o.subspace, "JSON matrix whose columns span W (omit for W = 0)");
  mod->add_flag("--up", o.up, "scalar up move instead of a down move");
  CLI::App* ple = leaf(rh, "plemelj", "search diagonal modifications at a pole for a balanced type", "rh plemelj");
  ple->add_option("--pole", o.pole, "pole index")->required();
  ple->add_option("--depth", o.plemelj_depth, "maximal number of moves (default from the type)");
  CLI::App* exp = leaf(rh, "explore", "bounded breadth-first walk over weak solutions", "rh explore");
  exp->add_option("--depth", o.depth, "maximal depth");
  exp->add_option("--box", o.box, "prune types with an entry above this in absolute value");
  exp->add_option("--max-nodes", o.max_nodes, "node budget");
  exp->add_flag("--no-up", o.no_up, "only down moves");
  leaf(rh, "spread", "type spread bound or reducibility certificate", "rh spread");
  CLI::App* idx = leaf(rh, "index", "subspaces that lower the triviality index", "rh index");
  idx->add_option("--pole", o.pole, "pole index")->required();
  CLI::App* tr = leaf(rh, "transport", "move the apparent point from infinity to a finite point", "rh transport");
  tr->add_option("--point", o.point, "JSON scalar, e.g. 5 or [1,2,0,1]")->required();

  CLI::App* gen = leaf(&app, "gen-fixture", "random fixture generator", "gen-fixture");
  gen->add_option("--kind", o.kind, "system, laurent or glh");
  gen->add_option("--n", o.n, "dimension");
  gen->add_option("--poles", o.poles, "number of finite poles");
  gen->add_option("--moves", o.moves, "random moves applied to the zero-sum system");
  gen->add_flag("--jordan", o.jordan, "allow Jordan blocks in the residues");
  gen->add_flag("--triangular", o.triangular, "residues triangular in a common basis (every residue splits)");
  CLI::App* orc = leaf(&app, "oracle-check", "compare the trivialisation type with the factorisation oracle", "oracle-check");
  orc->add_option("--count", o.count, "number of generated cases (0 reads G from the input)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  int code = 0;
  try {
    PrecisionScope scope(o.precision);
    const std::string& c = o.command;
    json out;
    bool budget = false;
    if (c == "gen-fixture") out = cmd_gen_fixture(o);
    else if (c == "oracle-check") out = cmd_oracle_check(o);
    else {
      json in = read_input(o);
      if (c == "smith") out = cmd_smith(o, in);
      else if (c == "geodesic") out = cmd_geodesic(o, in);
      else if (c == "abacus") out = cmd_abacus(o, in);
      else if (c == "type") out = cmd_type(o, in);
      else if (c == "permlemma") out = cmd_permlemma(o, in);
      else if (c == "birkhoff") out = cmd_birkhoff(o, in);
      else if (c == "loglattices") out = cmd_loglattices(o, in);
      else if (c == "rh type") out = cmd_rh_type(o, in);
      else if (c == "rh modify") out = cmd_rh_modify(o, in);
      else if (c == "rh plemelj") out = cmd_rh_plemelj(o, in);
      else if (c == "rh explore") out = cmd_rh_explore(o, in, budget);
      else if (c == "rh spread") out = cmd_rh_spread(o, in);
      else if (c == "rh index") out = cmd_rh_index(o, in);
      else if (c == "rh transport") out = cmd_rh_transport(o, in);
    }
    if (budget) {
      out["error"] = errc_name(Errc::BudgetExceeded);
      code = 2;
    }
    emit(o, out);
  } catch (const SchemaError& e) {
    emit(o, error_json("SchemaError", e.where(), e.what()));
    return 3;
  } catch (const Error& e) {
    emit(o, error_json(e.name(), e.where(), e.detail()));
    return 2;
  } catch (const json::exception& e) {
    emit(o, error_json("SchemaError", "", e.what()));
    return 3;
  }
  return code;
}
