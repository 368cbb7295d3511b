#include "homconf/cli.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "homconf/algfile.hpp"
#include "homconf/deform.hpp"
#include "homconf/error.hpp"
#include "homconf/report.hpp"

namespace homconf {

namespace {

// Loads + digests one input; the digest line pins the exact bytes a report
// was produced from.
struct Input {
  std::string path, text;
};

Input slurp(const std::string& path) { return {path, read_file(path)}; }

void stamp(RunReport& rep, const std::string& command, const std::vector<Input>& inputs) {
  rep.add("format", "homconf/1");
  rep.add("command", command);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    rep.add("input." + std::to_string(i + 1), inputs[i].path);
    rep.add("digest." + std::to_string(i + 1), digest_hex(inputs[i].text));
  }
}

// Resolve --name against one attachment kind: an explicit name must exist, an
// omitted one is unambiguous only when the file declares a single section.
std::string pick_name(const std::vector<std::string>& order, const std::string& given,
                      const std::string& kind) {
  if (!given.empty()) {
    for (const auto& n : order)
      if (n == given) return n;
    fail_usage("no [" + kind + " " + given + "] section in the attachment file");
  }
  if (order.size() == 1) return order[0];
  if (order.empty()) fail_usage("attachment file declares no [" + kind + "] section");
  fail_usage("attachment file declares several [" + kind + "] sections; pick one with --name");
}

/* ---- check ---- */

void run_check(RunReport& rep, const std::string& path) {
  Input in = slurp(path);
  AlgebraFile f = parse_algebra_file(in.text);
  stamp(rep, "check", {in});

  for (const CheckReport& r : check_suite(f.algebra)) rep.add_check(r.check, r);
  bool regular = regularity_check(f.algebra.alpha);
  rep.add("check.regular", regular ? "pass" : "fail");
  if (!regular) rep.all_pass = false;

  for (const auto& name : f.rep_order)
    for (const CheckReport& r : rep_check(f.reps.at(name)))
      rep.add_check("rep." + name + "." + r.check, r);
  for (const auto& name : f.cochain_order)
    rep.add_check("cochain." + name, cochain_validate(f.cochains.at(name)));
  for (const auto& name : f.map_order) {
    const DerivationCandidate& c = f.maps.at(name);
    if (c.klass.empty()) continue; // plain operator data, nothing is claimed
    rep.add("map." + name + ".class", c.klass);
    rep.add("map." + name + ".k", std::to_string(c.k));
    rep.add_check("map." + name, class_check(f.algebra, c));
  }
}

/* ---- d2 ---- */

struct D2Opts {
  std::string file, cochfile, target = "adjoint", name;
  int trials = 0, max_deg = 2;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

// "(g1,g2,...) -> value" for the first nonzero entry, or "0".
std::string first_nonzero(const Cochain& g) {
  for (const auto& [tuple, val] : g.values) {
    if (val.is_zero()) continue;
    std::string key = "(";
    for (std::size_t i = 0; i < tuple.size(); ++i)
      key += (i ? "," : "") + g.alg().mod->name(tuple[i]);
    return key + ") -> " + val.str();
  }
  return "0";
}

void run_d2(RunReport& rep, const D2Opts& o) {
  if (o.trials < 0) fail_usage("--trials must be >= 0");
  if (o.max_deg < 0) fail_usage("--max-deg must be >= 0");
  if (o.trials > 0 && !o.seed_given) fail_usage("--seed is required when --trials > 0");

  int shift = 0;
  bool shifted = false;
  if (o.target != "adjoint") {
    if (o.target.rfind("shift:", 0) != 0)
      fail_usage("--target must be 'adjoint' or 'shift:<int>', got '" + o.target + "'");
    try {
      std::size_t used = 0;
      shift = std::stoi(o.target.substr(6), &used);
      if (used != o.target.size() - 6) throw std::invalid_argument(o.target);
    } catch (...) {
      fail_usage("bad shift amount in '" + o.target + "'");
    }
    shifted = true;
  }

  Input in1 = slurp(o.file), in2 = slurp(o.cochfile);
  AlgebraFile f = parse_algebra_file(in1.text);
  AlgebraFile aux = parse_attachment_file(in2.text, f.algebra);
  std::string cname = pick_name(aux.cochain_order, o.name, "cochain");
  const Cochain& g = aux.cochains.at(cname);

  stamp(rep, "d2", {in1, in2});
  rep.add("cochain", cname);
  rep.add("cochain.arity", std::to_string(g.arity));
  rep.add("target", o.target);
  rep.add("trials", std::to_string(o.trials));
  if (o.trials > 0) {
    rep.add("seed", std::to_string(o.seed));
    rep.add("max-deg", std::to_string(o.max_deg));
  }

  auto twice = [&](const Cochain& c) {
    Cochain dd = shifted ? differential_s(differential_s(c, shift), shift)
                         : differential(differential(c));
    return first_nonzero(dd);
  };

  CheckReport vr = cochain_validate(g);
  rep.add_check("cochain.validate", vr);
  if (vr.pass()) {
    std::string w = twice(g);
    rep.add("residual.explicit", w);
    if (w != "0") rep.all_pass = false;
  }

  if (o.trials > 0) {
    std::vector<std::vector<Cochain>> pools;
    for (Parity p : {Parity::even, Parity::odd}) {
      std::vector<Cochain> basis =
          cochain_space_basis(g.target, g.arity, p, static_cast<std::uint32_t>(o.max_deg));
      if (!basis.empty()) pools.push_back(std::move(basis));
    }
    if (pools.empty())
      fail("ShapeMismatch", "no cochains of arity " + std::to_string(g.arity) +
                                " within degree " + std::to_string(o.max_deg));
    for (int i = 1; i <= o.trials; ++i) {
      const auto& basis = pools[static_cast<std::size_t>(i - 1) % pools.size()];
      Cochain rc = random_cochain(basis, o.seed + 1000003ull * static_cast<std::uint64_t>(i));
      std::string w = twice(rc);
      rep.add("residual.trial." + std::to_string(i), w);
      if (w != "0") rep.all_pass = false;
    }
  }
}

/* ---- solve ---- */

struct SolveOpts {
  std::string file, klass, out;
  int k = 0, deg_l = -1, deg_d = -1;
};

std::string canonical_class(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (const auto& name : deriv_class_names()) {
    std::string low = name;
    for (char& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == low) return name;
  }
  if (s == "center") return "center";
  fail_usage("unknown class '" + s + "' (expected der|gder|qder|c|qc|zder|center)");
}

// One line per nonzero column, prefix.<GEN>: the image element.
void emit_map_lines(RunReport& rep, const std::string& prefix, const ConformalMap& m) {
  for (std::size_t j = 0; j < m.dom()->rank(); ++j) {
    Element col(m.cod(), m.ctx());
    for (std::size_t i = 0; i < m.cod()->rank(); ++i) col.set_coeff(i, m.entry(i, j));
    if (!col.is_zero()) rep.add(prefix + "." + m.dom()->name(j), col.str());
  }
}

void run_solve(RunReport& rep, const SolveOpts& o) {
  if (o.deg_l < 0 || o.deg_d < 0) fail_usage("--deg-l and --deg-d must be >= 0");
  std::string klass = canonical_class(o.klass);

  Input in = slurp(o.file);
  AlgebraFile f = parse_algebra_file(in.text);
  stamp(rep, "solve", {in});
  rep.add("class", klass);
  if (klass != "center") rep.add("k", std::to_string(o.k));
  rep.add("bounds.deg_l", std::to_string(o.deg_l));
  rep.add("bounds.deg_d", std::to_string(o.deg_d));

  if (klass == "center") {
    if (!o.out.empty()) fail_usage("--out emits map sections; the center basis is not a map");
    std::vector<Element> basis = center_solve(f.algebra, o.deg_l, o.deg_d);
    rep.add("center.size", std::to_string(basis.size()));
    rep.add("completeness", "complete within maxdeg d=" + std::to_string(o.deg_d));
    for (std::size_t i = 0; i < basis.size(); ++i)
      rep.add("center." + std::to_string(i + 1), basis[i].str());
    return;
  }

  SolutionBasis sb = solve_class(f.algebra, klass, o.k, o.deg_l, o.deg_d);
  rep.add("basis.size", std::to_string(sb.basis.size()));
  rep.add("completeness", sb.completeness);
  rep.add("reverified", "yes"); // solve_class re-checks every vector before returning
  for (std::size_t i = 0; i < sb.basis.size(); ++i) {
    const DerivationCandidate& c = sb.basis[i];
    std::string prefix = "basis." + std::to_string(i + 1);
    rep.add(prefix + ".parity", parity_name(c.map.parity()));
    emit_map_lines(rep, prefix, c.map);
    if (c.comp_arg) emit_map_lines(rep, prefix + ".arg", *c.comp_arg);
    if (c.comp_out) emit_map_lines(rep, prefix + ".out", *c.comp_out);
  }

  if (!o.out.empty()) {
    AlgebraFile emitted{f.algebra, {}, {}, {}, {}, {}, {}};
    for (std::size_t i = 0; i < sb.basis.size(); ++i) {
      std::string name = "b" + std::to_string(i + 1);
      emitted.map_order.push_back(name);
      emitted.maps.emplace(name, sb.basis[i]);
    }
    std::ofstream outf(o.out, std::ios::binary);
    if (!outf) fail_usage("cannot write '" + o.out + "'");
    outf << serialize_algebra_file(emitted);
    rep.add("out", o.out);
  }
}

/* ---- nijenhuis / deform / extend ---- */

void run_nijenhuis(RunReport& rep, const std::string& file, const std::string& mapfile,
                   const std::string& name) {
  Input in1 = slurp(file), in2 = slurp(mapfile);
  AlgebraFile f = parse_algebra_file(in1.text);
  AlgebraFile aux = parse_attachment_file(in2.text, f.algebra);
  std::string mname = pick_name(aux.map_order, name, "map");
  ModuleMap mm = as_module_map(aux.maps.at(mname).map);

  stamp(rep, "nijenhuis", {in1, in2});
  rep.add("map", mname);
  NijenhuisDeformation nd = nijenhuis_deformation(f.algebra, mm);
  rep.add_check("nijenhuis", nd.nijenhuis);
  for (const CheckReport& r : nd.closure) rep.add_check(r.check, r);
  rep.add_check("triviality", nd.certificate.report);
}

void run_deform(RunReport& rep, const std::string& file, const std::string& cochfile,
                const std::string& name) {
  Input in1 = slurp(file), in2 = slurp(cochfile);
  AlgebraFile f = parse_algebra_file(in1.text);
  AlgebraFile aux = parse_attachment_file(in2.text, f.algebra);
  std::string cname = pick_name(aux.cochain_order, name, "cochain");

  stamp(rep, "deform", {in1, in2});
  rep.add("cochain", cname);
  auto [fam, reports] = deform(f.algebra, aux.cochains.at(cname));
  (void)fam;
  for (const CheckReport& r : reports) rep.add_check(r.check, r);
}

void run_extend(RunReport& rep, const std::string& file, const std::string& mapfile,
                const std::string& name, const std::string& gen) {
  Input in1 = slurp(file), in2 = slurp(mapfile);
  AlgebraFile f = parse_algebra_file(in1.text);
  AlgebraFile aux = parse_attachment_file(in2.text, f.algebra);
  std::string mname = pick_name(aux.map_order, name, "map");

  stamp(rep, "extend", {in1, in2});
  rep.add("map", mname);
  ConformalAlgebra ext = derivation_extension(f.algebra, aux.maps.at(mname).map, gen);
  rep.add("extend.gen", ext.mod->name(ext.mod->rank() - 1));
  for (const CheckReport& r : check_suite(ext)) rep.add_check(r.check, r);
}

/* ---- audit ---- */

void run_audit(RunReport& rep, const std::string& file, int k, int deg_l, int deg_d) {
  if (deg_l < 0 || deg_d < 0) fail_usage("--deg-l and --deg-d must be >= 0");

  Input in = slurp(file);
  AlgebraFile f = parse_algebra_file(in.text);
  stamp(rep, "audit", {in});
  rep.add("k", std::to_string(k));
  rep.add("bounds.deg_l", std::to_string(deg_l));
  rep.add("bounds.deg_d", std::to_string(deg_d));

  std::map<std::string, SolutionBasis> bases;
  for (const auto& name : deriv_class_names()) {
    bases.emplace(name, solve_class(f.algebra, name, k, deg_l, deg_d));
    rep.add("basis." + name + ".size", std::to_string(bases.at(name).basis.size()));
  }
  rep.add_check("audit", inclusion_audit(f.algebra, bases.at("ZDer"), bases.at("Der"),
                                         bases.at("QDer"), bases.at("GDer"), bases.at("C"),
                                         bases.at("QC")));
  rep.add_check("center", center_interaction_check(f.algebra, bases.at("C"), bases.at("QC")));
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto t0 = std::chrono::steady_clock::now();

  CLI::App app{"exact checks and subspace solvers for finite Hom-Lie conformal superalgebras"};
  app.require_subcommand(1);

  RunReport rep;
  std::string report_path;

  std::string c_file;
  CLI::App* c = app.add_subcommand("check", "axiom suite + attachment checks on one file");
  c->add_option("file", c_file, "algebra file")->required();
  c->callback([&] { run_check(rep, c_file); });

  D2Opts d2o;
  CLI::App* d2 = app.add_subcommand("d2", "apply the differential twice; every residual must vanish");
  d2->add_option("file", d2o.file, "algebra file")->required();
  d2->add_option("cochfile", d2o.cochfile, "attachment file with the explicit cochain")->required();
  d2->add_option("--target", d2o.target, "adjoint (default) or shift:<int>");
  d2->add_option("--trials", d2o.trials, "number of seeded random cochains (default 0)");
  auto* seed_opt = d2->add_option("--seed", d2o.seed, "seed for the random cochains");
  d2->add_option("--max-deg", d2o.max_deg, "degree bound for the random cochain space (default 2)");
  d2->add_option("--name", d2o.name, "cochain section to use");
  d2->callback([&] {
    d2o.seed_given = seed_opt->count() > 0;
    run_d2(rep, d2o);
  });

  SolveOpts so;
  CLI::App* s = app.add_subcommand("solve", "basis of a derivation-type subspace within a degree window");
  s->add_option("file", so.file, "algebra file")->required();
  s->add_option("--class", so.klass, "der|gder|qder|c|qc|zder|center")->required();
  s->add_option("--k", so.k, "twist power (default 0)");
  s->add_option("--deg-l", so.deg_l, "max degree in the action slot")->required();
  s->add_option("--deg-d", so.deg_d, "max degree in d")->required();
  s->add_option("--out", so.out, "write the basis as a re-parsable file");
  s->callback([&] { run_solve(rep, so); });

  std::string n_file, n_mapfile, n_name;
  CLI::App* n = app.add_subcommand("nijenhuis", "Nijenhuis check + generated deformation + transport certificate");
  n->add_option("file", n_file, "algebra file")->required();
  n->add_option("mapfile", n_mapfile, "attachment file with the operator")->required();
  n->add_option("--name", n_name, "map section to use");
  n->callback([&] { run_nijenhuis(rep, n_file, n_mapfile, n_name); });

  std::string de_file, de_cochfile, de_name;
  CLI::App* de = app.add_subcommand("deform", "order-by-order closure of a one-parameter deformation");
  de->add_option("file", de_file, "algebra file")->required();
  de->add_option("cochfile", de_cochfile, "attachment file with the deforming 2-cochain")->required();
  de->add_option("--name", de_name, "cochain section to use");
  de->callback([&] { run_deform(rep, de_file, de_cochfile, de_name); });

  std::string e_file, e_mapfile, e_name, e_gen = "D";
  CLI::App* e = app.add_subcommand("extend", "one-generator extension by an operator + axiom suite");
  e->add_option("file", e_file, "algebra file")->required();
  e->add_option("mapfile", e_mapfile, "attachment file with the operator")->required();
  e->add_option("--name", e_name, "map section to use");
  e->add_option("--gen", e_gen, "name for the new generator (default D)");
  e->callback([&] { run_extend(rep, e_file, e_mapfile, e_name, e_gen); });

  std::string a_file;
  int a_k = 0, a_deg_l = -1, a_deg_d = -1;
  CLI::App* a = app.add_subcommand("audit", "inclusion chain, ideal/lemma containments and center interplay");
  a->add_option("file", a_file, "algebra file")->required();
  a->add_option("--k", a_k, "twist power (default 0)");
  a->add_option("--deg-l", a_deg_l, "max degree in the action slot")->required();
  a->add_option("--deg-d", a_deg_d, "max degree in d")->required();
  a->callback([&] { run_audit(rep, a_file, a_k, a_deg_l, a_deg_d); });

  for (CLI::App* sub : {c, d2, s, n, de, e, a})
    sub->add_option("--report", report_path, "also write the report to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    int r = app.exit(pe, out, err);
    return r == 0 ? 0 : 2;
  } catch (const Error& he) {
    err << "error: " << he.code << ": " << he.what() << "\n";
    return he.kind == Error::Kind::structural ? 3 : 2;
  } catch (const std::exception& ex) {
    err << "error: internal: " << ex.what() << "\n";
    return 3;
  }

  rep.finish();
  std::string text = rep.str();
  out << text;
  if (!report_path.empty()) {
    std::ofstream rf(report_path, std::ios::binary);
    if (!rf) {
      err << "error: UsageError: cannot write '" << report_path << "'\n";
      return 2;
    }
    rf << text;
  }

  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  err << "# elapsed_ms: " << ms << "\n";
  return rep.all_pass ? 0 : 1;
}

} // namespace homconf
