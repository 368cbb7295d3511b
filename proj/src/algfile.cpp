#include "homconf/algfile.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "homconf/error.hpp"

namespace homconf {

namespace {

[[noreturn]] void perr(int line, const std::string& msg) {
  fail_parse("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> tokens_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

bool ident_ok(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

// Names the polynomial layer owns (d, t, the slot stems l/m and the fresh-z
// namespace with any numeric suffix) plus the section keywords a generator
// could otherwise shadow on the key side of an entry.
bool reserved_name(const std::string& s) {
  if (s == "d" || s == "t") return true;
  if ((s[0] == 'l' || s[0] == 'm' || s[0] == 'z') &&
      std::all_of(s.begin() + 1, s.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }))
    return true;
  static const char* const keywords[] = {"arity",  "beta",   "class", "companion_arg",
                                         "companion_out", "k", "module", "parity",
                                         "symbols", "value"};
  for (const char* k : keywords)
    if (s == k) return true;
  return false;
}

struct RawLine {
  int no;
  std::string text;
};

struct Section {
  std::string kind, name;
  int line = 0;
  std::vector<RawLine> body;
};

std::vector<Section> split_sections(const std::string& text) {
  std::vector<Section> out;
  std::istringstream in(text);
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    bool quoted = false;
    std::string s;
    for (char c : raw) {
      if (c == '"') quoted = !quoted;
      if (c == '#' && !quoted) break;
      s += c;
    }
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') perr(no, "unterminated section header");
      std::vector<std::string> ts = tokens_of(s.substr(1, s.size() - 2));
      if (ts.empty()) perr(no, "empty section header");
      Section sec;
      sec.kind = ts[0];
      sec.line = no;
      bool named = sec.kind == "rep" || sec.kind == "cochain" || sec.kind == "map";
      bool plain = sec.kind == "generators" || sec.kind == "alpha" || sec.kind == "bracket";
      if (!named && !plain) perr(no, "unknown section kind '" + sec.kind + "'");
      if (named) {
        if (ts.size() != 2) perr(no, "[" + sec.kind + "] needs exactly one name");
        sec.name = ts[1];
        if (!ident_ok(sec.name)) perr(no, "bad section name '" + sec.name + "'");
      } else if (ts.size() != 1) {
        perr(no, "[" + sec.kind + "] takes no name");
      }
      out.push_back(std::move(sec));
      continue;
    }
    if (out.empty()) perr(no, "entry before any section header");
    out.back().body.push_back({no, s});
  }
  return out;
}

struct Entry {
  int no = 0;
  std::vector<std::string> key;
  std::string value;
  bool quoted = false;
};

Entry split_entry(const RawLine& ln) {
  std::size_t eq = ln.text.find('=');
  if (eq == std::string::npos) perr(ln.no, "expected KEY = value");
  Entry e;
  e.no = ln.no;
  e.key = tokens_of(ln.text.substr(0, eq));
  if (e.key.empty()) perr(ln.no, "missing key before '='");
  std::string v = trim(ln.text.substr(eq + 1));
  if (!v.empty() && v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') perr(ln.no, "unterminated quoted value");
    e.value = v.substr(1, v.size() - 2);
    e.quoted = true;
  } else {
    e.value = v;
    e.quoted = false;
  }
  return e;
}

std::string quoted_value(const Entry& e) {
  if (!e.quoted) perr(e.no, "expected a quoted value");
  return e.value;
}

std::string plain_value(const Entry& e) {
  if (e.quoted) perr(e.no, "unexpected quoted value");
  if (e.value.empty()) perr(e.no, "missing value");
  return e.value;
}

int int_value(const Entry& e) {
  std::string v = plain_value(e);
  try {
    std::size_t used = 0;
    int n = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (...) {
    perr(e.no, "expected an integer, got '" + v + "'");
  }
}

Parity parity_value(int no, const std::string& s) {
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  perr(no, "parity must be 'even' or 'odd', got '" + s + "'");
}

Element element_value(const Entry& e, const ModulePtr& mod, const Context& ctx) {
  std::string v = quoted_value(e);
  try {
    return parse_element(v, mod, ctx);
  } catch (const Error& err) {
    if (err.kind != Error::Kind::parse) throw;
    perr(e.no, err.what());
  }
}

// `NAME:parity` with optional whitespace around the colon.
std::pair<std::string, Parity> gen_decl(int no, const std::string& text,
                                        const std::vector<std::pair<std::string, Parity>>& prior) {
  std::size_t colon = text.find(':');
  if (colon == std::string::npos) perr(no, "expected NAME:parity");
  std::string name = trim(text.substr(0, colon));
  std::string par = trim(text.substr(colon + 1));
  if (!ident_ok(name)) perr(no, "bad generator name '" + name + "'");
  if (reserved_name(name)) perr(no, "generator name '" + name + "' is reserved");
  for (const auto& g : prior)
    if (g.first == name) perr(no, "duplicate generator '" + name + "'");
  return {name, parity_value(no, par)};
}

std::vector<std::string> symbol_list(const Entry& e, const ModulePtr& mod) {
  std::vector<std::string> syms;
  for (const std::string& s : tokens_of(plain_value(e))) {
    if (!ident_ok(s)) perr(e.no, "bad symbol '" + s + "'");
    if (reserved_name(s)) perr(e.no, "symbol '" + s + "' is reserved");
    if (mod->index_of(s)) perr(e.no, "symbol '" + s + "' collides with a generator");
    if (std::find(syms.begin(), syms.end(), s) != syms.end())
      perr(e.no, "duplicate symbol '" + s + "'");
    syms.push_back(s);
  }
  return syms;
}

ConformalAlgebra assemble_algebra(const Section& gsec, const Section& asec, const Section& bsec) {
  std::vector<std::pair<std::string, Parity>> gens;
  for (const auto& ln : gsec.body) gens.push_back(gen_decl(ln.no, ln.text, gens));
  if (gens.empty()) perr(gsec.line, "[generators] must declare at least one generator");
  ModulePtr mod = make_module(std::move(gens));
  std::size_t rank = mod->rank();

  // The bracket section may widen both contexts with passive symbols, so its
  // metadata is read before any polynomial.
  std::vector<std::string> syms;
  bool have_syms = false;
  std::vector<Entry> bracket_entries;
  for (const auto& ln : bsec.body) {
    Entry e = split_entry(ln);
    if (e.key.size() == 1 && e.key[0] == "symbols") {
      if (have_syms) perr(e.no, "duplicate 'symbols' key");
      syms = symbol_list(e, mod);
      have_syms = true;
    } else {
      bracket_entries.push_back(std::move(e));
    }
  }

  std::vector<std::string> tslots = {"l"};
  tslots.insert(tslots.end(), syms.begin(), syms.end());
  Context table_ctx = Context::of(tslots);
  Context alpha_ctx = Context::of(syms);

  ModuleMap alpha(mod, mod, Parity::even, alpha_ctx);
  std::set<std::string> seen_alpha;
  for (const auto& ln : asec.body) {
    Entry e = split_entry(ln);
    if (e.key.size() != 1) perr(e.no, "alpha key must be a single generator");
    auto j = mod->index_of(e.key[0]);
    if (!j) perr(e.no, "unknown generator '" + e.key[0] + "'");
    if (!seen_alpha.insert(e.key[0]).second) perr(e.no, "duplicate alpha entry for '" + e.key[0] + "'");
    Element img = element_value(e, mod, alpha_ctx);
    for (const auto& [i, p] : img.coeffs()) alpha.set_entry(i, *j, p);
  }

  std::vector<std::vector<Element>> table(
      rank, std::vector<Element>(rank, Element::zero(mod, table_ctx)));
  std::set<std::pair<std::size_t, std::size_t>> seen_pair;
  for (const auto& e : bracket_entries) {
    if (e.key.size() != 2) perr(e.no, "bracket key must name two generators");
    auto i = mod->index_of(e.key[0]);
    auto j = mod->index_of(e.key[1]);
    if (!i) perr(e.no, "unknown generator '" + e.key[0] + "'");
    if (!j) perr(e.no, "unknown generator '" + e.key[1] + "'");
    if (!seen_pair.insert({*i, *j}).second)
      perr(e.no, "duplicate bracket entry (" + e.key[0] + "," + e.key[1] + ")");
    table[*i][*j] = element_value(e, mod, table_ctx);
  }

  return make_algebra(mod, std::move(alpha), std::move(table));
}

Representation assemble_rep(const Section& sec, const ConformalAlgebra& A) {
  std::vector<Entry> entries;
  for (const auto& ln : sec.body) entries.push_back(split_entry(ln));

  ModulePtr m2;
  bool have_module = false;
  for (const auto& e : entries) {
    if (e.key.size() == 1 && e.key[0] == "module") {
      if (have_module) perr(e.no, "duplicate 'module' key");
      std::vector<std::pair<std::string, Parity>> gens;
      for (const std::string& tok : tokens_of(plain_value(e)))
        gens.push_back(gen_decl(e.no, tok, gens));
      if (gens.empty()) perr(e.no, "rep module must declare at least one generator");
      m2 = make_module(std::move(gens));
      have_module = true;
    }
  }
  if (!have_module) perr(sec.line, "[rep " + sec.name + "] needs a 'module' key");

  ModuleMap beta(m2, m2, Parity::even, Context::empty());
  Context lctx = Context::of({"l"});
  std::vector<ConformalMap> rho;
  for (std::size_t i = 0; i < A.mod->rank(); ++i)
    rho.emplace_back(m2, m2, A.mod->parity(i), lctx);

  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (e.key.size() == 1 && e.key[0] == "module") continue;
    if (e.key.size() != 2) perr(e.no, "expected 'beta GEN' or 'ALGGEN MODGEN' key");
    std::string flat = e.key[0] + " " + e.key[1];
    if (!seen.insert(flat).second) perr(e.no, "duplicate entry '" + flat + "'");
    if (e.key[0] == "beta") {
      auto j = m2->index_of(e.key[1]);
      if (!j) perr(e.no, "unknown module generator '" + e.key[1] + "'");
      Element img = element_value(e, m2, Context::empty());
      for (const auto& [i, p] : img.coeffs()) beta.set_entry(i, *j, p);
    } else {
      auto gi = A.mod->index_of(e.key[0]);
      if (!gi) perr(e.no, "unknown algebra generator '" + e.key[0] + "'");
      auto j = m2->index_of(e.key[1]);
      if (!j) perr(e.no, "unknown module generator '" + e.key[1] + "'");
      Element img = element_value(e, m2, lctx);
      for (const auto& [i, p] : img.coeffs()) rho[*gi].set_entry(i, *j, p);
    }
  }
  return make_representation(A, m2, std::move(beta), std::move(rho));
}

Cochain assemble_cochain(const Section& sec, const Representation& adj) {
  const ModulePtr& amod = adj.alg.mod;
  std::vector<Entry> entries;
  for (const auto& ln : sec.body) entries.push_back(split_entry(ln));

  std::optional<int> arity;
  std::optional<Parity> par;
  std::vector<std::string> syms;
  bool have_syms = false;
  std::vector<Entry> value_entries;
  for (const auto& e : entries) {
    if (e.key.size() == 1 && e.key[0] == "arity") {
      if (arity) perr(e.no, "duplicate 'arity' key");
      arity = int_value(e);
      if (*arity < 0) perr(e.no, "arity must be >= 0");
    } else if (e.key.size() == 1 && e.key[0] == "parity") {
      if (par) perr(e.no, "duplicate 'parity' key");
      par = parity_value(e.no, plain_value(e));
    } else if (e.key.size() == 1 && e.key[0] == "symbols") {
      if (have_syms) perr(e.no, "duplicate 'symbols' key");
      syms = symbol_list(e, amod);
      have_syms = true;
    } else {
      value_entries.push_back(e);
    }
  }
  if (!arity) perr(sec.line, "[cochain " + sec.name + "] needs an 'arity' key");
  if (!par) perr(sec.line, "[cochain " + sec.name + "] needs a 'parity' key");

  std::vector<std::string> vslots = cochain_slots(*arity);
  vslots.insert(vslots.end(), syms.begin(), syms.end());
  Context vctx = Context::of(vslots);

  std::map<std::vector<std::size_t>, Element> values;
  for (const auto& e : value_entries) {
    std::vector<std::size_t> tuple;
    if (*arity == 0) {
      if (e.key.size() != 1 || e.key[0] != "value")
        perr(e.no, "arity-0 cochain takes a single 'value' entry");
    } else {
      if (e.key.size() != static_cast<std::size_t>(*arity))
        perr(e.no, "value key must name " + std::to_string(*arity) + " generators");
      for (const std::string& g : e.key) {
        auto gi = amod->index_of(g);
        if (!gi) perr(e.no, "unknown generator '" + g + "'");
        tuple.push_back(*gi);
      }
      if (!std::is_sorted(tuple.begin(), tuple.end()))
        perr(e.no, "value tuple must be in non-decreasing generator order");
    }
    if (values.count(tuple)) perr(e.no, "duplicate value tuple");
    values.emplace(std::move(tuple), element_value(e, amod, vctx));
  }
  return make_cochain(adj, *arity, *par, values, Context::of(syms));
}

struct PendingMap {
  std::string name, arg_ref, out_ref;
  int arg_line = 0, out_line = 0;
};

DerivationCandidate assemble_map(const Section& sec, const ModulePtr& mod, PendingMap& refs) {
  std::vector<Entry> entries;
  for (const auto& ln : sec.body) entries.push_back(split_entry(ln));

  Parity par = Parity::even;
  int k = 0;
  std::string klass;
  std::vector<std::string> syms;
  std::set<std::string> seen_meta;
  std::vector<Entry> image_entries;
  for (const auto& e : entries) {
    const std::string& head = e.key[0];
    bool meta = e.key.size() == 1 &&
                (head == "parity" || head == "k" || head == "class" || head == "symbols" ||
                 head == "companion_arg" || head == "companion_out");
    if (!meta) {
      image_entries.push_back(e);
      continue;
    }
    if (!seen_meta.insert(head).second) perr(e.no, "duplicate '" + head + "' key");
    if (head == "parity") {
      par = parity_value(e.no, plain_value(e));
    } else if (head == "k") {
      k = int_value(e);
    } else if (head == "class") {
      klass = plain_value(e);
      const auto& names = deriv_class_names();
      if (std::find(names.begin(), names.end(), klass) == names.end())
        perr(e.no, "unknown class '" + klass + "'");
    } else if (head == "symbols") {
      syms = symbol_list(e, mod);
    } else if (head == "companion_arg") {
      refs.arg_ref = plain_value(e);
      refs.arg_line = e.no;
    } else {
      refs.out_ref = plain_value(e);
      refs.out_line = e.no;
    }
  }

  std::vector<std::string> slots = {"l"};
  slots.insert(slots.end(), syms.begin(), syms.end());
  Context ctx = Context::of(slots);
  ConformalMap m(mod, mod, par, ctx);
  std::set<std::string> seen;
  for (const auto& e : image_entries) {
    if (e.key.size() != 1) perr(e.no, "map key must be a single generator");
    auto j = mod->index_of(e.key[0]);
    if (!j) perr(e.no, "unknown key or generator '" + e.key[0] + "'");
    if (!seen.insert(e.key[0]).second) perr(e.no, "duplicate image for '" + e.key[0] + "'");
    Element img = element_value(e, mod, ctx);
    for (const auto& [i, p] : img.coeffs()) m.set_entry(i, *j, p);
  }
  m.validate("map " + sec.name);
  return DerivationCandidate{std::move(m), k, std::move(klass), std::nullopt, std::nullopt};
}

AlgebraFile assemble(const std::vector<Section>& secs, const ConformalAlgebra* host) {
  std::set<std::string> seen_secs;
  for (const auto& s : secs) {
    std::string key = s.kind + "|" + s.name;
    if (!seen_secs.insert(key).second)
      perr(s.line, "duplicate section [" + s.kind + (s.name.empty() ? "" : " " + s.name) + "]");
  }

  const Section* gsec = nullptr;
  const Section* asec = nullptr;
  const Section* bsec = nullptr;
  for (const auto& s : secs) {
    if (s.kind == "generators") gsec = &s;
    if (s.kind == "alpha") asec = &s;
    if (s.kind == "bracket") bsec = &s;
  }

  std::optional<ConformalAlgebra> alg;
  if (host) {
    const Section* bad = gsec ? gsec : asec ? asec : bsec;
    if (bad) perr(bad->line, "attachment file may not declare algebra sections");
    alg = *host;
  } else {
    if (!gsec) fail_parse("missing [generators] section");
    if (!asec) fail_parse("missing [alpha] section");
    if (!bsec) fail_parse("missing [bracket] section");
    alg = assemble_algebra(*gsec, *asec, *bsec);
  }
  AlgebraFile out{std::move(*alg), {}, {}, {}, {}, {}, {}};

  // The adjoint is only materialized when a cochain section needs a target.
  std::optional<Representation> adj;
  std::vector<PendingMap> pending;
  for (const auto& s : secs) {
    if (s.kind == "rep") {
      out.rep_order.push_back(s.name);
      out.reps.emplace(s.name, assemble_rep(s, out.algebra));
    } else if (s.kind == "cochain") {
      if (!adj) adj = adjoint(out.algebra);
      out.cochain_order.push_back(s.name);
      out.cochains.emplace(s.name, assemble_cochain(s, *adj));
    } else if (s.kind == "map") {
      PendingMap refs;
      refs.name = s.name;
      out.map_order.push_back(s.name);
      out.maps.emplace(s.name, assemble_map(s, out.algebra.mod, refs));
      if (!refs.arg_ref.empty() || !refs.out_ref.empty()) pending.push_back(std::move(refs));
    }
  }

  // Companion references resolve against the full map list, so a companion
  // section may follow its owner.
  for (const auto& p : pending) {
    auto& owner = out.maps.at(p.name);
    if (!p.arg_ref.empty()) {
      auto it = out.maps.find(p.arg_ref);
      if (it == out.maps.end())
        perr(p.arg_line, "companion_arg references unknown map '" + p.arg_ref + "'");
      owner.comp_arg = it->second.map;
    }
    if (!p.out_ref.empty()) {
      auto it = out.maps.find(p.out_ref);
      if (it == out.maps.end())
        perr(p.out_line, "companion_out references unknown map '" + p.out_ref + "'");
      owner.comp_out = it->second.map;
    }
  }
  return out;
}

/* ---- serialization ---- */

// Column j of a matrix, rendered as the image element the file format uses.
template <typename MapT>
std::string column_str(const MapT& m, std::size_t j) {
  Element col(m.cod(), m.ctx());
  for (std::size_t i = 0; i < m.cod()->rank(); ++i) col.set_coeff(i, m.entry(i, j));
  return col.str();
}

void emit_symbols(std::ostringstream& o, const Context& pass) {
  if (pass.size() == 0) return;
  o << "symbols =";
  for (const auto& s : pass.slots()) o << " " << s;
  o << "\n";
}

void emit_map_section(std::ostringstream& o, const std::string& name,
                      const DerivationCandidate& c, const std::string& argn,
                      const std::string& outn) {
  o << "\n[map " << name << "]\n";
  o << "parity = " << parity_name(c.map.parity()) << "\n";
  o << "k = " << c.k << "\n";
  if (!c.klass.empty()) o << "class = " << c.klass << "\n";
  emit_symbols(o, c.map.passives());
  if (!argn.empty()) o << "companion_arg = " << argn << "\n";
  if (!outn.empty()) o << "companion_out = " << outn << "\n";
  for (std::size_t j = 0; j < c.map.dom()->rank(); ++j) {
    std::string col = column_str(c.map, j);
    if (col != "0") o << c.map.dom()->name(j) << " = \"" << col << "\"\n";
  }
}

} // namespace

AlgebraFile parse_algebra_file(const std::string& text) {
  return assemble(split_sections(text), nullptr);
}

AlgebraFile parse_attachment_file(const std::string& text, const ConformalAlgebra& host) {
  return assemble(split_sections(text), &host);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_usage("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AlgebraFile load_algebra_file(const std::string& path) {
  return parse_algebra_file(read_file(path));
}

AlgebraFile load_attachment_file(const std::string& path, const ConformalAlgebra& host) {
  return parse_attachment_file(read_file(path), host);
}

ModuleMap as_module_map(const ConformalMap& f) {
  Context pctx = f.passives();
  ModuleMap m(f.dom(), f.cod(), f.parity(), pctx);
  for (std::size_t i = 0; i < f.cod()->rank(); ++i)
    for (std::size_t j = 0; j < f.dom()->rank(); ++j) {
      const Poly& p = f.entry(i, j);
      if (p.deg_in("l") > 0)
        fail("NotDLinear", "entry (" + f.cod()->name(i) + "," + f.dom()->name(j) +
                               ") uses the action slot l; a d-matrix is required here");
      m.set_entry(i, j, p.restricted(pctx));
    }
  return m;
}

std::string serialize_algebra_file(const AlgebraFile& f) {
  const ConformalAlgebra& A = f.algebra;
  std::ostringstream o;

  o << "[generators]\n";
  for (std::size_t i = 0; i < A.mod->rank(); ++i)
    o << A.mod->name(i) << ":" << parity_name(A.mod->parity(i)) << "\n";

  o << "\n[alpha]\n";
  for (std::size_t j = 0; j < A.mod->rank(); ++j) {
    std::string col = column_str(A.alpha, j);
    if (col != "0") o << A.mod->name(j) << " = \"" << col << "\"\n";
  }

  o << "\n[bracket]\n";
  emit_symbols(o, A.passives());
  for (std::size_t i = 0; i < A.mod->rank(); ++i)
    for (std::size_t j = 0; j < A.mod->rank(); ++j)
      if (!A.entry(i, j).is_zero())
        o << A.mod->name(i) << " " << A.mod->name(j) << " = \"" << A.entry(i, j).str() << "\"\n";

  for (const auto& name : f.rep_order) {
    const Representation& r = f.reps.at(name);
    o << "\n[rep " << name << "]\n";
    o << "module =";
    for (std::size_t i = 0; i < r.mod->rank(); ++i)
      o << " " << r.mod->name(i) << ":" << parity_name(r.mod->parity(i));
    o << "\n";
    for (std::size_t j = 0; j < r.mod->rank(); ++j) {
      std::string col = column_str(r.beta, j);
      if (col != "0") o << "beta " << r.mod->name(j) << " = \"" << col << "\"\n";
    }
    for (std::size_t i = 0; i < A.mod->rank(); ++i)
      for (std::size_t j = 0; j < r.mod->rank(); ++j) {
        std::string col = column_str(r.rho[i], j);
        if (col != "0")
          o << A.mod->name(i) << " " << r.mod->name(j) << " = \"" << col << "\"\n";
      }
  }

  for (const auto& name : f.cochain_order) {
    const Cochain& g = f.cochains.at(name);
    o << "\n[cochain " << name << "]\n";
    o << "arity = " << g.arity << "\n";
    o << "parity = " << parity_name(g.parity) << "\n";
    emit_symbols(o, g.passives());
    for (const auto& [tuple, val] : g.values) {
      if (val.is_zero()) continue;
      std::string key;
      if (tuple.empty()) {
        key = "value";
      } else {
        for (std::size_t i = 0; i < tuple.size(); ++i)
          key += (i ? " " : "") + A.mod->name(tuple[i]);
      }
      o << key << " = \"" << val.str() << "\"\n";
    }
  }

  std::set<std::string> used(f.map_order.begin(), f.map_order.end());
  auto fresh = [&used](std::string base) {
    while (used.count(base)) base += "_x";
    used.insert(base);
    return base;
  };
  for (const auto& name : f.map_order) {
    const DerivationCandidate& c = f.maps.at(name);
    std::string argn = c.comp_arg ? fresh(name + "_arg") : "";
    std::string outn = c.comp_out ? fresh(name + "_out") : "";
    emit_map_section(o, name, c, argn, outn);
    if (c.comp_arg)
      emit_map_section(o, argn, DerivationCandidate{*c.comp_arg, 0, "", {}, {}}, "", "");
    if (c.comp_out)
      emit_map_section(o, outn, DerivationCandidate{*c.comp_out, 0, "", {}, {}}, "", "");
  }

  return o.str();
}

} // namespace homconf
