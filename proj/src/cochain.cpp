#include "homconf/cochain.hpp"

#include <cctype>
#include <functional>
#include <random>
#include <tuple>

#include "homconf/error.hpp"
#include "homconf/linsolve.hpp"

namespace homconf {

namespace {

bool is_numbered_l(const std::string& name) {
  if (name.size() < 2 || name[0] != 'l') return false;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  return true;
}

std::string tuple_str(const GradedModule& mod, const std::vector<std::size_t>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += mod.name(t[i]);
  }
  return s + ")";
}

// Simultaneous slot substitution on every coefficient.
Element subst_all(const Element& e, const std::map<std::string, Poly>& images,
                  const Context& target) {
  Element r(e.mod(), target);
  for (const auto& [i, p] : e.coeffs()) r.set_coeff(i, p.substituted_many(images, target));
  return r;
}

void emit_tuples(std::size_t rank, int len, std::size_t lo, std::vector<std::size_t>& cur,
                 std::vector<std::vector<std::size_t>>& out) {
  if (len == 0) {
    out.push_back(cur);
    return;
  }
  for (std::size_t k = lo; k < rank; ++k) {
    cur.push_back(k);
    emit_tuples(rank, len - 1, k, cur, out);
    cur.pop_back();
  }
}

// All non-decreasing index tuples of the given length over [0, rank).
std::vector<std::vector<std::size_t>> sorted_tuples(std::size_t rank, int len) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  emit_tuples(rank, len, 0, cur, out);
  return out;
}

int parity_bit(Parity p) { return p == Parity::odd ? 1 : 0; }

} // namespace

Context Cochain::passives() const {
  Context p = val_ctx;
  for (const auto& s : cochain_slots(arity)) p = p.without(s);
  return p;
}

std::vector<std::string> cochain_slots(int arity) {
  std::vector<std::string> s;
  s.reserve(static_cast<std::size_t>(arity < 0 ? 0 : arity));
  for (int i = 1; i <= arity; ++i) s.push_back("l" + std::to_string(i));
  return s;
}

Cochain make_cochain(const Representation& target, int arity, Parity parity,
                     const std::map<std::vector<std::size_t>, Element>& values,
                     const Context& passives) {
  if (arity < 0) fail("ShapeMismatch", "cochain arity must be >= 0");
  for (const auto& s : passives.slots())
    if (s == "d" || s == "t" || is_numbered_l(s))
      fail("SlotCollision", "cochain passive slot '" + s + "' is reserved");
  Cochain g{arity, parity, target, Context::of(cochain_slots(arity)).united(passives), {}};
  const std::size_t rank = target.alg.mod->rank();
  for (auto& t : sorted_tuples(rank, arity))
    g.values.emplace(std::move(t), Element::zero(target.mod, g.val_ctx));
  for (const auto& [t, v] : values) {
    if (t.size() != static_cast<std::size_t>(arity))
      fail("ShapeMismatch", "cochain value tuple has the wrong length");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] >= rank) fail("ShapeMismatch", "cochain value tuple index out of range");
      if (i && t[i] < t[i - 1])
        fail("ShapeMismatch", "cochain values go on sorted generator tuples");
    }
    if (!same_module(v.mod(), target.mod))
      fail("ShapeMismatch", "cochain value lives in the wrong module");
    if (!g.val_ctx.contains_all(v.ctx()))
      fail("SlotCollision", "cochain value uses a slot outside l1..ln and the passives");
    g.values.at(t) = v.lifted(g.val_ctx);
  }
  return g;
}

Element cochain_eval(const Cochain& g, const std::vector<Element>& args,
                     const std::vector<Poly>& slot_at) {
  const std::size_t n = static_cast<std::size_t>(g.arity);
  if (args.size() != n || slot_at.size() != n)
    fail("ShapeMismatch", "cochain_eval needs one argument and one slot value per arity");
  const ModulePtr& R = g.alg().mod;
  Context u = g.passives();
  for (const auto& a : args) {
    if (!same_module(a.mod(), R))
      fail("ShapeMismatch", "cochain argument lives in the wrong module");
    u = u.united(a.ctx());
  }
  for (const auto& s : slot_at) u = u.united(s.ctx());

  Element acc(g.target.mod, u);
  // Multilinear decomposition: one (generator, coefficient) component per
  // argument, the coefficient's d already flipped to -slot by antilinearity.
  std::vector<std::vector<std::pair<std::size_t, Poly>>> parts(n);
  for (std::size_t i = 0; i < n; ++i) {
    Poly minus_slot = -slot_at[i].lifted(u);
    for (const auto& [k, c] : args[i].coeffs())
      parts[i].emplace_back(k, c.lifted(u).substituted("d", minus_slot));
    if (parts[i].empty()) return acc; // argument is zero
  }

  const auto names = cochain_slots(g.arity);
  std::vector<std::size_t> pick(n, 0);
  while (true) {
    std::vector<std::size_t> idx(n);
    std::vector<Poly> sl(n, Poly::zero(u));
    Poly scalar = Poly::constant(u, Rational(1));
    for (std::size_t i = 0; i < n; ++i) {
      idx[i] = parts[i][pick[i]].first;
      scalar = scalar * parts[i][pick[i]].second;
      sl[i] = slot_at[i].lifted(u);
    }
    // Sort the tuple by signed adjacent transpositions, slots traveling with
    // their generators. Equal indices are never swapped, so the sign is
    // well defined.
    int sign = 1;
    for (std::size_t a = 0; a + 1 < n; ++a)
      for (std::size_t b = 0; b + 1 < n - a; ++b)
        if (idx[b] > idx[b + 1]) {
          sign *= -koszul(R->parity(idx[b]), R->parity(idx[b + 1]));
          std::swap(idx[b], idx[b + 1]);
          std::swap(sl[b], sl[b + 1]);
        }
    std::map<std::string, Poly> images;
    for (std::size_t i = 0; i < n; ++i) images.emplace(names[i], sl[i]);
    Element term = subst_all(g.values.at(idx), images, u);
    acc += term.scaled(scalar.scaled(Rational(sign)));

    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++pick[i] < parts[i].size()) break;
      pick[i] = 0;
    }
    if (i == n) break; // odometer wrapped (runs exactly once for arity 0)
  }
  return acc;
}

CheckReport cochain_validate(const Cochain& g) {
  CheckReport r;
  r.check = "cochain.validate";
  const auto& A = g.alg();
  const ModulePtr& R = A.mod;
  const std::size_t n = static_cast<std::size_t>(g.arity);
  const auto names = cochain_slots(g.arity);

  for (const auto& [t, v] : g.values) {
    Parity want = g.parity;
    for (std::size_t i : t) want = want + R->parity(i);
    if (!v.has_parity(want)) r.add("parity" + tuple_str(*R, t), v.str());
  }

  // Repeated adjacent generators: the value must match its own slot swap up
  // to the transposition sign. This is the only part of skew-symmetry not
  // already fixed by storing sorted tuples.
  for (const auto& [t, v] : g.values) {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (t[k] != t[k + 1]) continue;
      std::map<std::string, Poly> im;
      im.emplace(names[k], Poly::var(g.val_ctx, names[k + 1]));
      im.emplace(names[k + 1], Poly::var(g.val_ctx, names[k]));
      Element swapped = subst_all(v, im, g.val_ctx);
      int sgn = -koszul(R->parity(t[k]), R->parity(t[k]));
      Element res = v - swapped.scaled(Rational(sgn));
      if (!res.is_zero())
        r.add("swap" + tuple_str(*R, t) + "@" + std::to_string(k + 1), res.str());
    }
  }

  // Distinct adjacent generators: evaluation on the transposed order must
  // reproduce the stored value with the sign. Exercises the evaluation path.
  for (const auto& [t, v] : g.values) {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (t[k] == t[k + 1]) continue;
      std::vector<Element> args;
      std::vector<Poly> sl;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = (i == k) ? k + 1 : (i == k + 1) ? k : i;
        args.push_back(Element::generator(R, Context::empty(), t[j]));
        sl.push_back(Poly::var(g.val_ctx, names[j]));
      }
      Element ev = cochain_eval(g, args, sl);
      int sgn = -koszul(R->parity(t[k]), R->parity(t[k + 1]));
      Element res = ev - v.lifted(ev.ctx()).scaled(Rational(sgn));
      if (!res.is_zero())
        r.add("transpose" + tuple_str(*R, t) + "@" + std::to_string(k + 1), res.str());
    }
  }

  // Twist commutation gamma(alpha a_i) == beta(gamma(a_i)); at arity 0 this
  // is beta(gamma) == gamma.
  for (const auto& [t, v] : g.values) {
    std::vector<Element> args;
    std::vector<Poly> sl;
    for (std::size_t i = 0; i < n; ++i) {
      args.push_back(map_apply(A.alpha, Element::generator(R, A.alpha.ctx(), t[i])));
      sl.push_back(Poly::var(g.val_ctx, names[i]));
    }
    Element lhs = cochain_eval(g, args, sl);
    Element rhs = map_apply(g.target.beta, v);
    Context w = lhs.ctx().united(rhs.ctx());
    Element res = lhs.lifted(w) - rhs.lifted(w);
    if (!res.is_zero()) r.add("commute" + tuple_str(*R, t), res.str());
  }

  if (r.pass())
    r.notes.push_back("parity, slot-swap, transposition and twist rules hold on all stored tuples");
  return r;
}

Cochain differential(const Cochain& g) {
  const auto& A = g.alg();
  const ModulePtr& R = A.mod;
  const int n = g.arity;
  const auto names = cochain_slots(n + 1);

  Context amb = g.passives().united(A.passives()).united(A.alpha.ctx())
                    .united(g.target.beta.ctx());
  for (const auto& rm : g.target.rho) amb = amb.united(rm.ctx().without("l"));
  for (const auto& s : names)
    if (amb.contains(s))
      fail("SlotCollision", "ambient symbol '" + s + "' collides with a differential slot");
  Context vc = Context::of(names).united(amb);

  const ModuleMap alpha_n = map_power(A.alpha, n);
  const int gp = parity_bit(g.parity);

  std::map<std::vector<std::size_t>, Element> vals;
  for (const auto& J : sorted_tuples(R->rank(), n + 1)) {
    auto pbit = [&](std::size_t i) { return parity_bit(R->parity(J[i])); };
    Element acc(g.target.mod, vc);

    for (std::size_t p = 0; p <= static_cast<std::size_t>(n); ++p) {
      int pre = 0;
      for (std::size_t q = 0; q < p; ++q) pre += pbit(q);
      int s1 = ((p % 2) ? -1 : 1) * ((((gp + pre) * pbit(p)) % 2) ? -1 : 1);
      std::vector<Element> args;
      std::vector<Poly> sl;
      for (std::size_t q = 0; q <= static_cast<std::size_t>(n); ++q) {
        if (q == p) continue;
        args.push_back(Element::generator(R, Context::empty(), J[q]));
        sl.push_back(Poly::var(vc, names[q]));
      }
      Element inner = cochain_eval(g, args, sl);
      Element actor = map_apply(alpha_n, Element::generator(R, alpha_n.ctx(), J[p]));
      Element term = rho_apply(g.target, actor, inner, Poly::var(vc, names[p]));
      acc += term.lifted(vc).scaled(Rational(s1));
    }

    for (std::size_t p = 0; p + 1 <= static_cast<std::size_t>(n); ++p) {
      for (std::size_t q = p + 1; q <= static_cast<std::size_t>(n); ++q) {
        int ap = 0, aq = 0;
        for (std::size_t r = 0; r < p; ++r) ap += pbit(r);
        for (std::size_t r = 0; r < q; ++r) aq += pbit(r);
        int e2 = (ap * pbit(p) + aq * pbit(q) + pbit(p) * pbit(q)) % 2;
        int s2 = (((p + q) % 2) ? -1 : 1) * (e2 ? -1 : 1);
        std::vector<Element> args;
        std::vector<Poly> sl;
        args.push_back(bracket_eval(A, Element::generator(R, Context::empty(), J[p]),
                                    Element::generator(R, Context::empty(), J[q]), names[p]));
        sl.push_back(Poly::var(vc, names[p]) + Poly::var(vc, names[q]));
        for (std::size_t r = 0; r <= static_cast<std::size_t>(n); ++r) {
          if (r == p || r == q) continue;
          args.push_back(map_apply(A.alpha, Element::generator(R, A.alpha.ctx(), J[r])));
          sl.push_back(Poly::var(vc, names[r]));
        }
        Element term = cochain_eval(g, args, sl);
        acc += term.lifted(vc).scaled(Rational(s2));
      }
    }

    vals.emplace(J, acc);
  }
  return make_cochain(g.target, n + 1, g.parity, vals, amb);
}

Cochain differential_s(const Cochain& g, int s) {
  if (!same_module(g.target.mod, g.alg().mod))
    fail("ShapeMismatch", "differential_s needs an adjoint-type target");
  Cochain h = g;
  h.target = rep_shift(g.alg(), s); // NotInvertible for s<0 without regularity
  return differential(h);
}

CheckReport cocycle2_check(const ConformalAlgebra& A, const Cochain& psi) {
  if (psi.arity != 2) fail("ShapeMismatch", "cocycle2_check takes a 2-cochain");
  if (!same_module(psi.target.mod, A.mod))
    fail("ShapeMismatch", "cocycle2_check needs a cochain valued in the algebra itself");
  CheckReport v = cochain_validate(psi);
  if (!v.pass()) {
    v.notes.push_back("validation failed; the cocycle condition was not evaluated");
    return v;
  }
  Cochain q = psi;
  q.target = rep_shift(A, -1);
  Cochain dq = differential(q);
  CheckReport r;
  r.check = "cocycle2";
  for (const auto& [t, val] : dq.values)
    if (!val.is_zero()) r.add(tuple_str(*A.mod, t), val.str());
  r.notes.push_back("condition: d_{-1} psi == 0");
  return r;
}

Cochain bracket_cochain(const ConformalAlgebra& A, const Representation& target) {
  if (!same_module(target.mod, A.mod))
    fail("ShapeMismatch", "bracket_cochain needs an algebra-valued target");
  Context vctx = Context::of(cochain_slots(2)).united(A.passives());
  Poly l12 = Poly::var(vctx, "l1") + Poly::var(vctx, "l2");
  std::map<std::vector<std::size_t>, Element> vals;
  for (const auto& t : sorted_tuples(A.mod->rank(), 2)) {
    Element b = bracket_eval(A, Element::generator(A.mod, Context::empty(), t[0]),
                             Element::generator(A.mod, Context::empty(), t[1]), "l1");
    vals.emplace(t, b.substituted("d", -l12).lifted(vctx));
  }
  return make_cochain(target, 2, Parity::even, vals, A.passives());
}

std::vector<Cochain> cochain_space_basis(const Representation& target, int arity,
                                         Parity parity, std::uint32_t max_deg) {
  const ModulePtr& R = target.alg.mod;
  const ModulePtr& M = target.mod;
  const Context vctx = Context::of(cochain_slots(arity));
  const std::size_t nv = vctx.size() + 1; // slots plus d

  std::vector<Exponents> mons;
  Exponents cur(nv, 0);
  std::function<void(std::size_t, std::uint32_t)> emit = [&](std::size_t i, std::uint32_t left) {
    if (i == nv) {
      mons.push_back(cur);
      return;
    }
    for (std::uint32_t k = 0; k <= left; ++k) {
      cur[i] = k;
      emit(i + 1, left - k);
    }
    cur[i] = 0;
  };
  emit(0, max_deg);

  auto mono = [&](const Exponents& ex) {
    Poly p = Poly::constant(vctx, Rational(1));
    for (std::size_t i = 0; i < vctx.size(); ++i)
      for (std::uint32_t c = 0; c < ex[i]; ++c) p = p * Poly::var(vctx, vctx.slots()[i]);
    for (std::uint32_t c = 0; c < ex[nv - 1]; ++c) p = p * Poly::var(vctx, "d");
    return p;
  };

  struct Unknown {
    std::vector<std::size_t> tuple;
    std::size_t gen;
    Exponents mon;
  };
  std::vector<Unknown> us;
  const auto tuples = sorted_tuples(R->rank(), arity);
  for (const auto& t : tuples) {
    Parity want = parity;
    for (std::size_t i : t) want = want + R->parity(i);
    for (std::size_t k = 0; k < M->rank(); ++k) {
      if (M->parity(k) != want) continue;
      for (const auto& m : mons) us.push_back({t, k, m});
    }
  }
  if (us.empty()) return {};

  auto unit = [&](const Unknown& u) {
    Element v(M, vctx);
    v.set_coeff(u.gen, mono(u.mon));
    std::map<std::vector<std::size_t>, Element> vals;
    vals.emplace(u.tuple, std::move(v));
    return make_cochain(target, arity, parity, vals, Context::empty());
  };

  // The linear validation constraints (slot-swap rule on repeated tuples and
  // twist commutation), probed one unit cochain at a time. Parity holds by
  // the grid restriction above.
  auto residuals = [&](const Cochain& g) {
    std::vector<Element> out;
    const auto names = cochain_slots(arity);
    for (const auto& t : tuples) {
      const Element& v = g.values.at(t);
      for (std::size_t k = 0; k + 1 < static_cast<std::size_t>(arity); ++k) {
        if (t[k] != t[k + 1]) continue;
        std::map<std::string, Poly> im;
        im.emplace(names[k], Poly::var(g.val_ctx, names[k + 1]));
        im.emplace(names[k + 1], Poly::var(g.val_ctx, names[k]));
        Element swapped = subst_all(v, im, g.val_ctx);
        int sgn = -koszul(R->parity(t[k]), R->parity(t[k]));
        out.push_back(v - swapped.scaled(Rational(sgn)));
      }
    }
    const auto& A = g.alg();
    for (const auto& t : tuples) {
      std::vector<Element> args;
      std::vector<Poly> sl;
      for (std::size_t i = 0; i < static_cast<std::size_t>(arity); ++i) {
        args.push_back(map_apply(A.alpha, Element::generator(R, A.alpha.ctx(), t[i])));
        sl.push_back(Poly::var(g.val_ctx, names[i]));
      }
      Element lhs = cochain_eval(g, args, sl);
      Element rhs = map_apply(g.target.beta, g.values.at(t));
      Context w = lhs.ctx().united(rhs.ctx());
      out.push_back(lhs.lifted(w) - rhs.lifted(w));
    }
    return out;
  };

  std::map<std::tuple<std::size_t, std::size_t, Exponents>, std::size_t> rowof;
  std::vector<std::map<std::size_t, Rational>> cols(us.size());
  for (std::size_t c = 0; c < us.size(); ++c) {
    auto res = residuals(unit(us[c]));
    for (std::size_t f = 0; f < res.size(); ++f)
      for (const auto& [gk, p] : res[f].coeffs())
        for (const auto& [ex, q] : p.terms()) {
          auto [it, inserted] = rowof.try_emplace(std::make_tuple(f, gk, ex), rowof.size());
          (void)inserted;
          cols[c][it->second] = q;
        }
  }
  RationalMatrix m(rowof.size(), us.size());
  for (std::size_t c = 0; c < us.size(); ++c)
    for (const auto& [row, val] : cols[c]) m.at(row, c) = val;

  std::vector<Cochain> basis;
  for (const auto& vec : nullspace(m)) {
    std::map<std::vector<std::size_t>, Element> vals;
    for (const auto& t : tuples) vals.emplace(t, Element::zero(M, vctx));
    for (std::size_t c = 0; c < us.size(); ++c) {
      if (vec[c] == Rational(0)) continue;
      Element add(M, vctx);
      add.set_coeff(us[c].gen, mono(us[c].mon).scaled(vec[c]));
      vals.at(us[c].tuple) += add;
    }
    basis.push_back(make_cochain(target, arity, parity, vals, Context::empty()));
  }
  return basis;
}

Cochain random_cochain(const std::vector<Cochain>& basis, std::uint64_t seed) {
  if (basis.empty()) fail("ShapeMismatch", "random_cochain needs a nonempty basis");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 3);
  Cochain acc = basis.front();
  for (auto& [t, v] : acc.values) v = Element::zero(v.mod(), acc.val_ctx);
  for (const auto& b : basis) {
    Rational c(num(rng), den(rng));
    for (auto& [t, v] : acc.values) v += b.values.at(t).scaled(c).lifted(acc.val_ctx);
  }
  return acc;
}

} // namespace homconf
