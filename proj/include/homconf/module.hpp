#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "homconf/poly.hpp"

namespace homconf {

enum class Parity : unsigned { even = 0, odd = 1 };

inline Parity operator+(Parity a, Parity b) {
  return static_cast<Parity>((static_cast<unsigned>(a) + static_cast<unsigned>(b)) & 1u);
}

// Koszul sign picked up when two homogeneous things of these parities pass
// each other: -1 iff both odd.
inline int koszul(Parity a, Parity b) {
  return (a == Parity::odd && b == Parity::odd) ? -1 : 1;
}

inline const char* parity_name(Parity p) { return p == Parity::even ? "even" : "odd"; }

// Finite free Z/2-graded C[d]-module, described by its named generators.
struct GradedModule {
  std::vector<std::pair<std::string, Parity>> gens;

  std::size_t rank() const { return gens.size(); }
  const std::string& name(std::size_t i) const { return gens[i].first; }
  Parity parity(std::size_t i) const { return gens[i].second; }
  std::optional<std::size_t> index_of(std::string_view n) const;
  bool operator==(const GradedModule& o) const { return gens == o.gens; }
};

using ModulePtr = std::shared_ptr<const GradedModule>;

ModulePtr make_module(std::vector<std::pair<std::string, Parity>> gens);
inline bool same_module(const ModulePtr& a, const ModulePtr& b) {
  return a == b || (a && b && *a == *b);
}

// Element of M[slots]: finitely many generators with Poly coefficients in the
// ambient context plus d. d acts by coefficient multiplication.
class Element {
public:
  Element(ModulePtr mod, Context ctx);
  static Element zero(ModulePtr mod, const Context& ctx) { return Element(std::move(mod), ctx); }
  static Element generator(ModulePtr mod, const Context& ctx, std::size_t i);

  const ModulePtr& mod() const { return mod_; }
  const Context& ctx() const { return ctx_; }
  const std::map<std::size_t, Poly>& coeffs() const { return coeffs_; }
  Poly coeff(std::size_t i) const;

  bool is_zero() const { return coeffs_.empty(); }
  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }

  Element operator-() const;
  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element scaled(const Rational& c) const;
  Element scaled(const Poly& p) const; // p may live in a sub-context; lifted

  // True when every nonzero component has parity p (zero is homogeneous of
  // every parity).
  bool has_parity(Parity p) const;
  // Defined parity if homogeneous and nonzero.
  std::optional<Parity> parity() const;

  Element lifted(const Context& target) const;
  Element restricted(const Context& target) const;
  // Substitute a slot (or d) in every coefficient; image may use a larger
  // context, the result lives in ctx united with image's context.
  Element substituted(std::string_view name, const Poly& image) const;

  void set_coeff(std::size_t i, Poly p);

  std::string str() const;

private:
  ModulePtr mod_;
  Context ctx_;
  std::map<std::size_t, Poly> coeffs_; // only nonzero entries
};

// Rename one slot of an element; `to` must not already occur.
Element rename_slot(const Element& e, const std::string& from, const std::string& to);

// Substitute `slot` by `image` and drop the slot from the context.
// `image` must not involve `slot`.
Element subst_out(const Element& e, const std::string& slot, const Poly& image);

// Parse "(poly) GEN + ... | RATIONAL GEN | GEN | 0" over the given context.
Element parse_element(const std::string& text, const ModulePtr& mod, const Context& ctx);

// C[d]-linear parity-homogeneous map between free graded modules, stored as a
// matrix of Polys in d (plus optional passive symbol slots, never lambda
// slots): column j lists the coefficients of the image of generator j.
class ModuleMap {
public:
  ModuleMap(ModulePtr dom, ModulePtr cod, Parity parity, Context ctx);
  static ModuleMap zero(ModulePtr dom, ModulePtr cod, Parity parity, const Context& ctx);
  static ModuleMap identity(ModulePtr mod, const Context& ctx);
  static ModuleMap diagonal(ModulePtr mod, const std::vector<Rational>& diag);

  const ModulePtr& dom() const { return dom_; }
  const ModulePtr& cod() const { return cod_; }
  Parity parity() const { return parity_; }
  const Context& ctx() const { return ctx_; }
  const Poly& entry(std::size_t i, std::size_t j) const { return m_[i][j]; }
  void set_entry(std::size_t i, std::size_t j, Poly p);

  bool operator==(const ModuleMap& o) const;

  ModuleMap operator+(const ModuleMap& o) const;
  ModuleMap operator-(const ModuleMap& o) const;
  ModuleMap scaled(const Poly& p) const;
  ModuleMap lifted(const Context& target) const;

  // Enforce the parity constraint on entries; throws Error on violation.
  void validate(const std::string& what) const;

  bool is_square() const { return same_module(dom_, cod_) && dom_->rank() == cod_->rank(); }

  std::string str() const;

private:
  ModulePtr dom_, cod_;
  Parity parity_;
  Context ctx_;
  std::vector<std::vector<Poly>> m_;
};

// f(x) with no d-shift: coefficients pass through a C[d]-linear map.
Element map_apply(const ModuleMap& f, const Element& x);

// Matrix composition f after g.
ModuleMap map_compose(const ModuleMap& f, const ModuleMap& g);

// det over Q[d] (plus passive symbols) by Laplace expansion with memoization.
Poly map_det(const ModuleMap& f);

// f^k. Negative k inverts via the adjugate and requires det to be a nonzero
// constant; otherwise raises NotInvertible.
ModuleMap map_power(const ModuleMap& f, int k);

// True iff det is a nonzero rational constant (the map is an isomorphism of
// free C[d]-modules).
bool regularity_check(const ModuleMap& f);

} // namespace homconf
