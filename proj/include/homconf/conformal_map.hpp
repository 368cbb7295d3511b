#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homconf/module.hpp"

namespace homconf {

// Conformal linear map between free graded modules: a matrix of polynomials
// in the action slot `l` and `d` (plus passive symbols), acting by
//   f_s(p(d) g_j) = p(d+s) * sum_i entry(i,j)[l -> s] g_i.
// The d-shift on inputs is what distinguishes this from a ModuleMap: a
// constant matrix here is the "shift" operator family, not a C[d]-linear map.
class ConformalMap {
public:
  ConformalMap(ModulePtr dom, ModulePtr cod, Parity parity, Context ctx);
  static ConformalMap zero(ModulePtr dom, ModulePtr cod, Parity parity, const Context& ctx);
  // Reinterpret a C[d]-matrix as conformal-map entries (constant in l).
  static ConformalMap from_matrix(const ModuleMap& m);

  const ModulePtr& dom() const { return dom_; }
  const ModulePtr& cod() const { return cod_; }
  Parity parity() const { return parity_; }
  const Context& ctx() const { return ctx_; }
  Context passives() const { return ctx_.without("l"); }
  const Poly& entry(std::size_t i, std::size_t j) const { return m_[i][j]; }
  void set_entry(std::size_t i, std::size_t j, Poly p);
  bool is_zero() const;

  bool operator==(const ConformalMap& o) const;
  ConformalMap operator+(const ConformalMap& o) const;
  ConformalMap operator-(const ConformalMap& o) const;
  ConformalMap scaled(const Poly& p) const;
  ConformalMap scaled(const Rational& c) const;
  ConformalMap lifted(const Context& target) const;

  void validate(const std::string& what) const; // parity pattern of entries

  std::string str() const;

private:
  ModulePtr dom_, cod_;
  Parity parity_;
  Context ctx_; // action slot "l" plus passive symbols
  std::vector<std::vector<Poly>> m_;
};

// f_{out_slot}(x). x may carry ambient slots but must not use out_slot.
Element cmap_apply(const ConformalMap& f, const Element& x, const std::string& out_slot);

// Substitute into every entry (slot bookkeeping for lambda+mu moves); with
// drop=true the slot is removed from the context afterwards.
ConformalMap cmap_subst_slot(const ConformalMap& f, const std::string& name, const Poly& image,
                             bool drop = false);

// Matrix of the composite x -> f_{sf}(g_{sg}(x)): the inner map's output
// coefficients get their d shifted by the outer slot value sf.
ConformalMap cmap_compose_at(const ConformalMap& f, const ConformalMap& g, const Poly& sf,
                             const Poly& sg);

// The gc bracket [f_p g] with action slot l and passive slot p:
//   [f_p g]_l = f_p . g_{l-p}  -  (-1)^{|f||g|} g_{l-p} . f_p
ConformalMap cmap_commutator(const ConformalMap& f, const ConformalMap& g,
                             const std::string& passive);

// Does f commute with the module endomorphism alpha (f in the Omega sense):
// f_l(alpha(x)) = alpha(f_l(x))?
bool cmap_alpha_commutes(const ConformalMap& f, const ModuleMap& alpha);

// Coefficient vector of all entries on the l^a d^b grid (a <= deg_l,
// b <= deg_d), row-major over entries; nullopt when an entry exceeds the grid
// or uses a passive symbol.
std::optional<std::vector<Rational>> cmap_flatten(const ConformalMap& f, int deg_l, int deg_d);

} // namespace homconf
