#pragma once

#include "homconf/cochain.hpp"

namespace homconf {

// The bilinear operation a 2-cochain induces on the algebra: the second slot
// is folded onto the output,
//   psihat(psi, x, y, out) = psi_{out, -d-out}(x, y),
// so the result's d plays the role the second slot abstracted away. This is
// the shape in which a 2-cochain perturbs a bracket.
Element psihat(const Cochain& psi, const Element& x, const Element& y, const Poly& out);

// One-parameter family of brackets over the base algebra:
//   [a_l b]_t = [a_l b] + t * psihat(psi, a, b, l)
// with t a formal polynomial symbol, never a sampled number. Entries are
// linear in t and restrict to the base table at t = 0.
struct DeformationFamily {
  ConformalAlgebra base;
  Cochain psi;
  std::string t_name; // the formal parameter symbol, "t"
  Context table_ctx;  // {"l", "t"} plus every passive symbol in play
  std::vector<std::vector<Element>> table;
};

// The family's bracket as a standalone algebra: same module and twist, t
// joins the passive symbols, so the axiom checks run identically in t.
ConformalAlgebra deformed_algebra(const DeformationFamily& fam);

// Build the family and decide whether the deformed bracket stays Hom-Jacobi
// for formal t. Grouping the expanded identity by powers of t leaves two
// conditions, checked on every ordered generator triple:
//   deform.order1 (coefficient of t): the bracket/psi cross terms cancel;
//   deform.order2 (coefficient of t^2): psi composed with itself associates.
// Reports come back in that order, preceded by the psi validation report;
// when validation fails the order conditions are not evaluated. psi must be
// even, of arity 2, and valued in the algebra's own module with twist alpha
// (structural Error otherwise).
std::pair<DeformationFamily, std::vector<CheckReport>> deform(const ConformalAlgebra& A,
                                                              const Cochain& psi);

// The bracket twisted by a module endomorphism f:
//   [x_out y]_f = [f(x)_out y] + [x_out f(y)] - f([x_out y]).
// Neither x nor y may already use out_slot.
Element nijenhuis_bracket(const ConformalAlgebra& A, const ModuleMap& f, const Element& x,
                          const Element& y, const std::string& out_slot);

// Pass iff f intertwines its own twisted bracket with the plain one,
//   [f(a)_l f(b)] = f([a_l b]_f),
// on all generator pairs. f must be an even endomorphism of the algebra
// module and commute with alpha (AlphaCommutationFailure otherwise);
// d-linearity and independence of the bracket slot are part of the ModuleMap
// type.
CheckReport nijenhuis_check(const ConformalAlgebra& A, const ModuleMap& f);

// Exact-identity witness that a family is equivalent to its base bracket
// through the transport T_t = id + t f: for every generator pair both
//   T_t([a_l b]_t)   (transported_bracket)
//   [T_t(a)_l T_t(b)] (bracket_of_transported)
// are stored and compared as polynomials in t, l, d, so a pass is an identity
// in the formal symbols, not a spot check.
struct TrivialityCertificate {
  ModuleMap transport;
  std::map<std::pair<std::size_t, std::size_t>, Element> transported_bracket;
  std::map<std::pair<std::size_t, std::size_t>, Element> bracket_of_transported;
  CheckReport report; // "nijenhuis.triviality"
};

// The deformation generated by a Nijenhuis operator: psi(a, b) is the twisted
// bracket [a_{l1} b]_f with the output d folded to -l1-l2 (the unique
// slot-skew cochain restricting back to it), the family it generates, and the
// transport certificate. The Nijenhuis identity is checked first and its
// report returned alongside; the certificate is still evaluated when it
// fails, so the caller sees exactly which link breaks. The shifted target of
// psi needs a regular twist (NotInvertible otherwise).
struct NijenhuisDeformation {
  CheckReport nijenhuis;
  DeformationFamily family;
  std::vector<CheckReport> closure; // the deform() reports for the generated psi
  TrivialityCertificate certificate;
};

NijenhuisDeformation nijenhuis_deformation(const ConformalAlgebra& A, const ModuleMap& f);

} // namespace homconf
