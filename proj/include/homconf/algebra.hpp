#pragma once

#include <string>
#include <vector>

#include "homconf/check.hpp"
#include "homconf/module.hpp"

namespace homconf {

// A finite free Hom-Lie conformal superalgebra candidate: generators with
// parities, the twist alpha as a d-polynomial matrix, and the structure table
// table[i][j] = [g_i bracket g_j] as an Element in the slot `l` (plus any
// passive symbols carried by table_ctx, e.g. a deformation parameter t).
// Nothing is assumed about the axioms; the check_* functions decide them.
struct ConformalAlgebra {
  ModulePtr mod;
  ModuleMap alpha;
  Context table_ctx; // contains "l"; everything else is a passive symbol
  std::vector<std::vector<Element>> table;

  const Element& entry(std::size_t i, std::size_t j) const { return table[i][j]; }
  Context passives() const { return table_ctx.without("l"); }
};

// Validates shape (square table over mod, alpha even square on mod, entries
// in table_ctx which must contain "l") and returns the value. Throws Error on
// structural problems; axiom violations are NOT errors here.
ConformalAlgebra make_algebra(ModulePtr mod, ModuleMap alpha,
                              std::vector<std::vector<Element>> table);

// The sesquilinear bracket [x_out y]: a left d-power contributes (-out)^k, a
// right d-power contributes (d+out)^k applied to the table value. x and y may
// carry ambient slots but neither may already use out_slot.
Element bracket_eval(const ConformalAlgebra& A, const Element& x, const Element& y,
                     const std::string& out_slot);

// Axiom checks. Every failing generator tuple is reported with its residual.
CheckReport check_grading(const ConformalAlgebra& A);
CheckReport check_skew(const ConformalAlgebra& A);
CheckReport check_hom_jacobi(const ConformalAlgebra& A);
CheckReport check_multiplicative(const ConformalAlgebra& A);
std::vector<CheckReport> check_suite(const ConformalAlgebra& A);

// Current algebra over a finite Hom-Lie superalgebra: same generators, table
// [a_l b] = the constant structure element [a,b], alpha acting entrywise.
// lie_table entries must be constant Elements (no slots, no d).
ConformalAlgebra cur_algebra(ModulePtr basis, ModuleMap alpha,
                             const std::vector<std::vector<Element>>& lie_table);

// Commutator bracket of a Hom-associative table: [a_l b] = a_l b
// - (-1)^{|a||b|} (b_m a with m -> -l-d).
ConformalAlgebra from_hom_associative(ModulePtr mod, ModuleMap alpha,
                                      const std::vector<std::vector<Element>>& assoc_table);

// Basis of the central elements z = sum of d^e-multiples of generators with
// e <= deg_d, i.e. [z_l g] = 0 for every generator. The system is exact; the
// bound only truncates the ansatz, so the result is complete within deg_d.
// deg_l is accepted for interface symmetry with the subspace solvers.
std::vector<Element> center_solve(const ConformalAlgebra& A, int deg_l, int deg_d);

} // namespace homconf
