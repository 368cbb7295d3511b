#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "homconf/rep.hpp"

namespace homconf {

// n-cochain of the algebra underlying `target`, with values in target's
// module. Values are stored on non-decreasing generator index tuples only;
// every other argument order is reached through the Koszul sign rule during
// evaluation, so skew-symmetry across distinct tuples holds by construction.
// A value on an n-tuple lives in the slot context {l1,...,ln} plus any
// declared passive symbols (n=0: just the passives). Conformal antilinearity
// is likewise built in: gamma(..., p(d) a_i, ...) evaluates to
// p(-l_i) gamma(..., a_i, ...).
struct Cochain {
  int arity = 0;
  Parity parity = Parity::even;
  Representation target;
  Context val_ctx;
  std::map<std::vector<std::size_t>, Element> values;

  const ConformalAlgebra& alg() const { return target.alg; }
  // val_ctx minus the numbered evaluation slots.
  Context passives() const;
};

// The canonical evaluation slot names l1..ln.
std::vector<std::string> cochain_slots(int arity);

// Build a cochain from values on sorted generator tuples. Missing tuples are
// zero-filled; unsorted or out-of-range keys are rejected. `passives` lists
// extra ambient symbols the values may use; names of the form l<digits> and
// the symbol d are reserved.
Cochain make_cochain(const Representation& target, int arity, Parity parity,
                     const std::map<std::vector<std::size_t>, Element>& values,
                     const Context& passives = Context::empty());

// gamma evaluated on arbitrary algebra elements, slot i taking the polynomial
// value slot_at[i]. Argument order is reduced to the stored tuple by signed
// adjacent transpositions (factor -(-1)^{|a||b|} each, slots traveling with
// their arguments).
Element cochain_eval(const Cochain& g, const std::vector<Element>& args,
                     const std::vector<Poly>& slot_at);

// Parity homogeneity of every stored value, the slot-swap rule on
// repeated-generator tuples, the signed-transposition rule across distinct
// generators, and twist commutation
//   gamma(alpha a_1, ..., alpha a_n) = beta(gamma(a_1, ..., a_n))
// (arity 0: beta(gamma) = gamma).
CheckReport cochain_validate(const Cochain& g);

// The differential. On an (n+1)-tuple it is
//   sum_p   +- rho(alpha^n(a_p))_{l_p} gamma(..a_p-hat..)
// + sum_p<q +- gamma([a_p {l_p} a_q] placed at slot l_p+l_q,
//                    alpha(spectators) at their own slots)
// with the super Chevalley-Eilenberg signs: (-1)^p (-1)^{(|gamma|+A_p)|a_p|}
// on the first sum and (-1)^{p+q} times the Koszul sign of moving a_p, a_q to
// the front on the second (A_p = parity sum before position p, indices
// 0-based). Applied twice it gives zero, which the tests use as the arbiter
// for the whole convention.
Cochain differential(const Cochain& g);

// d_s: the differential with the action routed through the shifted module
// R_s, i.e. first-sum brackets [alpha^{n+s}(a_p) ...]. Needs an adjoint-type
// target (module == algebra module); s<0 needs regular alpha.
Cochain differential_s(const Cochain& g, int s);

// Pass iff d_{-1} psi == 0 for a 2-cochain psi valued in the algebra itself.
// A psi that fails validation is reported as such and the cocycle condition
// is not evaluated.
CheckReport cocycle2_check(const ConformalAlgebra& A, const Cochain& psi);

// The bracket of A as a 2-cochain: the value on (a,b) is [a_{l1} b] with the
// output d replaced by -l1-l2. This is the unique slot-skew lift that
// restricts back to the bracket along the diagonal mu = -lambda-d.
Cochain bracket_cochain(const ConformalAlgebra& A, const Representation& target);

// Basis of the space of valid cochains of the given shape whose value
// coefficients have total degree <= max_deg in the slots and d, obtained by
// solving the validation constraints exactly over Q.
std::vector<Cochain> cochain_space_basis(const Representation& target, int arity,
                                         Parity parity, std::uint32_t max_deg);

// Deterministic pseudo-random rational combination of basis cochains.
Cochain random_cochain(const std::vector<Cochain>& basis, std::uint64_t seed);

} // namespace homconf
