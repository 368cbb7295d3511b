#pragma once

#include <vector>

#include "homconf/algebra.hpp"
#include "homconf/conformal_map.hpp"

namespace homconf {

// Module (rho, M, beta) over a Hom-Lie conformal algebra: beta is an even
// endomorphism of M and rho[i] is the conformal operator of the i-th algebra
// generator. Polynomial d-multiples act through the stored matrices by
//   rho(p(d) g)_s = p(-s) rho(g)_s,
// so sesquilinearity in the algebra argument is part of evaluation.
struct Representation {
  ConformalAlgebra alg;
  ModulePtr mod;
  ModuleMap beta;
  std::vector<ConformalMap> rho;
};

// Validates shape: rho matches the algebra rank, every rho[i] is an
// endomorphism of mod with the parity of its generator, beta is even. Throws
// Error on structural problems.
Representation make_representation(ConformalAlgebra alg, ModulePtr mod, ModuleMap beta,
                                   std::vector<ConformalMap> rho);

// rho(a) placed at `at`, applied to v. `a` may carry ambient slots (including
// the bracket slot l: its coefficients only ever meet `at`, never the action
// slot of the stored matrices).
Element rho_apply(const Representation& rep, const Element& a, const Element& v, const Poly& at);

// The two defining identities, exactly, on all generator pairs:
//   rho(d a)_s = -s rho(a)_s
//   rho([a_l b])_{l+m} beta = rho(alpha(a))_l rho(b)_m
//                             - (-1)^{|a||b|} rho(alpha(b))_m rho(a)_l
std::vector<CheckReport> rep_check(const Representation& rep);

// beta = alpha, rho read off the bracket table.
Representation adjoint(const ConformalAlgebra& A);

// The shifted module R_s: rho(a)_l b = [alpha^s(a)_l b], beta = alpha.
// s < 0 needs an invertible (regular) alpha.
Representation rep_shift(const ConformalAlgebra& A, int s);

// Algebra structure on R (+) M:
//   [(a+u)_l (b+v)] = [a_l b] + rho(a)_l v - (-1)^{|u||b|} rho(b)_{-l-d} u
// with twist alpha (+) beta. Module generator names get a ' suffix when they
// collide with algebra generator names.
ConformalAlgebra semidirect(const ConformalAlgebra& A, const Representation& rep);

// Criterion for -rho to act on the dual module:
//   beta rho([a_l b])_{l+m} = (-1)^{|a||b|} rho(a)_l rho(alpha(b))_m
//                             - rho(b)_m rho(alpha(a))_l
// Evaluated exactly; pass/fail is a computed outcome.
CheckReport dual_rep_condition_check(const ConformalAlgebra& A, const Representation& rep);

} // namespace homconf
