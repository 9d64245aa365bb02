#ifndef NESTEDSUMS_PRINTER_HPP
#define NESTEDSUMS_PRINTER_HPP

#include "nestedsums/expression.hpp"

#include <string>

namespace nestedsums {

// Canonical ASCII forms mirroring the session notation:
//   S[1,2,n]  S[1,2,{1,1/3},n]  S[{{3,2,1},{2,0,-2}},n]
//   S[{{3,2,1},{2,0,-2}},{1,4},n]  H[0,1,x]  H[{3,1},{2,0},x]
//   z2, z3, ..., ln2, gamma, pi, Delta1x, S[1,inf]
std::string print(const SumArgument& arg);
std::string print(const SumLetter& l);
std::string print(const NestedSum& s);
std::string print(const PolylogWord& w, const std::string& arg);
std::string print(const Atom& a);
std::string print(const Monomial& m);
std::string print(const Expression& e);

std::string print(const ConstantAtom& c);

// Cyclotomic polynomial Phi_a as a Poly in x.
const Poly& cyclotomic_poly(long a);

}  // namespace nestedsums

#endif
