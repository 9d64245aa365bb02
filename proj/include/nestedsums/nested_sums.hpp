#ifndef NESTEDSUMS_NESTED_SUMS_HPP
#define NESTEDSUMS_NESTED_SUMS_HPP

#include "nestedsums/expression.hpp"

#include <map>
#include <vector>

namespace nestedsums {

using Word = std::vector<SumLetter>;
using WordComb = std::map<Word, Rational>;  // linear combination of words

// Partial-fraction split of 1/((a1 i+b1)^c1 (a2 i+b2)^c2) with the weights
// multiplied; returns letters with weight x1*x2 and rational coefficients.
std::vector<std::pair<Rational, SumLetter>> merge_letters(const SumLetter& l1,
                                                          const SumLetter& l2);

// Quasi-shuffle (stuffle) product of two words; coefficients are exact
// rationals, every term a single word.
const WordComb& quasi_shuffle_words(const Word& w1, const Word& w2);

// Product of two sums with equal symbolic argument n; fully linearized.
Expression quasiShuffleProduct(const NestedSum& s1, const NestedSum& s2);

// Expand all products/powers of sum atoms with argument n inside e.
Expression expand_sum_products(const Expression& e);

// Leading/trailing-ones extraction ("one" = letter with c=1, x=1).
Expression extractLeadingOnes(const NestedSum& s);
Expression extractTrailingOnes(const NestedSum& s);
// Apply extraction to every sum atom in an expression.
Expression extract_leading_ones_expr(const Expression& e);

// Synchronize a sum at argument k*n+p to sums at argument n.
Expression synchronize(const NestedSum& s);
Expression synchronize_expr(const Expression& e);

// Duplication relations at a given weight for an alphabet of (a,b) moduli.
// Each relation is lhs == rhs with lhs sums at 2n and rhs sums at n.
struct SumRelation {
    Expression lhs, rhs;
};
std::vector<SumRelation> duplicationRelations(long weight,
                                              const std::vector<std::pair<long, long>>& alphabet);

// Depth reduction to Euler sums of depth <= floor(log2(depth)) + 1.
Expression reduceDepth(const NestedSum& s);
long max_euler_depth(const Expression& e);

// Closed form of sum_{i=1}^m x^i i^k as poly(m)*x^m + const.
struct GeomPowerSum {
    Rational x;
    Poly poly;      // multiplies x^m
    Rational cnst;  // additive constant
};
GeomPowerSum geom_power_sum(const Rational& x, long k);

Rational bernoulli(long k);  // B_k with B_1 = -1/2

// sum_{i=lo}^{n+shift} x^i * (num/den)(i) * prod(sums at i), linearized into
// cyclotomic S-sums at n; non-linear denominator parts stay as residual atoms.
struct SummandSpec {
    Rational x = 1;               // geometric weight x^i
    RatFunc rational;             // rational function of the summation index
    std::vector<NestedSum> sums;  // inner sums, argument treated as the index i
};
Expression sumOfRationalTimesSum(const SummandSpec& summand, long lo, long upper_shift);

}  // namespace nestedsums

#endif
