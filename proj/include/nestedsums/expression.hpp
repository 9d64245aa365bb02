#ifndef NESTEDSUMS_EXPRESSION_HPP
#define NESTEDSUMS_EXPRESSION_HPP

#include "nestedsums/atom.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace nestedsums {

// Monomial: sorted multiset of atoms.
struct Monomial {
    std::vector<Atom> atoms;  // kept sorted per Atom order

    Monomial() = default;
    explicit Monomial(std::vector<Atom> as);
    static Monomial one() { return Monomial(); }
    static Monomial single(Atom a) { return Monomial(std::vector<Atom>{std::move(a)}); }

    bool empty() const { return atoms.empty(); }
    Monomial merged(const Monomial& o) const;  // multiset union (no expansion)

    bool operator<(const Monomial& o) const;
    bool operator==(const Monomial& o) const { return atoms == o.atoms; }
};

// Multivariate polynomial in atoms with rational-function-in-n coefficients.
class Expression {
  public:
    using Terms = std::map<Monomial, RatFunc>;

    Expression() = default;
    explicit Expression(const Rational& c) {
        if (c != 0) terms_[Monomial::one()] = RatFunc(c);
    }
    explicit Expression(RatFunc c) {
        if (!c.is_zero()) terms_[Monomial::one()] = std::move(c);
    }
    static Expression atom(Atom a, RatFunc coeff = RatFunc(Rational(1)));
    static Expression sum_atom(NestedSum s, RatFunc coeff = RatFunc(Rational(1))) {
        return atom(Atom::sum(std::move(s)), std::move(coeff));
    }
    static Expression monomial(Monomial m, RatFunc coeff);

    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }
    size_t size() const { return terms_.size(); }

    void add_term(const Monomial& m, const RatFunc& c);
    Expression operator+(const Expression& o) const;
    Expression operator-(const Expression& o) const;
    Expression operator*(const RatFunc& c) const;
    Expression operator*(const Rational& c) const { return *this * RatFunc(c); }
    Expression operator-() const { return *this * Rational(-1); }
    Expression& operator+=(const Expression& o);
    Expression& operator-=(const Expression& o);

    bool operator==(const Expression& o) const { return terms_ == o.terms_; }

    // Structural product: multiplies coefficients, unions monomials; no
    // quasi-shuffle/shuffle expansion of sum or polylog products.
    friend Expression mul_structural(const Expression& a, const Expression& b);

    // Map each term to a replacement expression.
    Expression map_terms(
        const std::function<Expression(const Monomial&, const RatFunc&)>& f) const;

    // Coefficient of a given monomial (zero if absent).
    RatFunc coefficient(const Monomial& m) const;

    // Collect distinct sum atoms appearing anywhere (not inside Euler factors).
    std::vector<NestedSum> sum_atoms() const;

  private:
    Terms terms_;
};

// Idempotent canonical form; Expression maintains its invariants
// incrementally, so this re-normalizes coefficients and drops zeros.
Expression canonicalize(const Expression& e);

inline Expression add(const Expression& a, const Expression& b) { return a + b; }

}  // namespace nestedsums

#endif
