#ifndef NESTEDSUMS_ATOM_HPP
#define NESTEDSUMS_ATOM_HPP

#include "nestedsums/letters.hpp"
#include "nestedsums/polynomial.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace nestedsums {

// Symbolic constants.  Everything except DivergentS1Inf must be a finite
// value; SumAtInfinity/PolylogValue are convergence-checked at construction
// by the factory functions in infinity.hpp / expression.cpp.
struct ConstantAtom {
    enum class Kind {
        Zeta,          // zeta(k), k >= 2
        EulerGamma,
        Log2,
        Pi,
        IPi,           // the single tracked imaginary unit times pi
        PolylogValue,  // H_word(point), finite
        SumAtInfinity, // S_letters(infinity), convergent
        DivergentS1Inf,
        DiracDelta1x,
    };
    Kind kind = Kind::Zeta;
    long zk = 2;                     // Zeta
    PolylogWord word;                // PolylogValue
    Rational point = 1;              // PolylogValue
    std::vector<SumLetter> letters;  // SumAtInfinity

    static ConstantAtom zeta(long k) {
        ConstantAtom c;
        c.kind = Kind::Zeta;
        c.zk = k;
        if (k < 2) throw std::invalid_argument("zeta(k) needs k>=2");
        return c;
    }
    static ConstantAtom simple(Kind k) {
        ConstantAtom c;
        c.kind = k;
        return c;
    }

    auto key() const { return std::tuple(static_cast<int>(kind), zk, word, point, letters); }
    bool operator==(const ConstantAtom& o) const { return key() == o.key(); }
    bool operator<(const ConstantAtom& o) const { return key() < o.key(); }
};

// Denominator weight of a polylog under a Mellin transform.
struct PolylogDenominator {
    enum class Kind { None, Factor, Cyclotomic };
    Kind kind = Kind::None;
    Rational c = 1;  // Factor: 1/(c + sign*x), c > 0
    int sign = 1;    // Factor: +1 or -1
    long phi = 1;    // Cyclotomic: 1/Phi_phi(x)

    static PolylogDenominator none() { return {}; }
    static PolylogDenominator factor(const Rational& c_, int sign_) {
        PolylogDenominator d;
        d.kind = Kind::Factor;
        d.c = c_;
        d.sign = sign_;
        if (c_ <= 0 || (sign_ != 1 && sign_ != -1)) throw std::invalid_argument("bad factor");
        return d;
    }
    static PolylogDenominator cyclotomic(long a) {
        PolylogDenominator d;
        d.kind = Kind::Cyclotomic;
        d.phi = a;
        return d;
    }
    auto key() const { return std::tuple(static_cast<int>(kind), c, sign, phi); }
    bool operator==(const PolylogDenominator& o) const { return key() == o.key(); }
    bool operator<(const PolylogDenominator& o) const { return key() < o.key(); }
};

// Polylog of the symbolic variable x, optionally weighted by a denominator.
struct PolylogAtom {
    PolylogWord word;
    PolylogDenominator den;
    bool inverse_arg = false;  // argument 1/x instead of x (asymptotic behavior)

    auto key() const { return std::tuple(word, den.key(), inverse_arg); }
    bool operator==(const PolylogAtom& o) const { return key() == o.key(); }
    bool operator<(const PolylogAtom& o) const { return key() < o.key(); }
};

// Series atom: sum_{i>=1} base^i * x^(a*i+b) / (a*i+b)^k * S_word(i).
// For plain multiple polylogs a=1, b=0 and x^(i) pairs with base^i.
struct SeriesTerm {
    Rational base = 1;
    long a = 1;
    long b = 0;
    long k = 1;
    std::vector<SumLetter> word;  // may be empty
    bool inverse_arg = false;     // series in 1/x

    auto key() const { return std::tuple(base, a, b, k, word, inverse_arg); }
    bool operator==(const SeriesTerm& o) const { return key() == o.key(); }
    bool operator<(const SeriesTerm& o) const { return key() < o.key(); }
};

// Frozen Mellin-type integral, used by the cyclotomic inverse Mellin:
//   int_lo^hi x^(k n + p) (optionally minus x^p) * H_word(x) / den dx
// with den a product of cyclotomic polynomials Phi_a and linear factors.
struct MellinBracket {
    long k = 1;
    long p = 0;
    bool subtract_one = false;  // (x^(k n) - 1) * x^p vs x^(k n + p)
    int sign_pow = 1;           // (-1)^n factor on x^(k n): integrand uses (s x^k)^n
    PolylogWord word;           // may be empty (H = 1)
    std::vector<std::pair<long, int>> phis;  // (a, multiplicity) of Phi_a in denominator
    Rational lo = 0, hi = 1;

    auto key() const { return std::tuple(k, p, subtract_one, sign_pow, word, phis, lo, hi); }
    bool operator==(const MellinBracket& o) const { return key() == o.key(); }
    bool operator<(const MellinBracket& o) const { return key() < o.key(); }
};

// Unevaluated residual sum: sum_{i=1}^n x^i (num/den)(i) S_word(i), kept when
// the denominator does not factor into integer-linear pieces.
struct ResidualSum {
    Rational x = 1;
    Poly num, den;
    std::vector<SumLetter> word;

    auto key() const {
        return std::tuple(x, num.coeffs(), den.coeffs(), word);
    }
    bool operator==(const ResidualSum& o) const { return key() == o.key(); }
    bool operator<(const ResidualSum& o) const { return key() < o.key(); }
};

struct GeometricFactor {  // base^n, base not in {0, 1, -1}
    Rational base;
    bool operator==(const GeometricFactor& o) const { return base == o.base; }
    bool operator<(const GeometricFactor& o) const { return base < o.base; }
};

struct AlternatingFactor {  // (-1)^n
    bool operator==(const AlternatingFactor&) const { return true; }
    bool operator<(const AlternatingFactor&) const { return false; }
};

class Atom {
  public:
    using Var = std::variant<ConstantAtom, GeometricFactor, AlternatingFactor, SeriesTerm,
                             PolylogAtom, MellinBracket, NestedSum, EulerSum, ResidualSum>;

    Atom() : v_(ConstantAtom::zeta(2)) {}
    Atom(Var v) : v_(std::move(v)) {}
    static Atom constant(ConstantAtom c) { return Atom(Var(std::move(c))); }
    static Atom geometric(const Rational& base);  // folds -1 to AlternatingFactor
    static Atom alternating() { return Atom(Var(AlternatingFactor{})); }
    static Atom sum(NestedSum s) { return Atom(Var(std::move(s))); }
    static Atom polylog(PolylogWord w, PolylogDenominator d = {}, bool inv = false) {
        return Atom(Var(PolylogAtom{std::move(w), d, inv}));
    }
    static Atom series(SeriesTerm t) { return Atom(Var(std::move(t))); }
    static Atom bracket(MellinBracket b) { return Atom(Var(std::move(b))); }
    static Atom euler(EulerSum e) { return Atom(Var(std::move(e))); }
    static Atom residual(ResidualSum r) { return Atom(Var(std::move(r))); }

    const Var& var() const { return v_; }
    template <class T> const T* get() const { return std::get_if<T>(&v_); }
    template <class T> bool is() const { return std::holds_alternative<T>(v_); }

    // Canonical order: class rank (constants < geometric < alternating <
    // series < polylogs < brackets < sums < euler < residual), then
    // lexicographic within the class.
    bool operator<(const Atom& o) const;
    bool operator==(const Atom& o) const { return v_ == o.v_; }

  private:
    Var v_;
};

}  // namespace nestedsums

#endif
