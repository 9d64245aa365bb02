#ifndef NESTEDSUMS_LETTERS_HPP
#define NESTEDSUMS_LETTERS_HPP

#include "nestedsums/rational.hpp"

#include <compare>
#include <stdexcept>
#include <vector>

namespace nestedsums {

// Unified letter of a nested sum: summand x^i / (a*i + b)^c.
// Harmonic index  m>0 is (1,0,m; 1), m<0 is (1,0,|m|; -1).
// S-sum index (a;x) is (1,0,a; x).  Cyclotomic (a,b,+-c) folds the sign into x.
struct SumLetter {
    long a = 1;      // modulus, a >= 1
    long b = 0;      // offset, b > -a so a*i+b > 0 for i >= 1
    long c = 1;      // exponent, c >= 1
    Rational x = 1;  // weight, nonzero

    SumLetter() = default;
    SumLetter(long a_, long b_, long c_, Rational x_ = Rational(1))
        : a(a_), b(b_), c(c_), x(std::move(x_)) {
        if (a < 1 || c < 1 || b <= -a || x == 0) throw std::invalid_argument("bad SumLetter");
    }
    static SumLetter harmonic(long m) {
        if (m == 0) throw std::invalid_argument("harmonic index 0");
        return SumLetter(1, 0, m < 0 ? -m : m, Rational(m < 0 ? -1 : 1));
    }
    static SumLetter ssum(long m, const Rational& w) { return SumLetter(1, 0, m, w); }

    bool is_harmonic() const { return a == 1 && b == 0 && (x == 1 || x == -1); }
    bool is_ssum_shape() const { return a == 1 && b == 0; }
    // "one" in the sense of leading/trailing-ones extraction: c=1, x=1.
    bool is_one() const { return c == 1 && x == 1; }
    long weight() const { return c; }
    // Harmonic-style signed index when representable.
    long signed_index() const { return x == -1 ? -c : c; }

    auto operator<=>(const SumLetter& o) const {
        if (auto r = a <=> o.a; r != 0) return r;
        if (auto r = b <=> o.b; r != 0) return r;
        if (auto r = c <=> o.c; r != 0) return r;
        if (x < o.x) return std::strong_ordering::less;
        if (x > o.x) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    bool operator==(const SumLetter& o) const = default;
};

struct SumArgument {
    enum class Kind { Symbolic, Infinity, Integer };
    Kind kind = Kind::Symbolic;
    long k = 1;  // multiplier for Symbolic: k*n + p
    long p = 0;  // shift for Symbolic
    long N = 0;  // value for Integer

    static SumArgument n() { return SumArgument{Kind::Symbolic, 1, 0, 0}; }
    static SumArgument symbolic(long k_, long p_) {
        if (k_ < 1) throw std::invalid_argument("SumArgument k >= 1");
        return SumArgument{Kind::Symbolic, k_, p_, 0};
    }
    static SumArgument infinity() { return SumArgument{Kind::Infinity, 1, 0, 0}; }
    static SumArgument integer(long N_) {
        if (N_ < 0) throw std::invalid_argument("SumArgument N >= 0");
        return SumArgument{Kind::Integer, 1, 0, N_};
    }
    bool is_n() const { return kind == Kind::Symbolic && k == 1 && p == 0; }
    bool is_infinity() const { return kind == Kind::Infinity; }

    auto operator<=>(const SumArgument& o) const = default;
};

struct NestedSum {
    std::vector<SumLetter> letters;
    SumArgument argument = SumArgument::n();

    NestedSum() = default;
    NestedSum(std::vector<SumLetter> ls, SumArgument arg = SumArgument::n())
        : letters(std::move(ls)), argument(arg) {
        if (letters.empty()) throw std::invalid_argument("NestedSum needs letters");
    }
    static NestedSum harmonic(const std::vector<long>& idx, SumArgument arg = SumArgument::n()) {
        std::vector<SumLetter> ls;
        ls.reserve(idx.size());
        for (long m : idx) ls.push_back(SumLetter::harmonic(m));
        return NestedSum(std::move(ls), arg);
    }
    static NestedSum ssum(const std::vector<long>& idx, const std::vector<Rational>& ws,
                          SumArgument arg = SumArgument::n()) {
        if (idx.size() != ws.size()) throw std::invalid_argument("ssum sizes differ");
        std::vector<SumLetter> ls;
        for (size_t i = 0; i < idx.size(); ++i) ls.push_back(SumLetter::ssum(idx[i], ws[i]));
        return NestedSum(std::move(ls), arg);
    }

    long weight() const {
        long w = 0;
        for (auto& l : letters) w += l.c;
        return w;
    }
    long depth() const { return static_cast<long>(letters.size()); }
    bool is_harmonic() const {
        for (auto& l : letters)
            if (!l.is_harmonic()) return false;
        return true;
    }
    bool is_ssum_shape() const {
        for (auto& l : letters)
            if (!l.is_ssum_shape()) return false;
        return true;
    }
    // S-bar class of the inverse-Mellin machinery: S-sum shape with
    // |x_i| <= 1 for i >= 2 (x_1 arbitrary nonzero).
    bool is_sbar() const {
        if (!is_ssum_shape()) return false;
        for (size_t i = 1; i < letters.size(); ++i)
            if (rabs(letters[i].x) > 1) return false;
        return true;
    }

    auto operator<=>(const NestedSum& o) const {
        if (auto r = letters <=> o.letters; r != 0) return r;
        return argument <=> o.argument;
    }
    bool operator==(const NestedSum& o) const = default;
};

// Polylogarithm letter: a real index m (kernel 1/x for m=0, else
// 1/(|m| - sign(m) x)) or a cyclotomic pair (a,b) (kernel x^b / Phi_a(x),
// (0,0) meaning 1/x).  Note RealIndex(1) integrates 1/(1-x) while
// CycPair(1,0) integrates 1/(x-1): opposite sign.
struct PolylogLetter {
    enum class Kind { Real, Cyc };
    Kind kind = Kind::Real;
    Rational m = 0;  // Real
    long a = 0, b = 0;  // Cyc

    PolylogLetter() = default;
    static PolylogLetter real(const Rational& m_) {
        PolylogLetter l;
        l.kind = Kind::Real;
        l.m = m_;
        return l;
    }
    static PolylogLetter cyc(long a_, long b_) {
        PolylogLetter l;
        l.kind = Kind::Cyc;
        l.a = a_;
        l.b = b_;
        if (a_ < 0 || b_ < 0) throw std::invalid_argument("bad CycPair");
        return l;
    }
    bool is_zero() const {
        return (kind == Kind::Real && m == 0) || (kind == Kind::Cyc && a == 0 && b == 0);
    }
    bool is_real_one() const { return kind == Kind::Real && m == 1; }

    auto operator<=>(const PolylogLetter& o) const {
        if (auto r = kind <=> o.kind; r != 0) return r;
        if (kind == Kind::Real) {
            if (m < o.m) return std::strong_ordering::less;
            if (m > o.m) return std::strong_ordering::greater;
            return std::strong_ordering::equal;
        }
        if (auto r = a <=> o.a; r != 0) return r;
        return b <=> o.b;
    }
    bool operator==(const PolylogLetter& o) const {
        if (kind != o.kind) return false;
        return kind == Kind::Real ? m == o.m : (a == o.a && b == o.b);
    }
};

using PolylogWord = std::vector<PolylogLetter>;

inline PolylogWord real_word(const std::vector<Rational>& ms) {
    PolylogWord w;
    w.reserve(ms.size());
    for (auto& m : ms) w.push_back(PolylogLetter::real(m));
    return w;
}

// Cyclotomic Euler sum: letter applied over a product of inner Euler sums,
// E_{(a,b,c,x)}(e_1,...,e_k)(n) = sum_i x^i e_1(i)...e_k(i) / (a i + b)^c.
struct EulerSum {
    SumLetter letter;
    std::vector<EulerSum> factors;  // empty means plain depth-1 sum

    long depth() const {
        long d = 0;
        for (auto& f : factors) d = std::max(d, f.depth());
        return d + 1;
    }
    auto operator<=>(const EulerSum& o) const {
        if (auto r = letter <=> o.letter; r != 0) return r;
        return factors <=> o.factors;
    }
    bool operator==(const EulerSum& o) const = default;
};

}  // namespace nestedsums

#endif
