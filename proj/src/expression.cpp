#include "nestedsums/expression.hpp"

#include <algorithm>

namespace nestedsums {

Atom Atom::geometric(const Rational& base) {
    if (base == 0) throw std::invalid_argument("geometric base 0");
    if (base == -1) return alternating();
    if (base == 1) throw std::invalid_argument("geometric base 1 is trivial");
    return Atom(Var(GeometricFactor{base}));
}

namespace {
int class_rank(const Atom::Var& v) { return static_cast<int>(v.index()); }

template <class T>
bool less_same(const T& a, const T& b) {
    return a < b;
}
}  // namespace

bool Atom::operator<(const Atom& o) const {
    int ra = class_rank(v_), rb = class_rank(o.v_);
    if (ra != rb) return ra < rb;
    return std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            const T& b = std::get<T>(o.v_);
            if constexpr (std::is_same_v<T, NestedSum>) {
                // class rank inside sums: weight, depth, then letters (spec order)
                if (a.weight() != b.weight()) return a.weight() < b.weight();
                if (a.depth() != b.depth()) return a.depth() < b.depth();
                return a < b;
            } else if constexpr (std::is_same_v<T, AlternatingFactor>) {
                return false;
            } else {
                return less_same(a, b);
            }
        },
        v_);
}

Monomial::Monomial(std::vector<Atom> as) : atoms(std::move(as)) {
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a < b; });
}

Monomial Monomial::merged(const Monomial& o) const {
    std::vector<Atom> all = atoms;
    all.insert(all.end(), o.atoms.begin(), o.atoms.end());
    return Monomial(std::move(all));
}

bool Monomial::operator<(const Monomial& o) const {
    return std::lexicographical_compare(atoms.begin(), atoms.end(), o.atoms.begin(),
                                        o.atoms.end(), [](const Atom& a, const Atom& b) { return a < b; });
}

Expression Expression::atom(Atom a, RatFunc coeff) {
    Expression e;
    if (!coeff.is_zero()) e.terms_[Monomial::single(std::move(a))] = std::move(coeff);
    return e;
}

Expression Expression::monomial(Monomial m, RatFunc coeff) {
    Expression e;
    if (!coeff.is_zero()) e.terms_[std::move(m)] = std::move(coeff);
    return e;
}

void Expression::add_term(const Monomial& m, const RatFunc& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Expression Expression::operator+(const Expression& o) const {
    Expression r = *this;
    for (auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Expression Expression::operator-(const Expression& o) const {
    Expression r = *this;
    for (auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Expression& Expression::operator+=(const Expression& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Expression& Expression::operator-=(const Expression& o) {
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Expression Expression::operator*(const RatFunc& c) const {
    Expression r;
    if (c.is_zero()) return r;
    for (auto& [m, k] : terms_) {
        RatFunc v = k * c;
        if (!v.is_zero()) r.terms_[m] = std::move(v);
    }
    return r;
}

Expression mul_structural(const Expression& a, constExpression& b) {
    Expression r;
    for (auto& [ma, ca] : a.terms_)
        for (auto& [mb, cb] : b.terms_) r.add_term(ma.merged(mb), ca * cb);
    return r;
}

Expression Expression::map_terms(
    const std::function<Expression(const Monomial&, const RatFunc&)>& f) const {
    Expression r;
    for (auto& [m, c] : terms_) r += f(m, c);
    return r;
}

RatFunc Expression::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? RatFunc() : it->second;
}

std::vector<NestedSum> Expression::sum_atoms() const {
    std::vector<NestedSum> out;
    for (auto& [m, c] : terms_)
        for (auto& a : m.atoms)
            if (const NestedSum* s = a.get<NestedSum>()) {
                if (std::find(out.begin(), out.end(), *s) == out.end()) out.push_back(*s);
            }
    return out;
}

Expression canonicalize(const Expression& e) {
    Expression r;
    for (auto& [m, c] : e.terms()) r.add_term(m, c);
    return r;
}

}  // namespace nestedsums
