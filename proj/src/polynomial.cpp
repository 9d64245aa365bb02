#include "nestedsums/polynomial.hpp"

#include <sstream>

namespace nestedsums {

std::string rational_to_string(const Rational& q) {
    std::ostringstream os;
    os << num(q);
    if (den(q) != 1) os << "/" << den(q);
    return os.str();
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
    if (d.is_zero()) throw std::domain_error("Poly division by zero");
    Poly r = *this;
    std::vector<Rational> q;
    int dq = degree() - d.degree();
    if (dq < 0) return {Poly(), r};
    q.assign(dq + 1, Rational(0));
    std::vector<Rational> rc = r.coeffs_;
    const Rational lead = d.leading();
    for (int i = dq; i >= 0; --i) {
        if (static_cast<int>(rc.size()) - 1 < i + d.degree()) continue;
        Rational f = rc[i + d.degree()] / lead;
        if (f == 0) continue;
        q[i] = f;
        for (int j = 0; j <= d.degree(); ++j) rc[i + j] -= f * d[j];
    }
    while (!rc.empty() && rc.back() == 0) rc.pop_back();
    return {Poly(std::move(q)), Poly(std::move(rc))};
}

Poly poly_gcd(Poly a, Poly b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    while (!b.is_zero()) {
        Poly r = a.divmod(b).second;
        a = b;
        b = r;
    }
    // normalize monic
    Rational lead = a.leading();
    if (lead != 1) a = a * (Rational(1) / lead);
    return a;
}

void RatFunc::normalize() {
    if (den_.is_zero()) throw std::domain_error("RatFunc zero denominator");
    if (num_.is_zero()) {
        den_ = Poly(Rational(1));
        return;
    }
    Poly g = poly_gcd(num_, den_);
    if (!g.is_one()) {
        num_ = num_.divmod(g).first;
        den_ = den_.divmod(g).first;
    }
    Rational lead = den_.leading();
    if (lead != 1) {
        Rational inv = Rational(1) / lead;
        num_ = num_ * inv;
        den_ = den_ * inv;
    }
}

int RatFunc::cmp(const RatFunc& o) const {
    auto cv = [](const std::vector<Rational>& a, const std::vector<Rational>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    };
    if (int r = cv(num_.coeffs(), o.num_.coeffs()); r != 0) return r;
    return cv(den_.coeffs(), o.den_.coeffs());
}

std::string Poly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = coeffs_.size(); i-- > 0;) {
        const Rational& c = coeffs_[i];
        if (c == 0) continue;
        Rational ac = rabs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? "-" : "+");
        }
        bool unit = (ac == 1) && i > 0;
        if (!unit) os << rational_to_string(ac);
        if (i > 0) {
            if (!unit) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::string RatFunc::str(const std::string& var) const {
    if (is_zero()) return "0";
    if (den_.is_one()) {
        if (num_.is_constant()) return rational_to_string(num_.constant_term());
        return num_.degree() >= 1 && num_.coeffs().size() > 1 ? "(" + num_.str(var) + ")"
                                                              : num_.str(var);
    }
    std::string ns = num_.is_constant() ? rational_to_string(num_.constant_term())
                                        : "(" + num_.str(var) + ")";
    return ns + "/(" + den_.str(var) + ")";
}

}  // namespace nestedsums
