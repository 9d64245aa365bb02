#ifndef NESTEDSUMS_POLYNOMIAL_HPP
#define NESTEDSUMS_POLYNOMIAL_HPP

#include "nestedsums/rational.hpp"

#include <string>
#include <vector>

namespace nestedsums {

// Dense univariate polynomial over Q in the symbol n.
class Poly {
  public:
    Poly() = default;
    explicit Poly(const Rational& c) {
        if (c != 0) coeffs_.push_back(c);
    }
    Poly(std::vector<Rational> cs) : coeffs_(std::move(cs)) { trim(); }

    static Poly variable() { return Poly(std::vector<Rational>{Rational(0), Rational(1)}); }
    static Poly linear(const Rational& a, const Rational& b) {
        // a*n + b
        return Poly(std::vector<Rational>{b, a});
    }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }
    bool is_constant() const { return coeffs_.size() <= 1; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Rational& operator[](size_t i) const { return coeffs_[i]; }
    Rational constant_term() const { return coeffs_.empty() ? Rational(0) : coeffs_[0]; }
    Rational leading() const { return coeffs_.empty() ? Rational(0) : coeffs_.back(); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    Poly operator+(const Poly& o) const {
        std::vector<Rational> r(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
        for (size_t i = 0; i < coeffs_.size(); ++i) r[i] += coeffs_[i];
        for (size_t i = 0; i < o.coeffs_.size(); ++i) r[i] += o.coeffs_[i];
        return Poly(std::move(r));
    }
    Poly operator-(const Poly& o) const { return *this + (o * Rational(-1)); }
    Poly operator*(const Rational& c) const {
        if (c == 0) return Poly();
        std::vector<Rational> r = coeffs_;
        for (auto& x : r) x *= c;
        return Poly(std::move(r));
    }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<Rational> r(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
        for (size_t i = 0; i < coeffs_.size(); ++i)
            for (size_t j = 0; j < o.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * o.coeffs_[j];
        return Poly(std::move(r));
    }

    bool operator==(const Poly& o) const { return coeffs_ == o.coeffs_; }

    Rational eval(const Rational& x) const {
        Rational r(0);
        for (size_t i = coeffs_.size(); i-- > 0;) r = r * x + coeffs_[i];
        return r;
    }
    BigFloat eval(const BigFloat& x) const {
        BigFloat r(0);
        for (size_t i = coeffs_.size(); i-- > 0;) r = r * x + to_bigfloat(coeffs_[i]);
        return r;
    }

    // Quotient and remainder of this / d.
    std::pair<Poly, Poly> divmod(const Poly& d) const;
    Poly pow(unsigned e) const {
        Poly r(Rational(1)), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
    // Substitute n -> a*n + b.
    Poly compose_linear(const Rational& a, const Rational& b) const {
        Poly r, lin = Poly::linear(a, b);
        Poly p(Rational(1));
        for (size_t i = 0; i < coeffs_.size(); ++i) {
            r = r + p * coeffs_[i];
            p = p * lin;
        }
        return r;
    }
    Poly derivative() const {
        if (coeffs_.size() <= 1) return Poly();
        std::vector<Rational> r(coeffs_.size() - 1);
        for (size_t i = 1; i < coeffs_.size(); ++i) r[i - 1] = coeffs_[i] * Rational(static_cast<long>(i));
        return Poly(std::move(r));
    }

    std::string str(const std::string& var = "n") const;

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
    std::vector<Rational> coeffs_;
};

Poly poly_gcd(Poly a, Poly b);

// Rational function in n over Q, stored reduced with monic denominator.
class RatFunc {
  public:
    RatFunc() : num_(), den_(Rational(1)) {}
    RatFunc(const Rational& c) : num_(c), den_(Rational(1)) {}
    RatFunc(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
    explicit RatFunc(Poly n) : num_(std::move(n)), den_(Rational(1)) {}

    static RatFunc variable() { return RatFunc(Poly::variable()); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational as_constant() const { return num_.constant_term() / den_.constant_term(); }

    RatFunc operator+(const RatFunc& o) const {
        return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    RatFunc operator-(const RatFunc& o) const {
        return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    RatFunc operator*(const RatFunc& o) const { return RatFunc(num_ * o.num_, den_ * o.den_); }
    RatFunc operator/(const RatFunc& o) const {
        if (o.is_zero()) throw std::domain_error("RatFunc division by zero");
        return RatFunc(num_ * o.den_, den_ * o.num_);
    }
    RatFunc operator-() const { return RatFunc(num_ * Rational(-1), den_); }
    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    // Total order for canonical term sorting.
    int cmp(const RatFunc& o) const;

    Rational eval(const Rational& x) const {
        Rational d = den_.eval(x);
        if (d == 0) throw std::domain_error("RatFunc pole at evaluation point");
        return num_.eval(x) / d;
    }
    RatFunc compose_linear(const Rational& a, const Rational& b) const {
        return RatFunc(num_.compose_linear(a, b), den_.compose_linear(a, b));
    }

    std::string str(const std::string& var = "n") const;

  private:
    void normalize();
    Poly num_, den_;
};

}  // namespace nestedsums

#endif
