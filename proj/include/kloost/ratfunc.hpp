#pragma once

// Univariate polynomials and rational functions over Q.

#include <ostream>
#include <sstream>

#include "common.hpp"

namespace kloost {

class QPoly {
public:
    QPoly() = default;
    QPoly(std::vector<BigRat> c) : c_(std::move(c)) { trim(); }
    QPoly(std::initializer_list<long> c) {
        for (long v : c) c_.emplace_back(v);
        trim();
    }
    static QPoly constant(const BigRat& v) { return QPoly(std::vector<BigRat>{v}); }
    static QPoly monomial(const BigRat& v, int deg) {
        std::vector<BigRat> c(deg + 1);
        c[deg] = v;
        return QPoly(std::move(c));
    }
    // 1 - x^d
    static QPoly one_minus_x_pow(int d) {
        std::vector<BigRat> c(d + 1);
        c[0] = 1;
        c[d] -= 1;
        return QPoly(std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<BigRat>& coeffs() const { return c_; }
    BigRat coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : BigRat(0); }
    BigRat lead() const { return c_.empty() ? BigRat(0) : c_.back(); }

    QPoly operator+(const QPoly& o) const {
        std::vector<BigRat> c(std::max(c_.size(), o.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
        return QPoly(std::move(c));
    }
    QPoly operator-(const QPoly& o) const {
        std::vector<BigRat> c(std::max(c_.size(), o.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeff(static_cast<int>(i)) - o.coeff(static_cast<int>(i));
        return QPoly(std::move(c));
    }
    QPoly operator-() const { return QPoly() - *this; }
    QPoly operator*(const QPoly& o) const {
        if (is_zero() || o.is_zero()) return {};
        std::vector<BigRat> c(c_.size() + o.c_.size() - 1);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
        }
        return QPoly(std::move(c));
    }
    QPoly scaled(const BigRat& s) const {
        std::vector<BigRat> c = c_;
        for (auto& v : c) v *= s;
        return QPoly(std::move(c));
    }
    bool operator==(const QPoly& o) const { return c_ == o.c_; }
    bool operator!=(const QPoly& o) const { return c_ != o.c_; }

    // long division: *this = q * d + r
    void divmod(const QPoly& d, QPoly& q, QPoly& r) const {
        if (d.is_zero()) throw Error(Errc::InvalidArgument, "division by zero polynomial");
        std::vector<BigRat> rem = c_;
        std::vector<BigRat> quo(std::max(0, degree() - d.degree() + 1));
        BigRat inv_lead = 1 / d.lead();
        for (int i = degree(); i >= d.degree(); --i) {
            if (rem[i] == 0) continue;
            BigRat c = rem[i] * inv_lead;
            quo[i - d.degree()] = c;
            for (int j = 0; j <= d.degree(); ++j) rem[i - d.degree() + j] -= c * d.c_[j];
        }
        q = QPoly(std::move(quo));
        r = QPoly(std::move(rem));
    }
    QPoly monic() const { return is_zero() ? *this : scaled(1 / lead()); }

    std::string str(const char* var = "x") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = 0; i <= degree(); ++i) {
            if (c_[i] == 0) continue;
            BigRat v = c_[i];
            if (!first) os << (v < 0 ? " - " : " + ");
            else if (v < 0) os << "-";
            BigRat a = abs(v);
            if (i == 0 || a != 1) os << a;
            if (i > 0) os << (i == 0 || a != 1 ? "*" : "") << var << (i > 1 ? "^" + std::to_string(i) : "");
            first = false;
        }
        return os.str();
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<BigRat> c_;
};

inline QPoly poly_gcd(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        QPoly q, r;
        a.divmod(b, q, r);
        a = std::move(b);
        b = r.monic();
    }
    return a.monic();
}

class RatFunc {
public:
    RatFunc() : num_(), den_(QPoly{1}) {}
    RatFunc(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
    static RatFunc poly(QPoly p) { return RatFunc(std::move(p), QPoly{1}); }

    const QPoly& num() const { return num_; }
    const QPoly& den() const { return den_; }

    RatFunc operator+(const RatFunc& o) const { return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_); }
    RatFunc operator-(const RatFunc& o) const { return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_); }
    RatFunc operator*(const RatFunc& o) const { return RatFunc(num_ * o.num_, den_ * o.den_); }
    RatFunc scaled(const BigRat& s) const { return RatFunc(num_.scaled(s), den_); }
    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    // power series coefficients 0..terms-1; needs den(0) != 0
    std::vector<BigRat> series(int terms) const {
        BigRat d0 = den_.coeff(0);
        if (d0 == 0) throw Error(Errc::InvalidArgument, "pole at 0");
        std::vector<BigRat> s(terms);
        for (int k = 0; k < terms; ++k) {
            BigRat acc = num_.coeff(k);
            for (int j = 1; j <= std::min(k, den_.degree()); ++j) acc -= den_.coeff(j) * s[k - j];
            s[k] = acc / d0;
        }
        return s;
    }

    std::string str() const { return "(" + num_.str() + ")/(" + den_.str() + ")"; }

private:
    void normalize() {
        if (den_.is_zero()) throw Error(Errc::InvalidArgument, "zero denominator");
        if (num_.is_zero()) {
            den_ = QPoly{1};
            return;
        }
        QPoly g = poly_gcd(num_, den_);
        if (g.degree() > 0) {
            QPoly q, r;
            num_.divmod(g, q, r);
            num_ = q;
            den_.divmod(g, q, r);
            den_ = q;
        }
        BigRat l = den_.lead();
        num_ = num_.scaled(1 / l);
        den_ = den_.scaled(1 / l);
    }
    QPoly num_, den_;
};

// exp(sum_{r>=1} c_r T^r / r) truncated to order R (coefficients of T^0..T^R)
inline std::vector<BigRat> exp_log_series(const std::vector<BigInt>& c, int R) {
    // Z' = Z * L' with L' = sum c_r T^{r-1}
    std::vector<BigRat> z(R + 1);
    z[0] = 1;
    for (int k = 1; k <= R; ++k) {
        BigRat acc = 0;
        for (int r = 1; r <= k && r <= static_cast<int>(c.size()); ++r) acc += BigRat(c[r - 1]) * z[k - r];
        z[k] = acc / k;
    }
    return z;
}

} // namespace kloost
