#pragma once

// Multiprecision floating point for numeric sanity checks (Weil bound, purity).

#include <complex>
#include <mpfr.h>

#include "exactalg.hpp"

namespace kloost {

class Real {
public:
    explicit Real(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    static Real of(const BigInt& z, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN);
        return r;
    }
    static Real of(const BigRat& z, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_q(r.v_, z.get_mpq_t(), MPFR_RNDN);
        return r;
    }
    static Real of(double d, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_d(r.v_, d, MPFR_RNDN);
        return r;
    }
    static Real pi(mpfr_prec_t prec) {
        Real r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    Real operator+(const Real& o) const { Real r(prec()); mpfr_add(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    Real operator-(const Real& o) const { Real r(prec()); mpfr_sub(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    Real operator*(const Real& o) const { Real r(prec()); mpfr_mul(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    Real operator/(const Real& o) const { Real r(prec()); mpfr_div(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    Real sqrt() const { Real r(prec()); mpfr_sqrt(r.v_, v_, MPFR_RNDN); return r; }
    Real abs() const { Real r(prec()); mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
    Real cos() const { Real r(prec()); mpfr_cos(r.v_, v_, MPFR_RNDN); return r; }
    Real sin() const { Real r(prec()); mpfr_sin(r.v_, v_, MPFR_RNDN); return r; }
    Real pow(const Real& e) const { Real r(prec()); mpfr_pow(r.v_, v_, e.v_, MPFR_RNDN); return r; }
    bool operator<=(const Real& o) const { return mpfr_lessequal_p(v_, o.v_); }
    bool operator<(const Real& o) const { return mpfr_less_p(v_, o.v_); }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

private:
    mpfr_t v_;
};

struct ComplexReal {
    Real re, im;
    Real abs() const { return (re * re + im * im).sqrt(); }
};

inline ComplexReal embed_complex_mp(const CycElem& x, mpfr_prec_t bits = 128) {
    int m = x.m();
    Real two_pi_over_m = Real::pi(bits) * Real::of(2.0, bits) / Real::of(BigInt(m), bits);
    Real re(bits), im(bits);
    for (int i = 0; i < x.phi(); ++i) {
        if (x.num()[i] == 0) continue;
        Real c = Real::of(x.num()[i], bits);
        Real ang = two_pi_over_m * Real::of(BigInt(i), bits);
        re = re + c * ang.cos();
        im = im + c * ang.sin();
    }
    Real d = Real::of(x.den(), bits);
    return {re / d, im / d};
}

// evaluate at zeta_m = exp(2 pi i / m)
inline std::complex<double> embed_complex(const CycElem& x, mpfr_prec_t bits = 128) {
    auto z = embed_complex_mp(x, bits);
    return {z.re.to_double(), z.im.to_double()};
}

} // namespace kloost
