#pragma once

// Finite subgroups of SL_3 over Q(zeta_9): closure, Molien series,
// and the wild ramification filtration of Kl_3 at infinity for p = 3.

#include <array>
#include <map>
#include <utility>

#include "exactalg.hpp"
#include "ratfunc.hpp"

namespace kloost {

constexpr int kMonoCond = 9;

class CycMatrix {
public:
    CycMatrix() : a_(9, CycElem(kMonoCond)) {}
    static CycMatrix identity() {
        CycMatrix m;
        for (int i = 0; i < 3; ++i) m.a_[i * 4] = CycElem::from_int(kMonoCond, 1);
        return m;
    }
    static CycMatrix diag(const CycElem& x, const CycElem& y, const CycElem& z) {
        CycMatrix m;
        m.a_[0] = x;
        m.a_[4] = y;
        m.a_[8] = z;
        return m;
    }

    CycElem& operator()(int i, int j) { return a_[i * 3 + j]; }
    const CycElem& operator()(int i, int j) const { return a_[i * 3 + j]; }

    CycMatrix operator*(const CycMatrix& o) const {
        CycMatrix r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                CycElem acc(kMonoCond);
                for (int k = 0; k < 3; ++k) {
                    if ((*this)(i, k).is_zero() || o(k, j).is_zero()) continue;
                    acc += (*this)(i, k) * o(k, j);
                }
                r(i, j) = acc;
            }
        return r;
    }
    CycMatrix scaled(const CycElem& s) const {
        CycMatrix r = *this;
        for (auto& v : r.a_) v = v * s;
        return r;
    }
    bool operator==(const CycMatrix& o) const { return a_ == o.a_; }

    CycElem trace() const { return a_[0] + a_[4] + a_[8]; }
    // sum of principal 2x2 minors
    CycElem minors2() const {
        const auto& m = *this;
        return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) -
               m(1, 2) * m(2, 1);
    }
    CycElem det() const {
        const auto& m = *this;
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }

    // canonical key for dedup
    std::string key() const {
        std::string s;
        for (const auto& v : a_) {
            for (const auto& c : v.num()) {
                s += c.get_str(16);
                s += ',';
            }
            s += '/';
            s += v.den().get_str(16);
            s += ';';
        }
        return s;
    }

private:
    std::vector<CycElem> a_;
};

enum class GroupName { G108, G216, ST27 };

inline const char* group_name(GroupName g) {
    switch (g) {
        case GroupName::G108: return "g108";
        case GroupName::G216: return "g216";
        case GroupName::ST27: return "st27";
    }
    return "?";
}

struct MatGroup {
    GroupName name = GroupName::G108;
    std::vector<CycMatrix> elements;
    std::vector<CycMatrix> generators;

    std::size_t order() const { return elements.size(); }
    bool contains(const CycMatrix& m) const {
        for (const auto& e : elements)
            if (e == m) return true;
        return false;
    }
};

namespace gens {

inline CycElem z9(int j) { return CycElem::zeta_pow(kMonoCond, j); }
inline CycElem omega() { return z9(6); }
inline CycElem eps() { return z9(4); }

inline CycMatrix S() {
    return CycMatrix::diag(z9(0), omega(), omega() * omega());
}
inline CycMatrix T() {
    CycMatrix m;
    m(0, 1) = z9(0);
    m(1, 2) = z9(0);
    m(2, 0) = z9(0);
    return m;
}
inline CycMatrix U() { return CycMatrix::diag(eps(), eps(), eps() * omega()); }
// U^{-1} = diag(eps^8, eps^8, eps^8 omega^2)
inline CycMatrix U_inv() {
    CycElem e8 = z9(32);
    return CycMatrix::diag(e8, e8, e8 * omega() * omega());
}
inline CycMatrix V() {
    CycElem w = omega(), w2 = w * w, one = z9(0);
    CycMatrix m;
    m(0, 0) = one;
    m(0, 1) = one;
    m(0, 2) = one;
    m(1, 0) = one;
    m(1, 1) = w;
    m(1, 2) = w2;
    m(2, 0) = one;
    m(2, 1) = w2;
    m(2, 2) = w;
    // 1/(w - w^2) = -(w - w^2)/3
    return m.scaled((w - w2).scaled(BigRat(-1, 3)));
}

} // namespace gens

// product closure from generators; finite, so inverses come for free
inline std::vector<CycMatrix> close_group(const std::vector<CycMatrix>& generators, std::size_t limit = 1000) {
    std::vector<CycMatrix> elems{CycMatrix::identity()};
    std::map<std::string, std::size_t> seen{{elems[0].key(), 0}};
    for (std::size_t head = 0; head < elems.size(); ++head) {
        for (const auto& g : generators) {
            CycMatrix x = elems[head] * g;
            auto k = x.key();
            if (seen.count(k)) continue;
            seen.emplace(std::move(k), elems.size());
            elems.push_back(std::move(x));
            if (elems.size() > limit) throw Error(Errc::ClosureOverflow, "group closure exceeded element limit");
        }
    }
    return elems;
}

inline MatGroup build_group(GroupName name) {
    MatGroup G;
    G.name = name;
    switch (name) {
        case GroupName::ST27: G.generators = {gens::S(), gens::T()}; break;
        case GroupName::G108: G.generators = {gens::S(), gens::T(), gens::V()}; break;
        case GroupName::G216:
            G.generators = {gens::S(), gens::T(), gens::V(), gens::U() * gens::V() * gens::U_inv()};
            break;
    }
    auto one = CycElem::from_int(kMonoCond, 1);
    for (const auto& g : G.generators)
        if (g.det() != one) throw Error(Errc::InvalidArgument, "generator not in SL_3");
    G.elements = close_group(G.generators);
    return G;
}

inline std::vector<CycMatrix> coset(const MatGroup& H, const CycMatrix& phi) {
    std::vector<CycMatrix> out;
    out.reserve(H.order());
    for (const auto& h : H.elements) out.push_back(phi * h);
    return out;
}

// elements of G not in H
inline std::vector<CycMatrix> complement(const MatGroup& G, const MatGroup& H) {
    std::vector<CycMatrix> out;
    for (const auto& g : G.elements)
        if (!H.contains(g)) out.push_back(g);
    return out;
}

namespace detail {

inline int element_order(const CycMatrix& g, int cap = 1000) {
    CycMatrix id = CycMatrix::identity(), x = g;
    for (int k = 1; k <= cap; ++k) {
        if (x == id) return k;
        x = x * g;
    }
    throw Error(Errc::ClosureOverflow, "element order exceeds cap");
}

} // namespace detail

// (1/#list) sum_g 1/det(1 - x g), averaged over the given list of matrices
inline RatFunc molien(const std::vector<CycMatrix>& mats) {
    if (mats.empty()) throw Error(Errc::InvalidArgument, "empty matrix list");
    std::int64_t L = 1;
    for (const auto& g : mats) {
        std::int64_t o = detail::element_order(g);
        L = L / gcd64(L, o) * o;
    }
    // numerator of each term over (1 - x^L)^3 has degree <= 3L - 3; extra terms check the fit
    const int terms = static_cast<int>(3 * L + 6);
    std::vector<CycElem> sum(terms, CycElem(kMonoCond));
    for (const auto& g : mats) {
        CycElem t = g.trace(), c2 = g.minors2(), d = g.det();
        // 1/det(1 - xg) = 1/(1 - t x + c2 x^2 - d x^3)
        std::vector<CycElem> s(terms, CycElem(kMonoCond));
        s[0] = CycElem::from_int(kMonoCond, 1);
        for (int k = 1; k < terms; ++k) {
            CycElem acc = t * s[k - 1];
            if (k >= 2) acc -= c2 * s[k - 2];
            if (k >= 3) acc += d * s[k - 3];
            s[k] = acc;
        }
        for (int k = 0; k < terms; ++k) sum[k] += s[k];
    }
    std::vector<BigRat> ser(terms);
    BigRat inv_n(1, static_cast<long>(mats.size()));
    for (int k = 0; k < terms; ++k) {
        if (!sum[k].is_rational()) throw Error(Errc::NonRationalResult, "Molien coefficient not rational");
        ser[k] = cyc_to_rational(sum[k]) * inv_n;
    }
    QPoly den = QPoly::one_minus_x_pow(static_cast<int>(L));
    den = den * den * den;
    std::vector<BigRat> numc(terms);
    for (int k = 0; k < terms; ++k) {
        BigRat acc = 0;
        for (int j = 0; j <= std::min(k, den.degree()); ++j) acc += den.coeff(j) * ser[k - j];
        numc[k] = acc;
    }
    for (int k = static_cast<int>(3 * L - 2); k < terms; ++k)
        if (numc[k] != 0) throw Error(Errc::NonRationalResult, "Molien numerator does not terminate");
    return RatFunc(QPoly(std::move(numc)), den);
}

inline RatFunc molien(const MatGroup& G) { return molien(G.elements); }

// closed forms for G108 and G216
inline RatFunc molien_P() {
    QPoly num{-1, 0, 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0, 0, -1};
    QPoly a{-1, 0, 0, 1}, b{1, 0, 0, 1}, c{1, 0, 0, 0, 0, 0, 1};
    return RatFunc(num, a * a * a * b * b * c);
}
// 2P~ - P
inline RatFunc molien_Q() {
    QPoly num{-1, 0, 0, 1, 0, 0, -1};
    return RatFunc(num, QPoly{-1, 0, 0, 1} * QPoly{1, 0, 0, 0, 0, 0, 1});
}
inline RatFunc molien_Ptilde() { return (molien_P() + molien_Q()).scaled(BigRat(1, 2)); }

namespace detail {

inline BigInt series_coeff(const RatFunc& f, int k) {
    BigRat v = f.series(k + 1)[k];
    if (v.get_den() != 1 || v < 0) throw Error(Errc::NonIntegral, "series coefficient is not a non-negative integer");
    return v.get_num();
}

// cached expansions of P and P~
inline const std::vector<BigRat>& p_series(bool tilde, int need) {
    static thread_local std::vector<BigRat> sp, st;
    auto& s = tilde ? st : sp;
    if (static_cast<int>(s.size()) <= need) s = (tilde ? molien_Ptilde() : molien_P()).series(std::max(need + 1, 64));
    return s;
}

} // namespace detail

// p_k = dim (Sym^k V)^{G108}
inline BigInt p3_inv_dim(int k) {
    if (k < 0) throw Error(Errc::InvalidArgument, "k must be non-negative");
    return detail::p_series(false, k)[k].get_num();
}
inline BigInt p3_inv_dim_tilde(int k) {
    if (k < 0) throw Error(Errc::InvalidArgument, "k must be non-negative");
    return detail::p_series(true, k)[k].get_num();
}

// dim (Sym^k V)^{<S,T>}: T-orbits of exponent vectors with I0 = I1 = I2 mod 3
inline std::int64_t p3_st_invariants(int k) {
    std::int64_t orbits = 0;
    for (int i0 = 0; i0 <= k; ++i0)
        for (int i1 = 0; i0 + i1 <= k; ++i1) {
            int i2 = k - i0 - i1;
            if ((i0 - i1) % 3 || (i1 - i2) % 3) continue;
            // count each orbit once at its lexicographically largest rotation
            std::array<int, 3> v{i0, i1, i2}, r1{i1, i2, i0}, r2{i2, i0, i1};
            if (v >= r1 && v >= r2) ++orbits;
        }
    return orbits;
}

// Swan of Sym^k V under the filtration D0 = G108 > D1 = <S,T> > D2 = D3 = D4 = <omega I> > 1
inline BigRat p3_swan(int k) {
    if (k < 0) throw Error(Errc::InvalidArgument, "k must be non-negative");
    BigInt N = binomial(k + 2, 2);
    BigInt d1 = p3_st_invariants(k);
    BigInt dw = (k % 3 == 0) ? N : BigInt(0);
    BigRat s = BigRat(N - d1, 4) + BigRat(3 * (N - dw), 36);
    s.canonicalize();
    return s;
}

// Frobenius eigenspace dimensions (+1, -1) on the G108-invariants
inline std::pair<BigInt, BigInt> frob_signs_p3(int k) {
    BigInt pk = p3_inv_dim(k), pt = p3_inv_dim_tilde(k);
    BigInt diff = 2 * pt - pk;
    BigInt twice_plus = pk + diff;
    if (twice_plus % 2 != 0) throw Error(Errc::InconsistentParity, "eigenspace system has no integer solution");
    BigInt plus = twice_plus / 2, minus = pk - plus;
    if (plus < 0 || minus < 0) throw Error(Errc::InconsistentParity, "negative eigenspace dimension");
    return {plus, minus};
}

} // namespace kloost
