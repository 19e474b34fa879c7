#pragma once

// Frobenius eigenvalue data on the stalks of Kl_{n+1} and moments
// m^lambda(p) = sum_a s_{mu(lambda)}(alpha_1(a), ..., alpha_{n+1}(a)).

#include <optional>

#include "klsum.hpp"
#include "schur.hpp"

namespace kloost {

struct HighestWeight {
    std::vector<int> lambda; // (lambda_1, ..., lambda_n)

    HighestWeight() = default;
    HighestWeight(std::vector<int> l) : lambda(std::move(l)) {}
    HighestWeight(std::initializer_list<int> l) : lambda(l) {}

    // pad to n entries; trailing zeros are implied
    HighestWeight padded(int nplus1) const {
        std::vector<int> l = lambda;
        while (static_cast<int>(l.size()) > nplus1 - 1) {
            if (l.back() != 0) throw Error(Errc::InvalidArgument, "lambda has more than n entries");
            l.pop_back();
        }
        l.resize(nplus1 - 1, 0);
        for (int v : l)
            if (v < 0) throw Error(Errc::InvalidArgument, "lambda entries must be non-negative");
        return {l};
    }
    int size() const {
        int s = 0;
        for (int v : lambda) s += v;
        return s;
    }
    // mu = (l1+...+ln, l2+...+ln, ..., ln)
    Partition mu() const {
        Partition m(lambda.size());
        int acc = 0;
        for (int i = static_cast<int>(lambda.size()) - 1; i >= 0; --i) {
            acc += lambda[i];
            m[i] = acc;
        }
        return trim_partition(m);
    }
};

struct FrobSymm {
    int nplus1 = 2;
    std::int64_t p = 2;
    std::int64_t q = 2; // residue field size of the base point
    std::int64_t a = 1; // code of the base point
    std::vector<CycElem> elem; // e_0 = 1, e_1..e_{n+1}
};

// e_{n+1-j} = q^{n(n+1)/2 - n j} conj(e_j), e_{n+1} = q^{n(n+1)/2}
inline void complete_by_duality(FrobSymm& fs) {
    int n = fs.nplus1 - 1;
    int m = static_cast<int>(fs.p);
    int half = fs.nplus1 / 2;
    fs.elem.resize(fs.nplus1 + 1, CycElem(m));
    for (int j = half + 1; j <= n; ++j) {
        int i = fs.nplus1 - j;
        fs.elem[j] = fs.elem[i].conj().scaled(bigpow(fs.q, n * (n + 1) / 2 - n * i));
    }
    fs.elem[fs.nplus1] = CycElem::from_int(m, bigpow(fs.q, n * (n + 1) / 2));
}

// power sums P_j (j = 1..floor((n+1)/2)) -> e_j by Newton, remaining e's by duality
inline FrobSymm frob_symm_from_power_sums(int nplus1, std::int64_t p, std::int64_t q, std::int64_t a,
                                          const std::vector<CycElem>& P) {
    int half = nplus1 / 2;
    if (static_cast<int>(P.size()) < half) throw Error(Errc::MissingTower, "not enough power sums");
    int m = static_cast<int>(p);
    FrobSymm fs{nplus1, p, q, a, {}};
    fs.elem.assign(nplus1 + 1, CycElem(m));
    fs.elem[0] = CycElem::from_int(m, 1);
    for (int k = 1; k <= half; ++k) {
        CycElem acc(m);
        for (int i = 1; i <= k; ++i) {
            CycElem t = fs.elem[k - i] * P[i - 1];
            if (i & 1)
                acc += t;
            else
                acc -= t;
        }
        fs.elem[k] = acc.scaled(BigRat(1, k));
        if (!fs.elem[k].is_integral()) throw Error(Errc::NonIntegral, "elementary symmetric value not integral");
    }
    complete_by_duality(fs);
    return fs;
}

// Stalk trace of Frob^j at a is (-1)^n Kl(a; q^j).
inline FrobSymm frob_symm(const KlTable& table_q, const KlTable* table_q2, const ExtElem& a,
                          const FieldEmbedding* emb = nullptr) {
    int nplus1 = table_q.nplus1;
    int n = nplus1 - 1;
    int half = nplus1 / 2;
    std::vector<CycElem> P;
    CycElem k1 = table_q.at(a);
    P.push_back(n % 2 ? -k1 : k1);
    if (half >= 2) {
        if (!table_q2) throw Error(Errc::MissingTower, "F_{q^2} table required for n+1 >= 4");
        ExtElem a2 = emb ? (*emb)(a) : table_q2->index->field.from_code(a.code());
        CycElem k2 = table_q2->at(a2);
        P.push_back(n % 2 ? -k2 : k2);
    }
    if (half > 2) throw Error(Errc::MissingTower, "n+1 > 5 needs higher towers");
    return frob_symm_from_power_sums(nplus1, table_q.p, table_q.q, a.code(), P);
}

inline CycElem schur_trace(const FrobSymm& fs, const Partition& mu) {
    int m = static_cast<int>(fs.p);
    return schur_h<CycElem>(fs.elem, mu, CycElem(m), CycElem::from_int(m, 1));
}

inline CycElem schur_trace_e(const FrobSymm& fs, const Partition& mu) {
    int m = static_cast<int>(fs.p);
    return schur_e<CycElem>(fs.elem, mu, CycElem(m), CycElem::from_int(m, 1));
}

struct MomentReport {
    int nplus1 = 2;
    std::vector<int> lambda;
    std::int64_t p = 2;
    int r = 1;
    BigInt moment;
    std::optional<BigRat> a_value;
};

enum class Engine { auto_select, exact, residue };

struct MomentOptions {
    Engine engine = Engine::auto_select;
    std::int64_t char_mult = 1;
    TableStore* store = nullptr;
    bool force = false; // lift desk-scale guards
};

inline void check_desk_scale(const HighestWeight& hw, bool force) {
    if (!force && hw.size() > 12) throw Error(Errc::DeskScaleExceeded, "|lambda| > 12");
}

// exact moment over F_{p^r}
inline BigInt moment_exact(int nplus1, const HighestWeight& hw_in, std::int64_t p, int r, const MomentOptions& opt) {
    require_prime(p);
    HighestWeight hw = hw_in.padded(nplus1);
    Partition mu = hw.mu();
    int half = nplus1 / 2;
    if (half > 2) throw Error(Errc::MissingTower, "n+1 > 5 is outside the supported towers");
    TableStore local;
    TableStore& store = opt.store ? *opt.store : local;
    auto get = [&](int rr) {
        if (opt.char_mult == 1) return store.get(nplus1, p, rr);
        return std::make_shared<const KlTable>(kl_table(nplus1, p, rr, Backend::convolution, opt.char_mult));
    };
    auto t1 = get(r);
    std::shared_ptr<const KlTable> t2;
    std::optional<FieldEmbedding> emb;
    if (half >= 2) {
        t2 = get(2 * r);
        emb.emplace(t1->index->field, t2->index->field);
    }
    int m = static_cast<int>(p);
    CycElem total(m);
    const auto& F = t1->index->field;
    for (std::int64_t code = 1; code < F.q(); ++code) {
        ExtElem a = F.from_code(code);
        FrobSymm fs = frob_symm(*t1, t2.get(), a, emb ? &*emb : nullptr);
        total += schur_trace(fs, mu);
    }
    BigRat v = cyc_to_rational(total);
    if (v.get_den() != 1) throw Error(Errc::NonIntegral, "moment is not an integer");
    return v.get_num();
}

} // namespace kloost
