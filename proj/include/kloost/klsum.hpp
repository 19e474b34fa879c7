#pragma once

// Kloosterman sums Kl_{n+1}(a; q) in Z[zeta_p]: naive oracle, cyclic
// convolution over F_q^x, and an on-disk table cache.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <thread>
#include <tuple>
#include <unistd.h>

#include "exactalg.hpp"
#include "numeric.hpp"

namespace kloost {

enum class Backend { naive, convolution };

inline const char* backend_name(Backend b) { return b == Backend::naive ? "naive" : "convolution"; }

inline CycElem psi(std::int64_t p, std::int64_t x) { return CycElem::zeta_pow(static_cast<int>(p), mod(x, p)); }

// Discrete-log indexing of F_q^x by the smallest generator.
struct FieldIndex {
    ExtField field;
    std::int64_t generator = 0;           // code of g
    std::vector<std::int64_t> index_code; // i -> code(g^i)
    std::vector<std::int64_t> code_index; // code -> i, -1 for 0
    std::vector<std::int64_t> index_trace;

    static std::shared_ptr<const FieldIndex> build(std::int64_t p, int r) {
        static std::mutex mu;
        static std::map<std::pair<std::int64_t, int>, std::shared_ptr<const FieldIndex>> cache;
        {
            std::lock_guard<std::mutex> lock(mu);
            if (auto it = cache.find({p, r}); it != cache.end()) return it->second;
        }
        auto fi = std::make_shared<FieldIndex>();
        fi->field = ext_field(p, r);
        const auto& F = fi->field;
        std::int64_t q = F.q();
        fi->generator = F.generator_code();
        auto tb = trace_basis(F);
        fi->index_code.resize(q - 1);
        fi->index_trace.resize(q - 1);
        fi->code_index.assign(q, -1);
        ExtElem g = F.from_code(fi->generator), x = F.one();
        for (std::int64_t i = 0; i < q - 1; ++i) {
            std::int64_t c = x.code();
            fi->index_code[i] = c;
            fi->code_index[c] = i;
            std::int64_t t = 0;
            for (int k = 0; k < F.r(); ++k) t += tb[k] * x.coeffs()[k];
            fi->index_trace[i] = t % p;
            x = x * g;
        }
        std::lock_guard<std::mutex> lock(mu);
        cache.emplace(std::make_pair(p, r), fi);
        return fi;
    }
    std::int64_t q() const { return field.q(); }
    std::int64_t index_of(const ExtElem& a) const {
        std::int64_t i = code_index[a.code()];
        if (i < 0) throw Error(Errc::ZeroPoint, "a = 0");
        return i;
    }
};

inline CycElem kl_naive(int nplus1, std::int64_t p, int r, const ExtElem& a, std::int64_t char_mult = 1) {
    require_prime(p);
    if (a.is_zero()) throw Error(Errc::ZeroPoint, "Kl at a = 0");
    const ExtField& F = a.field();
    std::int64_t q = F.q();
    int n = nplus1 - 1;
    std::vector<ExtElem> elems, inv;
    std::vector<std::int64_t> tr(q);
    for (std::int64_t c = 0; c < q; ++c) tr[c] = trace(F.from_code(c)).value;
    for (std::int64_t c = 1; c < q; ++c) {
        elems.push_back(F.from_code(c));
        inv.push_back(elems.back().inv());
    }
    std::vector<BigInt> counts(p);
    if (n == 0) {
        counts[mod(char_mult * tr[a.code()], p)] += 1;
        return CycElem::from_full(static_cast<int>(p), counts);
    }
    std::vector<std::int64_t> raw(p, 0);
    std::vector<std::size_t> idx(n, 0);
    const std::size_t m = elems.size();
    std::vector<std::int64_t> inv_index(q, 0);
    for (std::size_t i = 0; i < m; ++i) inv_index[elems[i].code()] = static_cast<std::int64_t>(i);
    (void)r;
    while (true) {
        ExtElem s = F.zero(), prod = F.one();
        for (int k = 0; k < n; ++k) {
            s = s + elems[idx[k]];
            prod = prod * elems[idx[k]];
        }
        s = s + a * inv[inv_index[prod.code()]];
        raw[mod(char_mult * tr[s.code()], p)] += 1;
        int k = 0;
        while (k < n && ++idx[k] == m) idx[k++] = 0;
        if (k == n) break;
    }
    for (std::int64_t i = 0; i < p; ++i) counts[i] = static_cast<long>(raw[i]);
    return CycElem::from_full(static_cast<int>(p), counts);
}

struct KlTable {
    int nplus1 = 2;
    std::int64_t p = 2;
    int r = 1;
    std::int64_t q = 2;
    Backend backend = Backend::convolution;
    std::int64_t char_mult = 1;
    std::shared_ptr<const FieldIndex> index;
    std::vector<CycElem> values; // by discrete log

    const CycElem& at_index(std::int64_t i) const { return values[mod(i, q - 1)]; }
    const CycElem& at_code(std::int64_t code) const {
        std::int64_t i = index->code_index[code];
        if (i < 0) throw Error(Errc::ZeroPoint, "a = 0");
        return values[i];
    }
    const CycElem& at(const ExtElem& a) const { return at_code(a.code()); }
    std::int64_t generator() const { return index->generator; }
};

namespace detail {

// counting representation: row i holds the multiplicities of psi-exponents
inline std::vector<std::vector<std::int64_t>> kl_counts(int nplus1, const FieldIndex& fi, std::int64_t p,
                                                        std::int64_t char_mult) {
    std::int64_t N = fi.q() - 1;
    std::vector<std::int64_t> shift(N);
    for (std::int64_t j = 0; j < N; ++j) shift[j] = mod(char_mult * fi.index_trace[j], p);
    std::vector<std::vector<std::int64_t>> cur(N, std::vector<std::int64_t>(p, 0));
    for (std::int64_t i = 0; i < N; ++i) cur[i][shift[i]] = 1;
    for (int level = 1; level < nplus1; ++level) {
        std::vector<std::vector<std::int64_t>> nxt(N, std::vector<std::int64_t>(p, 0));
        // Kl_{m+1}(g^i) = sum_j psi(g^j) Kl_m(g^{i-j})
        for (std::int64_t i = 0; i < N; ++i) {
            auto& out = nxt[i];
            for (std::int64_t j = 0; j < N; ++j) {
                std::int64_t src = i - j;
                if (src < 0) src += N;
                const auto& in = cur[src];
                std::int64_t s = shift[j];
                std::int64_t split = p - s;
                for (std::int64_t t = 0; t < split; ++t) out[t + s] += in[t];
                for (std::int64_t t = split; t < p; ++t) out[t - split] += in[t];
            }
        }
        cur.swap(nxt);
    }
    return cur;
}

} // namespace detail

inline KlTable kl_table(int nplus1, std::int64_t p, int r, Backend backend = Backend::convolution,
                        std::int64_t char_mult = 1) {
    require_prime(p);
    if (nplus1 < 2) throw Error(Errc::InvalidArgument, "n+1 must be >= 2");
    if (mod(char_mult, p) == 0) throw Error(Errc::InvalidArgument, "character multiplier must be a unit");
    KlTable t;
    t.nplus1 = nplus1;
    t.p = p;
    t.r = r;
    t.index = FieldIndex::build(p, r);
    t.q = t.index->q();
    t.backend = backend;
    t.char_mult = char_mult;
    std::int64_t N = t.q - 1;
    t.values.reserve(N);
    if (backend == Backend::naive) {
        for (std::int64_t i = 0; i < N; ++i)
            t.values.push_back(kl_naive(nplus1, p, r, t.index->field.from_code(t.index->index_code[i]), char_mult));
        return t;
    }
    // counts stay below (q-1)^n; keep them inside int64
    long double bound = 1;
    for (int k = 1; k < nplus1; ++k) bound *= static_cast<long double>(N);
    if (bound > 9.0e18L) throw Error(Errc::DeskScaleExceeded, "exact table too large for the counting backend");
    auto counts = detail::kl_counts(nplus1, *t.index, p, char_mult);
    for (std::int64_t i = 0; i < N; ++i) {
        std::vector<BigInt> full(p);
        for (std::int64_t c = 0; c < p; ++c) full[c] = static_cast<long>(counts[i][c]);
        t.values.push_back(CycElem::from_full(static_cast<int>(p), std::move(full)));
    }
    return t;
}

// |Kl| <= (n+1) q^{n/2} at every entry
inline bool weil_bound_holds(const KlTable& t, mpfr_prec_t bits = 128, double tol = 1e-6) {
    Real bound = Real::of(BigInt(t.nplus1), bits) *
                 Real::of(BigInt(static_cast<long>(t.q)), bits).pow(Real::of((t.nplus1 - 1) / 2.0, bits)) +
                 Real::of(tol, bits);
    for (const auto& v : t.values)
        if (!(embed_complex_mp(v, bits).abs() <= bound)) return false;
    return true;
}

// ---------------------------------------------------------------- cache

namespace cache {

inline std::string env_dir() {
    const char* e = std::getenv("KLOOST_CACHE_DIR");
    return e ? std::string(e) : std::string();
}

inline std::filesystem::path file_for(const std::filesystem::path& dir, int nplus1, std::int64_t p, int r) {
    return dir / ("kl" + std::to_string(nplus1) + "_p" + std::to_string(p) + "_r" + std::to_string(r) + ".klt");
}

inline void put_u32(std::ostream& o, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    o.write(reinterpret_cast<char*>(b), 4);
}
inline std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw Error(Errc::CacheError, "truncated cache file");
    return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}
inline void put_i64(std::ostream& o, std::int64_t v) {
    auto u = static_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    o.write(reinterpret_cast<char*>(b), 8);
}
inline std::int64_t get_i64(std::istream& in) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) throw Error(Errc::CacheError, "truncated cache file");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return static_cast<std::int64_t>(u);
}
// KLT2 coefficient: u8 sign, u32 byte count, magnitude bytes little-endian
inline void put_big(std::ostream& o, const BigInt& v) {
    std::size_t count = 0;
    std::vector<unsigned char> bytes((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8 + 1);
    mpz_export(bytes.data(), &count, -1, 1, 0, 0, v.get_mpz_t());
    char s = sgn(v) < 0 ? 1 : 0;
    o.write(&s, 1);
    put_u32(o, static_cast<std::uint32_t>(count));
    o.write(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
}
inline BigInt get_big(std::istream& in) {
    char s;
    if (!in.read(&s, 1)) throw Error(Errc::CacheError, "truncated cache file");
    std::uint32_t count = get_u32(in);
    std::vector<unsigned char> bytes(count);
    if (count && !in.read(reinterpret_cast<char*>(bytes.data()), count))
        throw Error(Errc::CacheError, "truncated cache file");
    BigInt v;
    if (count) mpz_import(v.get_mpz_t(), count, -1, 1, 0, 0, bytes.data());
    return s ? BigInt(-v) : v;
}

inline void save(const KlTable& t, const std::filesystem::path& dir) {
    if (t.char_mult != 1) throw Error(Errc::CacheError, "only the default character is cached");
    std::filesystem::create_directories(dir);
    bool wide = false;
    for (const auto& v : t.values)
        for (const auto& c : v.num())
            if (!c.fits_slong_p()) wide = true;
    auto target = file_for(dir, t.nplus1, t.p, t.r);
    auto tmp = target;
    tmp += ".tmp" + std::to_string(::getpid()) + "_" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
        if (!o) throw Error(Errc::CacheError, "cannot write " + tmp.string());
        o.write(wide ? "KLT2" : "KLT1", 4);
        put_u32(o, t.nplus1);
        put_u32(o, static_cast<std::uint32_t>(t.p));
        put_u32(o, static_cast<std::uint32_t>(t.r));
        put_u32(o, static_cast<std::uint32_t>(t.generator()));
        for (const auto& v : t.values)
            for (const auto& c : v.num()) {
                if (wide)
                    put_big(o, c);
                else
                    put_i64(o, c.get_si());
            }
        if (!o) throw Error(Errc::CacheError, "write failed");
    }
    std::filesystem::rename(tmp, target);
}

inline std::unique_ptr<KlTable> load(const std::filesystem::path& dir, int nplus1, std::int64_t p, int r) {
    auto path = file_for(dir, nplus1, p, r);
    std::ifstream in(path, std::ios::binary);
    if (!in) return nullptr;
    char magic[4];
    if (!in.read(magic, 4)) throw Error(Errc::CacheError, "truncated cache file");
    std::string m(magic, 4);
    if (m != "KLT1" && m != "KLT2") throw Error(Errc::CacheError, "bad magic in " + path.string());
    bool wide = m == "KLT2";
    auto t = std::make_unique<KlTable>();
    t->nplus1 = static_cast<int>(get_u32(in));
    t->p = get_u32(in);
    t->r = static_cast<int>(get_u32(in));
    std::int64_t gen = get_u32(in);
    if (t->nplus1 != nplus1 || t->p != p || t->r != r) throw Error(Errc::CacheError, "header mismatch");
    t->index = FieldIndex::build(p, r);
    if (gen != t->index->generator) throw Error(Errc::CacheError, "generator mismatch");
    t->q = t->index->q();
    t->backend = Backend::convolution;
    int phi = static_cast<int>(p - 1);
    t->values.reserve(t->q - 1);
    for (std::int64_t i = 0; i < t->q - 1; ++i) {
        std::vector<BigInt> num(phi);
        for (int k = 0; k < phi; ++k) num[k] = wide ? get_big(in) : BigInt(static_cast<long>(get_i64(in)));
        t->values.push_back(CycElem::from_basis(static_cast<int>(p), std::move(num)));
    }
    return t;
}

} // namespace cache

// Memoizing source of tables, optionally backed by the disk cache.
class TableStore {
public:
    explicit TableStore(std::string cache_dir = cache::env_dir()) : dir_(std::move(cache_dir)) {}

    std::shared_ptr<const KlTable> get(int nplus1, std::int64_t p, int r, std::int64_t char_mult = 1) {
        auto key = std::make_tuple(nplus1, p, r, char_mult);
        {
            std::lock_guard<std::mutex> lock(mu_);
            if (auto it = mem_.find(key); it != mem_.end()) return it->second;
        }
        std::shared_ptr<const KlTable> t;
        if (!dir_.empty() && char_mult == 1) {
            try {
                if (auto loaded = cache::load(dir_, nplus1, p, r)) {
                    t = std::move(loaded);
                    ++hits_;
                }
            } catch (const Error&) {
                // unreadable cache entry: rebuild and overwrite
            }
        }
        if (!t) {
            auto built = std::make_shared<KlTable>(kl_table(nplus1, p, r, Backend::convolution, char_mult));
            if (!dir_.empty() && char_mult == 1) cache::save(*built, dir_);
            t = built;
        }
        std::lock_guard<std::mutex> lock(mu_);
        mem_.emplace(key, t);
        return t;
    }
    void clear_memory() {
        std::lock_guard<std::mutex> lock(mu_);
        mem_.clear();
    }
    const std::string& dir() const { return dir_; }
    int disk_hits() const { return hits_; }

private:
    std::string dir_;
    std::mutex mu_;
    std::map<std::tuple<int, std::int64_t, int, std::int64_t>, std::shared_ptr<const KlTable>> mem_;
    std::atomic<int> hits_ = 0;
};

} // namespace kloost
