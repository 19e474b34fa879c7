// kloost: command line front end for the Kloosterman moment engine.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "kloost/evans.hpp"
#include "kloost/invdims.hpp"
#include "kloost/monodromy.hpp"
#include "kloost/residue.hpp"

#ifndef KLOOST_DATA_DIR
#define KLOOST_DATA_DIR "data"
#endif

using json = nlohmann::json;
using namespace kloost;

namespace {

constexpr int kSchemaVersion = 1;

enum Exit { ok = 0, verify_failed = 1, usage = 2, scale = 3 };

struct RunConfig {
    std::string cache_dir = cache::env_dir();
    std::string threads = "auto";
    std::string format = "json";
    long precision_bits = 128;
    bool force = false;
};

unsigned thread_count(const RunConfig& cfg) {
    if (cfg.threads == "auto") return std::max(1u, std::thread::hardware_concurrency());
    int n = 0;
    try {
        n = std::stoi(cfg.threads);
    } catch (const std::exception&) {
    }
    if (n < 1) throw Error(Errc::InvalidArgument, "--threads must be a positive integer or 'auto'");
    return static_cast<unsigned>(n);
}

// first exception wins and is rethrown on the calling thread
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next = 0;
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                    next = n;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

json big(const BigInt& v) {
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
}

json rat(const BigRat& v) {
    if (v.get_den() == 1) return big(v.get_num());
    return v.get_str();
}

std::string csv_field(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// rows: array of flat objects sharing keys
void emit_rows(const std::string& fmt, const json& rows, std::ostream& os) {
    if (rows.empty()) return;
    std::vector<std::string> keys;
    for (auto it = rows[0].begin(); it != rows[0].end(); ++it) keys.push_back(it.key());
    if (fmt == "csv") {
        for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_field(keys[i]);
        os << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_field(r.value(keys[i], json()));
            os << "\n";
        }
    } else {
        for (const auto& r : rows) {
            bool first = true;
            for (const auto& k : keys) {
                os << (first ? "" : "  ") << k << "=" << (r[k].is_string() ? r[k].get<std::string>() : r[k].dump());
                first = false;
            }
            os << "\n";
        }
    }
}

void emit(const RunConfig& cfg, json report) {
    report["schema_version"] = kSchemaVersion;
    if (cfg.format == "json") {
        std::cout << report.dump() << "\n";
        return;
    }
    json flat = json::object();
    for (auto it = report.begin(); it != report.end(); ++it)
        flat[it.key()] = it.value().is_structured() ? json(it.value().dump()) : it.value();
    emit_rows(cfg.format, json::array({flat}), std::cout);
}

std::vector<int> parse_lambda(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size() || v < 0) throw Error(Errc::InvalidArgument, "bad lambda entry: " + tok);
        out.push_back(v);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos) {
        std::int64_t v = std::stoll(s);
        return {v, v};
    }
    return {std::stoll(s.substr(0, dots)), std::stoll(s.substr(dots + 2))};
}

const EvansIdentity* identity_for(int nplus1, const std::vector<int>& lambda) {
    for (const auto& e : evans_registry())
        if (e.nplus1 == nplus1 && e.lambda == lambda) return &e;
    return nullptr;
}

void prepare_cache(const RunConfig& cfg) {
    if (cfg.cache_dir.empty()) return;
    std::filesystem::create_directories(cfg.cache_dir);
    auto probe = std::filesystem::path(cfg.cache_dir) / ".probe";
    std::FILE* f = std::fopen(probe.c_str(), "wb");
    if (!f) throw Error(Errc::CacheError, "cache dir not writable: " + cfg.cache_dir);
    std::fclose(f);
    std::filesystem::remove(probe);
}

// ---- moment ----

struct MomentArgs {
    int nplus1 = 2;
    std::string lambda = "1";
    std::int64_t p = 2;
    int tower = 0;
    std::string engine = "auto";
};

int cmd_moment(const RunConfig& cfg, const MomentArgs& a) {
    prepare_cache(cfg);
    TableStore store(cfg.cache_dir);
    MomentOptions opt;
    opt.store = &store;
    opt.force = cfg.force;
    if (a.engine == "exact") opt.engine = Engine::exact;
    else if (a.engine == "residue") opt.engine = Engine::residue;
    auto lam = parse_lambda(a.lambda);
    auto rep = moment(a.nplus1, HighestWeight(lam), a.p, opt);
    json out;
    out["nplus1"] = a.nplus1;
    out["lambda"] = lam;
    out["p"] = a.p;
    out["moment"] = big(rep.moment);
    out["a_value"] = nullptr;
    if (const auto* e = identity_for(a.nplus1, lam); e && !e->bad.count(a.p))
        out["a_value"] = rat(a_value_from_moment(*e, a.p, rep.moment));
    if (a.tower > 0) {
        json tw = json::array();
        for (const auto& m : moment_tower(a.nplus1, HighestWeight(lam), a.p, a.tower, opt)) tw.push_back(big(m));
        out["tower"] = tw;
    }
    emit(cfg, out);
    return ok;
}

// ---- kl ----

int cmd_kl(const RunConfig& cfg, int nplus1, std::int64_t p, int r, std::int64_t a_code) {
    prepare_cache(cfg);
    TableStore store(cfg.cache_dir);
    auto t = store.get(nplus1, p, r);
    ExtElem a = t->index->field.from_code(a_code);
    const CycElem& v = t->at(a);
    json out;
    out["nplus1"] = nplus1;
    out["p"] = p;
    out["r"] = r;
    out["a"] = a_code;
    if (v.is_rational()) {
        out["value"] = rat(cyc_to_rational(v));
    } else {
        json c = json::array();
        for (int i = 0; i < v.phi(); ++i) c.push_back(rat(v.coeff(i)));
        out["value"] = c;
    }
    emit(cfg, out);
    return ok;
}

// ---- verify ----

int cmd_verify(const RunConfig& cfg, const std::string& id, const std::string& range, const std::string& fixtures_path) {
    prepare_cache(cfg);
    auto [lo, hi] = parse_range(range);
    auto primes = lo <= hi ? primes_in(std::max<std::int64_t>(lo, 2), hi) : std::vector<std::int64_t>{};
    FixtureTable fx = load_fixtures(fixtures_path);
    TableStore store(cfg.cache_dir);
    MomentOptions opt;
    opt.store = &store;
    opt.force = cfg.force;
    // one task per (identity, prime); rows are filled per task and emitted in task order
    struct Task {
        const EvansIdentity* e; // null for the cross identity
        std::int64_t p;
    };
    std::vector<Task> tasks;
    auto add_identity = [&](const EvansIdentity& e) {
        for (auto p : primes)
            if (!e.bad.count(p)) tasks.push_back({&e, p});
    };
    auto add_cross = [&] {
        for (auto p : primes)
            if (p >= 5) tasks.push_back({nullptr, p});
    };
    if (id == "all") {
        for (const auto& e : evans_registry()) add_identity(e);
        add_cross();
    } else if (id == "cross") {
        add_cross();
    } else {
        add_identity(evans_identity(id));
    }
    std::vector<json> results(tasks.size());
    auto run = [&](std::size_t i) {
        json out = json::array();
        auto record = [&](const std::string& ident, std::int64_t p, const std::string& check, bool good, json detail) {
            out.push_back({{"id", ident}, {"p", p}, {"check", check}, {"pass", good}, {"detail", detail}});
        };
        auto [e, p] = tasks[i];
        if (!e) {
            auto r = cross_identity_values(p, opt);
            record("cross", p, "cross_identity", r.holds(), big(r.lhs));
        } else {
            BigInt m = evans_moment(*e, p, opt);
            BigRat a = a_value_from_moment(*e, p, m);
            if (!e->chi_modulus) record(e->name, p, "integral", a.get_den() == 1, rat(a));
            record(e->name, p, "ramanujan", ramanujan_ok(*e, p, a), rat(a));
            auto lf = local_factor_from_moment(*e, p, m);
            double dev = purity_defect(lf, p, e->weight());
            record(e->name, p, "purity", dev <= 1e-6, dev);
            if (auto it = fx.find(e->name); it != fx.end())
                if (auto jt = it->second.find(p); jt != it->second.end())
                    record(e->name, p, "fixture", a == BigRat(jt->second), rat(a));
        }
        results[i] = std::move(out);
    };
    parallel_for(tasks.size(), thread_count(cfg), run);
    json rows = json::array();
    int pass = 0, fail = 0;
    for (auto& r : results)
        for (auto& row : r) {
            (row["pass"].get<bool>() ? pass : fail)++;
            rows.push_back(std::move(row));
        }
    if (cfg.format == "json") {
        json out{{"id", id}, {"primes", range}, {"checks", rows}, {"passed", pass}, {"failed", fail}};
        emit(cfg, out);
    } else {
        emit_rows(cfg.format, rows, std::cout);
        if (cfg.format == "text") std::cout << "passed=" << pass << "  failed=" << fail << "\n";
    }
    return fail ? verify_failed : ok;
}

// ---- dims / swan / hodge ----

int cmd_dims(const RunConfig& cfg, int nplus1, int k, std::int64_t p, const std::string& sign_rule) {
    SignRule rule = sign_rule == "m_index" ? SignRule::m_index : SignRule::monodromy;
    json out{{"nplus1", nplus1}, {"k", k}};
    if (p == 0) {
        out["dim_motive"] = big(dim_motive(nplus1, k, rule));
    } else {
        auto b = dim_mid_breakdown(nplus1, k, p, rule);
        out["p"] = p;
        out["swan"] = rat(b.swan);
        out["inv0"] = big(b.inv0);
        out["inv_inf"] = b.inv_inf;
        out["delta"] = b.delta;
        out["dim_mid"] = big(b.dim);
    }
    emit(cfg, out);
    return ok;
}

int cmd_swan(const RunConfig& cfg, int nplus1, int k, std::int64_t p) {
    require_prime(p);
    BigRat s = (nplus1 == 3 && p == 3) ? p3_swan(k) : swan_infinity(nplus1, k, p);
    emit(cfg, {{"nplus1", nplus1}, {"k", k}, {"p", p}, {"swan", rat(s)}});
    return ok;
}

int cmd_hodge(const RunConfig& cfg, int nplus1, int k, const std::string& lambda) {
    std::vector<int> lam = lambda.empty() ? std::vector<int>{k} : parse_lambda(lambda);
    auto h = hodge_numbers(nplus1, HighestWeight(lam));
    json m = json::object();
    for (const auto& [p, v] : h) m[std::to_string(p)] = big(v);
    emit(cfg, {{"nplus1", nplus1}, {"lambda", lam}, {"hodge", m}, {"total", big(hodge_total(h))}});
    return ok;
}

// ---- molien ----

std::vector<CycMatrix> molien_input(const std::string& group) {
    if (group == "g108") return build_group(GroupName::G108).elements;
    if (group == "g216") return build_group(GroupName::G216).elements;
    if (group == "st27") return build_group(GroupName::ST27).elements;
    if (group == "trivial") return {CycMatrix::identity()};
    if (group == "coset") return complement(build_group(GroupName::G216), build_group(GroupName::G108));
    throw Error(Errc::InvalidArgument, "unknown group: " + group);
}

json molien_report(const std::string& group, int terms) {
    RatFunc f = molien(molien_input(group));
    json num = json::array(), den = json::array(), ser = json::array();
    for (const auto& c : f.num().coeffs()) num.push_back(rat(c));
    for (const auto& c : f.den().coeffs()) den.push_back(rat(c));
    for (const auto& c : f.series(terms)) ser.push_back(rat(c));
    return {{"group", group}, {"numerator", num}, {"denominator", den}, {"series", ser}};
}

int cmd_molien(const RunConfig& cfg, const std::string& group, int terms) {
    emit(cfg, molien_report(group, terms));
    return ok;
}

// ---- bench ----

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_bench(const RunConfig& cfg, const std::string& scenario, int reps) {
    json rows = json::array();
    bool agree = true;
    if (scenario == "kl_naive_vs_conv") {
        for (int rep = 0; rep < reps; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            auto naive = kl_table(3, 101, 1, Backend::naive);
            double tn = seconds_since(t0);
            t0 = std::chrono::steady_clock::now();
            auto conv = kl_table(3, 101, 1, Backend::convolution);
            double tc = seconds_since(t0);
            bool eq = naive.values == conv.values;
            agree = agree && eq;
            rows.push_back({{"scenario", scenario}, {"rep", rep}, {"naive_s", tn}, {"conv_s", tc},
                            {"speedup", tc > 0 ? tn / tc : 0.0}, {"equal", eq}});
        }
    } else if (scenario == "moment_grid") {
        const auto& e = evans_identity(EvansId::sym4kl3);
        for (int rep = 0; rep < reps; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            BigInt checksum = 0;
            int count = 0;
            for (auto p : primes_in(3, 50)) {
                if (e.bad.count(p)) continue;
                checksum += evans_moment(e, p);
                ++count;
            }
            rows.push_back({{"scenario", scenario}, {"rep", rep}, {"primes", count}, {"seconds", seconds_since(t0)},
                            {"checksum", big(checksum)}});
        }
    } else if (scenario == "molien") {
        std::string first;
        for (int rep = 0; rep < reps; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            std::string dump = molien_report("g108", 13).dump() + molien_report("g216", 13).dump();
            double t = seconds_since(t0);
            if (rep == 0) first = dump;
            bool same = dump == first;
            agree = agree && same;
            rows.push_back({{"scenario", scenario}, {"rep", rep}, {"seconds", t}, {"stable", same}});
        }
    } else {
        throw Error(Errc::InvalidArgument, "unknown scenario: " + scenario);
    }
    emit_rows(cfg.format == "csv" ? "csv" : "text", rows, std::cout);
    return agree ? ok : verify_failed;
}

int exit_for(const Error& e) {
    switch (e.code()) {
        case Errc::DeskScaleExceeded: return scale;
        case Errc::NonPrime:
        case Errc::InvalidArgument:
        case Errc::OutOfScopePair:
        case Errc::BadPrime:
        case Errc::CharDividesOrder:
        case Errc::TooManyRows:
        case Errc::MissingTower:
        case Errc::ZeroPoint: return usage;
        default: return verify_failed;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kloosterman sums, moments and their local invariants"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_option("--cache-dir", cfg.cache_dir, "table cache directory (default $KLOOST_CACHE_DIR)");
    app.add_option("--threads", cfg.threads, "worker threads or 'auto'");
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--precision-bits", cfg.precision_bits, "MPFR precision for numeric checks");
    app.add_flag("--force", cfg.force, "lift desk-scale guards");

    MomentArgs ma;
    auto* mom = app.add_subcommand("moment", "moment m^lambda(p) of Kl_{n+1}");
    mom->add_option("--n", ma.nplus1, "n+1")->required()->check(CLI::Range(2, 64));
    mom->add_option("--lambda", ma.lambda, "comma separated highest weight")->required();
    mom->add_option("--p", ma.p, "prime")->required();
    mom->add_option("--tower", ma.tower, "also report m(p^r) for r = 1..R");
    mom->add_option("--engine", ma.engine)->check(CLI::IsMember({"auto", "exact", "residue"}));

    int kn = 2, kr = 1;
    std::int64_t kp = 2, ka = 1;
    auto* kl = app.add_subcommand("kl", "single Kloosterman sum Kl_{n+1}(a; p^r)");
    kl->add_option("--n", kn, "n+1")->required();
    kl->add_option("--p", kp)->required();
    kl->add_option("--r", kr);
    kl->add_option("--a", ka, "point, by field code");

    std::string vid = "all", vrange = "5..50", vfix = std::string(KLOOST_DATA_DIR) + "/evans_fixtures.json";
    auto* ver = app.add_subcommand("verify", "check Evans-type identities");
    ver->add_option("--id", vid, "identity id, 'cross' or 'all'");
    ver->add_option("--primes", vrange, "prime range lo..hi");
    ver->add_option("--fixtures", vfix);

    int dn = 3, dk = 1;
    std::int64_t dp = 0;
    std::string dsign = "monodromy";
    auto* dims = app.add_subcommand("dims", "middle cohomology dimension (motive dimension without --p)");
    dims->add_option("--n", dn)->required();
    dims->add_option("--k", dk)->required();
    dims->add_option("--p", dp);
    dims->add_option("--sign-rule", dsign)->check(CLI::IsMember({"monodromy", "m_index"}));

    int sn = 3, sk = 1;
    std::int64_t sp = 2;
    auto* sw = app.add_subcommand("swan", "Swan conductor at infinity");
    sw->add_option("--n", sn)->required();
    sw->add_option("--k", sk)->required();
    sw->add_option("--p", sp)->required();

    int hn = 3, hk = 1;
    std::string hl;
    auto* hod = app.add_subcommand("hodge", "Hodge numbers of the moment motive");
    hod->add_option("--n", hn)->required();
    hod->add_option("--k", hk);
    hod->add_option("--lambda", hl);

    std::string mg = "g108";
    int mt = 8;
    auto* mol = app.add_subcommand("molien", "Molien series of the p = 3 monodromy groups");
    mol->add_option("--group", mg)->check(CLI::IsMember({"g108", "g216", "st27", "coset", "trivial"}));
    mol->add_option("--terms", mt)->check(CLI::PositiveNumber);

    std::string bs = "kl_naive_vs_conv";
    int br = 1;
    auto* bench = app.add_subcommand("bench", "timing harness");
    bench->add_option("--scenario", bs)->check(CLI::IsMember({"kl_naive_vs_conv", "moment_grid", "molien"}));
    bench->add_option("--reps", br)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        if (*mom) return cmd_moment(cfg, ma);
        if (*kl) return cmd_kl(cfg, kn, kp, kr, ka);
        if (*ver) return cmd_verify(cfg, vid, vrange, vfix);
        if (*dims) return cmd_dims(cfg, dn, dk, dp, dsign);
        if (*sw) return cmd_swan(cfg, sn, sk, sp);
        if (*hod) return cmd_hodge(cfg, hn, hk, hl);
        if (*mol) return cmd_molien(cfg, mg, mt);
        if (*bench) return cmd_bench(cfg, bs, br);
    } catch (const Error& e) {
        std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
        return exit_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    return usage;
}
