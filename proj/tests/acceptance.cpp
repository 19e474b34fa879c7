// Acceptance run: one PASS/FAIL line per criterion.
// Exit status is nonzero only for failures that are not listed in
// data/known_discrepancies.json.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "kloost/evans.hpp"
#include "kloost/invdims.hpp"
#include "kloost/monodromy.hpp"
#include "kloost/residue.hpp"

using namespace kloost;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Line {
    int id;
    bool pass;
    bool documented = false; // failure explained in known_discrepancies.json
    std::string text;
};

std::vector<Line> lines;

void report(int id, bool pass, const std::string& text, bool documented = false) {
    lines.push_back({id, pass, documented, text});
    std::cout << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << text << std::endl;
}

nlohmann::json known() {
    std::ifstream in(std::string(KLOOST_DATA_DIR) + "/known_discrepancies.json");
    return in ? nlohmann::json::parse(in) : nlohmann::json::object();
}

std::string str(const BigRat& v) { return v.get_str(); }

BigInt exact_moment(int nplus1, HighestWeight hw, std::int64_t p) {
    MomentOptions o;
    o.engine = Engine::exact;
    return moment(nplus1, hw, p, o).moment;
}

void criterion1(const nlohmann::json& kd) {
    auto t0 = Clock::now();
    std::vector<std::string> bad;
    bool undocumented = false;
    int total = 0;
    auto moment_check = [&](const std::string& label, int nplus1, HighestWeight hw, std::int64_t p, long want) {
        ++total;
        BigInt got = exact_moment(nplus1, hw, p);
        if (got != want) {
            bad.push_back(label + " expected " + std::to_string(want) + " computed " + got.get_str());
            if (!kd.contains(label)) undocumented = true;
        }
    };
    auto a_check = [&](const char* id, std::int64_t p, long want) {
        ++total;
        BigRat got = a_value(evans_identity(id), p);
        if (got != want) {
            std::string label = std::string("a:") + id + "(" + std::to_string(p) + ")";
            bad.push_back(label + " expected " + std::to_string(want) + " computed " + str(got));
            if (!kd.contains(label)) undocumented = true;
        }
    };
    moment_check("m3^3(3)", 3, {3}, 3, -10);
    moment_check("m3^6(3)", 3, {6}, 3, -820);
    a_check("sym4kl3", 3, -2);
    a_check("sym4kl3", 5, -12);
    moment_check("m4^3(2)", 4, {3}, 2, 3);
    a_check("sym3kl4", 2, -1);
    a_check("sym4kl4", 3, -26);
    a_check("sym4kl4", 7, -22);
    moment_check("m5^3(2)", 5, {3}, 2, -61);
    moment_check("m5^3(5)", 5, {3}, 5, 3901);
    a_check("sym3kl5", 2, -1);
    a_check("sym3kl5", 5, -4);
    std::vector<std::int64_t> p21{5, 11, 13, 17, 19, 23};
    std::vector<long> a21{0, 0, -4, 6, 2, 0};
    for (std::size_t i = 0; i < p21.size(); ++i) a_check("kl3_21", p21[i], a21[i]);
    std::vector<std::int64_t> p22{5, 7, 11, 13, 17, 19, 23};
    std::vector<long> a22{6, -16, 12, 38, -126, 20, 168};
    for (std::size_t i = 0; i < p22.size(); ++i) a_check("kl3_22", p22[i], a22[i]);
    double t = since(t0);
    bool in_time = t < 60;
    std::ostringstream os;
    os << "reference tables: " << (total - static_cast<int>(bad.size())) << "/" << total << " values match";
    for (const auto& b : bad) os << "; " << b;
    if (!bad.empty() && !undocumented) os << " (documented discrepancy)";
    os << "; " << t << " s (budget 60 s)";
    report(1, bad.empty() && in_time, os.str(), !bad.empty() && !undocumented && in_time);
}

void criterion2() {
    auto F2 = ext_field(2, 1), F4 = ext_field(2, 2);
    BigRat k2 = cyc_to_rational(kl_table(4, 2, 1).at(F2.one()));
    BigRat k4 = cyc_to_rational(kl_table(4, 2, 2).at(F4.one()));
    BigRat n4 = cyc_to_rational(kl_naive(4, 2, 2, F4.one()));
    report(2, k2 == 1 && k4 == 11 && n4 == 11,
           "Kl4(1;2) = " + str(k2) + ", Kl4(1;4) = " + str(k4) + " (naive " + str(n4) + ")");
}

void criterion3() {
    auto t0 = Clock::now();
    RatFunc P = molien(build_group(GroupName::G108));
    RatFunc Pt = molien(build_group(GroupName::G216));
    bool eqP = P == molien_P(), eqPt = Pt == molien_Ptilde();
    bool eqQ = (Pt.scaled(2) - P) == molien_Q();
    BigRat c6 = P.series(7)[6], ct6 = Pt.series(7)[6];
    double t = since(t0);
    std::ostringstream os;
    os << "Molien: G108 " << (eqP ? "=" : "!=") << " P, G216 " << (eqPt ? "=" : "!=") << " P~, 2P~-P "
       << (eqQ ? "=" : "!=") << " Q; [x^6] = " << c6 << ", " << ct6 << "; " << t << " s (budget 10 s)";
    report(3, eqP && eqPt && eqQ && c6 == 2 && ct6 == 1 && t < 10, os.str());
}

void criterion4() {
    BigRat s3 = p3_swan(3), s6 = p3_swan(6);
    BigInt i0 = inv0_trace(3, 6, 3), d6 = dim_mid(3, 6, 3), d4 = dim_mid(3, 4, 3);
    std::ostringstream os;
    os << "p=3 chain: swan(3)=" << s3 << " swan(6)=" << s6 << " inv0_trace(3,6,3)=" << i0 << " dim_mid(3,6,3)=" << d6
       << " dim_mid(3,4,3)=" << d4;
    report(4, s3 == 2 && s6 == 6 && i0 == 820 && d6 == 0 && d4 == 2, os.str());
}

void criterion5() {
    struct Case {
        int nplus1, k;
        HodgeMap want;
    };
    std::vector<Case> cases = {{3, 4, {{3, 1}, {6, 1}}}, {4, 3, {{4, 1}, {6, 1}}}, {5, 3, {{5, 1}, {8, 1}}}};
    bool ok = true;
    std::ostringstream os;
    os << "dims/Hodge:";
    for (const auto& c : cases) {
        BigInt dm = dim_motive(c.nplus1, c.k);
        auto h = hodge_numbers(c.nplus1, {c.k});
        bool good = dm == 2 && hodge_total(h) == 2 && h == c.want;
        ok = ok && good;
        os << " (" << c.nplus1 << "," << c.k << ") dim=" << dm << " hodge={";
        bool first = true;
        for (const auto& [p, v] : h) {
            os << (first ? "" : ",") << p << ":" << v;
            first = false;
        }
        os << "}";
    }
    report(5, ok, os.str());
}

void criterion6() {
    auto t0 = Clock::now();
    int count = 0;
    std::vector<std::int64_t> failed;
    for (auto p : primes_in(5, 199)) {
        ++count;
        if (!cross_identity(p)) failed.push_back(p);
    }
    double t = since(t0);
    std::ostringstream os;
    os << "cross identity at " << count - static_cast<int>(failed.size()) << "/" << count << " primes in [5,199]";
    for (auto p : failed) os << " fail@" << p;
    os << "; " << t << " s (budget 600 s)";
    report(6, failed.empty() && t < 600, os.str());
}

void criterion7() {
    auto t0 = Clock::now();
    std::ostringstream os;
    bool ok = true;

    // (a) + (b)
    int tables = 0, values = 0;
    bool eq = true, weil = true;
    std::vector<std::pair<int, int>> fields{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {11, 1}, {13, 1}};
    for (int nplus1 = 2; nplus1 <= 5; ++nplus1)
        for (auto [p, r] : fields) {
            auto a = kl_table(nplus1, p, r, Backend::naive);
            auto b = kl_table(nplus1, p, r, Backend::convolution);
            eq = eq && a.values == b.values;
            weil = weil && weil_bound_holds(b, 128, 1e-6);
            ++tables;
            values += static_cast<int>(b.values.size());
        }
    os << "(a) " << (eq ? "ok" : "MISMATCH") << " on " << tables << " tables; (b) Weil " << (weil ? "ok" : "VIOLATED")
       << " on " << values << " values";
    ok = ok && eq && weil;

    // (c) + (d)
    int checks = 0, bad_int = 0, bad_ram = 0, bad_pure = 0;
    double worst = 0;
    for (const auto& e : evans_registry())
        for (auto p : primes_in(2, 199)) {
            if (e.bad.count(p)) continue;
            BigInt m = evans_moment(e, p);
            BigRat a = a_value_from_moment(e, p, m);
            if (a.get_den() != 1) ++bad_int;
            if (!ramanujan_ok(e, p, a)) ++bad_ram;
            double dev = purity_defect(local_factor_from_moment(e, p, m), p, e.weight());
            worst = std::max(worst, dev);
            if (dev > 1e-6) ++bad_pure;
            ++checks;
        }
    os << "; (c) " << checks << " identity/prime pairs, non-integral " << bad_int << ", Ramanujan violations " << bad_ram
       << "; (d) purity violations " << bad_pure << " (max defect " << worst << ")";
    ok = ok && !bad_int && !bad_ram && !bad_pure;

    // (e)
    bool indep = true;
    for (auto [nplus1, p] : std::vector<std::pair<int, std::int64_t>>{{3, 7}, {4, 5}})
        for (HighestWeight hw : {HighestWeight{2}, HighestWeight{3}, HighestWeight{4}, HighestWeight{2, 1}}) {
            BigInt base = exact_moment(nplus1, hw, p);
            for (std::int64_t c : {2, 3}) {
                MomentOptions o;
                o.engine = Engine::exact;
                o.char_mult = c;
                indep = indep && moment(nplus1, hw, p, o).moment == base;
            }
        }
    os << "; (e) character independence " << (indep ? "ok" : "BROKEN");
    ok = ok && indep;

    // (f)
    int swans = 0, bad_swan = 0;
    for (int nplus1 = 2; nplus1 <= 5; ++nplus1)
        for (int k = 1; k <= 8; ++k)
            for (auto p : primes_in(2, 31)) {
                if (nplus1 % p == 0) continue;
                ++swans;
                try {
                    swan_infinity(nplus1, k, p);
                } catch (const Error&) {
                    ++bad_swan;
                }
            }
    os << "; (f) " << swans - bad_swan << "/" << swans << " Swan conductors integral";
    ok = ok && !bad_swan;
    os << "; " << since(t0) << " s";
    report(7, ok, os.str());
}

void criterion8() {
    std::ostringstream os;
    int passed = 0;
    // level 6, weight 4
    {
        auto f = eta_product({{{1, 2}, {2, 2}, {3, 2}, {6, 2}}}, 9409);
        bool good = f[0] == 1 && hecke_check(f, 4, {5, 7, 11});
        for (auto p : primes_in(5, 97)) good = good && BigRat(f[p - 1]) == a_value(evans_identity("kl2_k6"), p);
        os << "6.4 candidate [(1,2),(2,2),(3,2),(6,2)] " << (good ? "accepted" : "rejected");
        if (good) ++passed;
    }
    // level 14, weight 2: two candidates
    bool level14 = false;
    for (const auto& ep : {EtaProduct{{{1, 2}, {2, 2}, {7, 2}, {14, 2}}}, EtaProduct{{{1, 1}, {2, 1}, {7, 1}, {14, 1}}}}) {
        auto f = eta_product(ep, 529);
        bool good = f[0] == 1 && hecke_check(f, 2, {3, 5, 11});
        if (good)
            for (auto p : primes_in(5, 23))
                if (!evans_identity("kl3_21").bad.count(p))
                    good = good && BigRat(f[p - 1]) == a_value(evans_identity("kl3_21"), p);
        os << "; 14.2 candidate [";
        for (std::size_t i = 0; i < ep.factors.size(); ++i)
            os << (i ? "," : "") << "(" << ep.factors[i].first << "," << ep.factors[i].second << ")";
        os << "] " << (good ? "accepted" : "rejected");
        level14 = level14 || good;
    }
    if (level14) ++passed;
    report(8, passed == 2, os.str());
}

void criterion9() {
    std::ifstream in(std::string(KLOOST_DATA_DIR) + "/evans_fixtures.json");
    bool inert = false;
    if (in) {
        auto j = nlohmann::json::parse(in);
        inert = j.contains("hecke_elimination");
    }
    report(9, inert,
           "disclosure: potential automorphy, conductors of the compatible families and modular-symbols level "
           "elimination are not recomputed; covered by criteria 7-8 and the inert Hecke elimination fixtures (" +
               std::string(inert ? "present" : "missing") + ")");
}

} // namespace

int main() {
    auto kd = known();
    auto t0 = Clock::now();
    auto guard = [](int id, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(id, false, std::string("exception: ") + e.what());
        }
    };
    guard(1, [&] { criterion1(kd); });
    guard(2, criterion2);
    guard(3, criterion3);
    guard(4, criterion4);
    guard(5, criterion5);
    guard(6, criterion6);
    guard(7, criterion7);
    guard(8, criterion8);
    guard(9, criterion9);
    int fails = 0, documented = 0;
    for (const auto& l : lines) {
        if (l.pass) continue;
        (l.documented ? documented : fails)++;
    }
    std::cout << "summary: " << lines.size() - fails - documented << " pass, " << documented
              << " documented failure(s), " << fails << " undocumented failure(s); " << since(t0) << " s" << std::endl;
    return fails ? 1 : 0;
}
