// Acceptance run: one PASS/FAIL line per criterion. Reports land in <out>/run1; every
// criterion is then run again into <out>/run2 and the two trees are compared byte for byte.
#include <Eigen/Dense>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "plab/harness.hpp"

using namespace plab;
using namespace plab::harness;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    Report report;
};

std::string q(const Q& x) { return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator()); }

RunConfig base_config(const fs::path& dir) {
    RunConfig c;
    c.cache_dir = (dir / ".cache").string();
    c.out = dir.string();
    return c;
}

std::string fixed(double x, int prec = 3) {
    char b[64];
    std::snprintf(b, sizeof b, "%.*g", prec, x);
    return b;
}

// -- 1-5: local suites --------------------------------------------------------

Outcome c1_gauss(const fs::path& dir) {
    RunConfig c = base_config(dir);
    c.gauss_primes = {2, 3, 5, 7};
    c.c_max = 3;
    Report r = run_local(c, "gauss");
    const auto& o = r.outputs;
    return {r.status == "pass", std::to_string(o.at("checks").get<long>()) + " checks, " +
                                    std::to_string(o.at("failures").get<long>()) + " failures",
            r};
}

Outcome c2_rsI(const fs::path& dir) {
    RunConfig c = base_config(dir);
    c.local_primes = {2, 3, 5};
    c.local_N_lo = 2;
    c.local_N_hi = 6;
    c.angles = 5;
    Report r = run_local(c, "rs-I");
    double diff = 0, cdev = 0;
    int n0 = 0;
    for (const auto& run : r.outputs.at("runs")) {
        n0 = std::max(n0, run.at("N0").get<int>());
        for (const auto& row : run.at("rows")) {
            if (row.at("N").get<int>() < run.at("N0").get<int>()) continue;
            diff = std::max(diff, row.at("abs_diff").get<double>());
            cdev = std::max(cdev, std::abs(row.at("abs_c").get<double>() - 1));
        }
    }
    const bool ok = r.status == "pass" && diff < 1e-8 && cdev < 1e-10;
    return {ok, "15 runs, max N0 " + std::to_string(n0) + ", max |lhs-rhs| " + fixed(diff) +
                    ", max ||c|-1| " + fixed(cdev),
            r};
}

Outcome c3_rsIII(const fs::path& dir) {
    RunConfig c = base_config(dir);
    c.local_primes = {2, 3, 5};
    c.local_N_lo = 2;
    c.local_N_hi = 3;
    Report r = run_local(c, "rs-III");
    double odd = 0, two = 0;
    int odd_rows = 0;
    for (const auto& row : r.outputs.at("rows")) {
        if (!row.contains("difference")) continue;
        if (row.at("p").get<i64>() == 2) two = std::max(two, row.at("difference").get<double>());
        else {
            odd = std::max(odd, row.at("difference").get<double>());
            ++odd_rows;
        }
    }
    const bool ok = r.status == "expected-failure" && odd_rows == 4 && odd < 1e-8 && two > 1e-8;
    return {ok, "p in {3,5}: max |difference| " + fixed(odd) + "; p = 2 discrepancy " + fixed(two) +
                    " (expected-failure)",
            r};
}

Outcome c4_rsII(const fs::path& dir) {
    RunConfig c = base_config(dir);
    c.local_primes = {3};
    c.local_N_lo = 2;
    c.local_N_hi = 5;
    Report r = run_local(c, "rs-II");
    const auto& run = r.outputs.at("runs").at(0);
    const double s1 = run.at("sup_window").get<double>(), s2 = run.at("sup_doubled").get<double>();
    const bool ok = r.status == "pass" && std::isfinite(s2) && run.at("stable").get<bool>();
    return {ok, "sup " + fixed(s1, 10) + " (window -1..1), " + fixed(s2, 10) + " (doubled)", r};
}

Outcome c5_routes(const fs::path&, const Report& r2, const Report& r3, const Report& r4) {
    double d2 = r2.outputs.at("max_route_diff").get<double>(), d3 = 0,
           d4 = r4.outputs.at("runs").at(0).at("max_route_diff").get<double>();
    for (const auto& row : r3.outputs.at("rows"))
        if (row.contains("route_diff")) d3 = std::max(d3, row.at("route_diff").get<double>());
    Report r;
    r.id = "acceptance_routes";
    r.outputs = {{"rs-I", d2}, {"rs-III", d3}, {"rs-II", d4}, {"tol", 1e-8}};
    const double m = std::max({d2, d3, d4});
    r.status = m < 1e-8 ? "pass" : "fail";
    return {m < 1e-8, "max |direct - diagonal route| " + fixed(m) + " over criteria 2-4", r};
}

// -- 6-9: quaternion and path suites ------------------------------------------

i64 sigma1(i64 n) {
    i64 s = 0;
    for (i64 d = 1; d <= n; ++d)
        if (n % d == 0) s += d;
    return s;
}

// Hurwitz quaternions of norm n in doubled coordinates: A..D of one parity, sum of squares 4n
i64 hurwitz_count(i64 n) {
    const i64 t = 4 * n;
    const i64 b = i64(std::sqrt(double(t))) + 1;
    i64 cnt = 0;
    for (i64 a = -b; a <= b; ++a)
        for (i64 x = -b; x <= b; ++x)
            for (i64 y = -b; y <= b; ++y) {
                const i64 r = t - a * a - x * x - y * y;
                if (r < 0) continue;
                const i64 z = i64(std::llround(std::sqrt(double(r))));
                if (z * z != r) continue;
                const auto par = [&](i64 v) { return ((v % 2) + 2) % 2; };
                if (par(a) != par(x) || par(x) != par(y) || par(y) != par(z)) continue;
                cnt += z == 0 ? 1 : 2;
            }
    return cnt;
}

IntMatrix combo(const std::vector<IntMatrix>& B, i64 m, i64 n, i64 D) {
    const size_t h = B[1].size();
    IntMatrix S(h, std::vector<i64>(h, 0));
    for (i64 d = 1; d <= std::gcd(m, n); ++d) {
        if (m % d || n % d || std::gcd(d, D) != 1) continue;
        const auto& M = B[size_t(m * n / (d * d))];
        for (size_t i = 0; i < h; ++i)
            for (size_t j = 0; j < h; ++j) S[i][j] += d * M[i][j];
    }
    return S;
}

Outcome c6_brandt(const fs::path&) {
    Report r;
    r.id = "acceptance_brandt";
    json rows = json::array();
    bool ok = true;
    int mult_checks = 0;
    double worst = -1e300;
    for (i64 D : {2, 3, 5, 7, 11, 13}) {
        const auto R = MaximalOrder::for_prime(D);
        const auto G = ideal_class_graph(R, D == 2 ? 3 : 2);
        Q mass_units(0), mass_w(0);
        for (const auto& c : G.classes) {
            mass_units += Q(1, c.units);
            mass_w += Q(1, c.weight());
        }
        const bool mass_ok = mass_units == Q(D - 1, 24);
        const auto B = brandt_matrices(R, G.classes, 900);
        bool mult_ok = true;
        for (i64 m = 1; m <= 30; ++m)
            for (i64 n = 1; n <= 30; ++n) {
                if (std::gcd(m * n, D) != 1) continue;
                mult_ok = mult_ok && matmul(B[size_t(m)], B[size_t(n)]) == combo(B, m, n, D);
                ++mult_checks;
            }
        bool deg_ok = true, temp_ok = true;
        for (i64 l = 2; l <= 30; ++l) {
            if (!is_prime(l) || D % l == 0) continue;
            const auto& M = B[size_t(l)];
            const size_t h = M.size();
            for (size_t i = 0; i < h; ++i)
                deg_ok = deg_ok && std::accumulate(M[i].begin(), M[i].end(), i64(0)) == l + 1;
            Eigen::MatrixXd A(h, h);
            for (size_t i = 0; i < h; ++i)
                for (size_t j = 0; j < h; ++j) A(Eigen::Index(i), Eigen::Index(j)) = double(M[i][j]);
            Eigen::EigenSolver<Eigen::MatrixXd> es(A);
            int trivial = 0;
            for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
                const double a = std::abs(es.eigenvalues()[k]);
                if (std::abs(a - double(l + 1)) < 1e-9 && trivial == 0) {
                    ++trivial;
                    continue;
                }
                worst = std::max(worst, a - 2 * std::sqrt(double(l)));
                temp_ok = temp_ok && a <= 2 * std::sqrt(double(l)) + 1e-9;
            }
            temp_ok = temp_ok && trivial == 1;
        }
        bool norm_ok = true;
        if (D == 2)
            for (i64 n = 1; n <= 99; n += 2) {
                const i64 lib = i64(norm_enumerate(R, n).size());
                norm_ok = norm_ok && lib == hurwitz_count(n) && lib == 24 * sigma1(n);
            }
        ok = ok && mass_ok && mult_ok && deg_ok && temp_ok && norm_ok;
        rows.push_back({{"disc", D}, {"classes", G.h()}, {"sum_1_over_units", q(mass_units)},
                        {"sum_1_over_w", q(mass_w)}, {"mass_ok", mass_ok}, {"multiplicative", mult_ok},
                        {"degrees", deg_ok}, {"tempered", temp_ok}, {"norm_counts", norm_ok}});
    }
    r.outputs = {{"rows", rows}, {"multiplicativity_checks", mult_checks},
                 {"max_excess_over_ramanujan", worst}};
    r.status = ok ? "pass" : "fail";
    return {ok, "D in {2,3,5,7,11,13}: sum 1/#units = (D-1)/24 exact (sum 1/w = (D-1)/12, see ledger); " +
                    std::to_string(mult_checks) + " product identities; 24 sigma(n) for odd n <= 99",
            r};
}

Outcome c7_d73(const fs::path& dir) {
    RunConfig c = base_config(dir);
    c.discs = {73};
    Report all;
    all.id = "acceptance_d73";
    bool ok = true;
    std::string detail;
    json rows = json::array();
    // regression values frozen from the first computation
    const std::map<i64, std::pair<int, int>> frozen{{2, {6, 18}}, {3, {6, 24}}};
    for (i64 p : {2, 3}) {
        c.prime = p;
        Report r = run_graph(c);
        r.id += "_p" + std::to_string(p);
        r.write(dir);
        const auto& g = r.outputs.at("graphs").at(0);
        const int v = g.at("vertices").get<int>(), e = g.at("edges").get<int>();
        const bool reg = g.at("regular").get<bool>();
        const bool mass = g.at("mass_units").get<std::string>() == "3/1";
        const bool frz = frozen.at(p) == std::make_pair(v, e);
        ok = ok && reg && mass && frz && r.status == "pass";
        rows.push_back(g);
        detail += "p=" + std::to_string(p) + ": " + std::to_string(v) + " vertices, " + std::to_string(e) +
                  " edges, " + (reg ? std::to_string(p + 1) + "-regular" : "irregular") + "; ";
    }
    all.outputs = {{"graphs", rows}};
    all.status = ok ? "pass" : "fail";
    return {ok, detail + "sum 1/#units = 3 exact (sum 1/w = 6, see ledger)", all};
}

Outcome c8_returns(const fs::path& dir) {
    Report all;
    all.id = "acceptance_returns";
    int rows = 0, viol = 0;
    json runs = json::array();
    // (2, 2) is excluded: p | D leaves no splitting at p
    for (auto [D, p] : std::vector<std::pair<i64, i64>>{{2, 3}, {11, 2}, {11, 3}}) {
        RunConfig c = base_config(dir);
        c.discs = {D};
        c.prime = p;
        Report r = run_returns(c);
        rows += r.outputs.at("rows").get<int>();
        viol += r.outputs.at("violations").get<int>();
        for (auto& a : r.artifacts) a.name = "returns_D" + std::to_string(D) + "_p" + std::to_string(p) + ".csv";
        r.id += "_D" + std::to_string(D);
        r.write(dir);
        runs.push_back({{"disc", D}, {"p", p}, {"outputs", r.outputs}});
    }
    all.outputs = {{"runs", runs}};
    all.status = viol == 0 ? "pass" : "fail";
    return {viol == 0, std::to_string(rows) + " rows over (D,p) in {(2,3),(11,2),(11,3)}, " +
                           std::to_string(viol) + " violations",
            all};
}

bool commute(const IntMatrix& a, const IntMatrix& b) { return matmul(a, b) == matmul(b, a); }

Outcome c9_paths(const fs::path&) {
    Report r;
    r.id = "acceptance_paths";
    json rows = json::array();
    bool ok = true;
    double worst_contain = 0;
    for (auto [D, p] : std::vector<std::pair<i64, i64>>{{2, 3}, {11, 2}, {13, 2}, {73, 2}}) {
        const auto R = MaximalOrder::for_prime(D);
        const auto G = ideal_class_graph(R, p);
        const int Lmax = D == 73 ? 3 : 4;
        const auto Y = PathSpace::build(R, G, 0, Lmax);
        std::vector<i64> ls;
        for (i64 l = 2; ls.size() < 3; ++l)
            if (is_prime(l) && l != p && D % l) ls.push_back(l);
        bool torsion_free = true;
        for (const auto& c : G.classes) torsion_free = torsion_free && c.weight() == 1;
        bool counts = true, comm = true, shifts = true, base = true, contain = true;
        std::vector<std::vector<double>> prev;
        for (int L = 0; L <= Lmax; ++L) {
            const i64 scale = L == 0 ? 1 : (p + 1) * ipow(p, L - 1);
            if (torsion_free)
                counts = counts && i64(Y.level(L).paths.size()) == i64(G.h()) * scale;
            else
                counts = counts && Y.total_weight(L) == Y.total_weight(0) * Q(scale);
            std::vector<IntMatrix> T;
            for (i64 l : ls) T.push_back(hecke_on_paths(Y, L, l));
            const auto S = shift_operators(Y, L);
            for (size_t a = 0; a < T.size(); ++a) {
                for (size_t b = a + 1; b < T.size(); ++b) comm = comm && commute(T[a], T[b]);
                shifts = shifts && commute(T[a], S.shift) && commute(T[a], S.forward);
                if (L == 0) base = base && T[a] == brandt_matrix(R, G.classes, int(ls[a]));
            }
            const auto spec = joint_eigenbasis(T, ls, Y.weights_double(L));
            std::vector<std::vector<double>> cur;
            for (const auto& e : spec.pairs) cur.push_back(e.lambda);
            for (const auto& x : prev) {
                double best = 1e300;
                for (const auto& y : cur) {
                    double d = 0;
                    for (size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(x[k] - y[k]));
                    best = std::min(best, d);
                }
                worst_contain = std::max(worst_contain, best);
                contain = contain && best < 1e-8;
            }
            prev = std::move(cur);
        }
        ok = ok && counts && comm && shifts && base && contain;
        rows.push_back({{"disc", D}, {"p", p}, {"L_max", Lmax}, {"torsion_free", torsion_free},
                        {"counts", counts}, {"hecke_commute", comm}, {"commute_with_shifts", shifts},
                        {"level0_is_brandt", base}, {"spectral_containment", contain}});
    }
    r.outputs = {{"rows", rows}, {"max_containment_gap", worst_contain}};
    r.status = ok ? "pass" : "fail";
    return {ok, "(D,p) in {(2,3),(11,2),(13,2),(73,2)}: counts, exact commutation, L=0 = Brandt, containment gap " +
                    fixed(worst_contain),
            r};
}

// -- 10-12: global experiments --------------------------------------------------

Outcome c10_que(const fs::path& dir) {
    RunConfig c = base_config(dir);
    c.discs = {11};
    c.prime = 2;
    c.N_lo = 1;
    c.N_hi = 4;
    c.target_n = 0;
    Report r = run_que(c);
    std::string med;
    for (const auto& t : r.outputs.at("trend")) med += (med.empty() ? "" : ", ") + fixed(t.at("median_tv").get<double>());
    return {r.status == "trend-pass", "median TV by N = 1..4: " + med + "; masses in [0,1] summing to 1", r};
}

Outcome c11_recurrence(const fs::path&) {
    Report r;
    r.id = "acceptance_recurrence";
    std::mt19937_64 gen(20240601);
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
    const std::complex<double> thetas[] = {1.0, -1.0, {0, 1}, {0, -1}};
    double min_ratio = 1e300, min_gamma = 1e300;
    long samples = 0;
    json per = json::array();
    for (i64 l : {2, 3, 5})
        for (auto th : thetas) {
            double mr = 1e300;
            for (int s = 0; s < 10000; ++s) {
                // the Hecke relation ties the pair: alpha beta = theta
                const auto a = std::polar(1.0, ang(gen)), b = th / a;
                const auto series = recurrence_series(a, b, th, l, 200);
                for (int n = 1; n <= 200; ++n) mr = std::min(mr, series[size_t(n)] / n);
                const auto g = recurrence_constant(a, b, th, l, 1);
                min_gamma = std::min({min_gamma, g.gamma1, g.gamma2});
                ++samples;
            }
            min_ratio = std::min(min_ratio, mr);
            per.push_back({{"ell", l}, {"theta", {th.real(), th.imag()}}, {"min_c_over_n", mr}});
        }
    const bool ok = min_ratio >= 0.2 && min_gamma >= 0.5;
    r.outputs = {{"samples", samples}, {"min_c_over_n", min_ratio}, {"min_gamma", min_gamma}, {"cells", per}};
    r.status = ok ? "pass" : "fail";
    return {ok, std::to_string(samples) + " samples: min c(n)/n " + fixed(min_ratio, 4) + ", min |gamma| " +
                    fixed(min_gamma, 4),
            r};
}

Outcome c12_amplifier(const fs::path& dir) {
    RunConfig c = base_config(dir);
    c.discs = {11};
    c.amp_L = {10, 20};
    c.q_max = 50;
    Report r = run_amplifier(c);
    const auto& run = r.outputs.at("runs").at(0);
    std::string fl;
    for (auto& [L, v] : run.at("amplifier_floor").items()) fl += " L=" + L + ": " + fixed(v.get<double>(), 4);
    return {r.status == "pass", "Iwaniec floor min " + fixed(run.at("iwaniec_floor_min").get<double>(), 12) +
                                    "; amplifier floor" + fl,
            r};
}

struct Timed {
    Outcome o;
    double secs;
};

std::vector<Timed> run_all(const fs::path& dir) {
    std::vector<Timed> out;
    auto timed = [&](const std::function<Outcome()>& f) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o = f();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.report.write(dir);
        out.push_back({std::move(o), s});
    };
    timed([&] { return c1_gauss(dir); });
    timed([&] { return c2_rsI(dir); });
    timed([&] { return c3_rsIII(dir); });
    timed([&] { return c4_rsII(dir); });
    timed([&] { return c5_routes(dir, out[1].o.report, out[2].o.report, out[3].o.report); });
    timed([&] { return c6_brandt(dir); });
    timed([&] { return c7_d73(dir); });
    timed([&] { return c8_returns(dir); });
    timed([&] { return c9_paths(dir); });
    timed([&] { return c10_que(dir); });
    timed([&] { return c11_recurrence(dir); });
    timed([&] { return c12_amplifier(dir); });
    return out;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> m;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), dir).string();
        if (rel.rfind(".cache", 0) == 0) continue;
        std::ifstream in(e.path(), std::ios::binary);
        m[rel] = std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
    fs::remove_all(root);
    // runtime limits in seconds, 0 when the criterion states none
    const double limits[] = {10, 300, 300, 600, 0, 120, 0, 300, 0, 900, 60, 0};
    const auto first = run_all(root / "run1");
    bool all = true;
    for (size_t k = 0; k < first.size(); ++k) {
        const auto& t = first[k];
        const bool in_time = limits[k] == 0 || t.secs < limits[k];
        const bool pass = t.o.pass && in_time;
        all = all && pass;
        std::printf("criterion %2zu %s  %s [%.1f s%s]\n", k + 1, pass ? "PASS" : "FAIL", t.o.detail.c_str(),
                    t.secs, in_time ? "" : ", over the time limit");
        std::fflush(stdout);
    }
    // rerun with the same seeds; the graph cache from run1 is reused under a fresh out dir
    fs::create_directories(root / "run2");
    fs::copy(root / "run1" / ".cache", root / "run2" / ".cache", fs::copy_options::recursive);
    const auto second = run_all(root / "run2");
    const auto a = snapshot(root / "run1"), b = snapshot(root / "run2");
    std::vector<std::string> differ;
    for (const auto& [name, body] : a)
        if (!b.count(name) || b.at(name) != body) differ.push_back(name);
    for (const auto& [name, body] : b)
        if (!a.count(name)) differ.push_back(name);
    const bool det = differ.empty() && !a.empty();
    all = all && det;
    std::printf("criterion 13 %s  %zu report files byte-identical across reruns%s\n", det ? "PASS" : "FAIL",
                a.size(), det ? "" : (", first mismatch " + differ.front()).c_str());
    (void)second;
    return all ? 0 : 4;
}
